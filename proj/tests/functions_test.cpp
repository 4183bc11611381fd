#include "qgrad/functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace qgrad;

namespace {

// Central-difference gradient of eval; independent of the analytic callbacks.
Vector fd_grad(const TestFunction& f, const Vector& x, double h) {
    Vector g(f.dim);
    for (int i = 0; i < f.dim; ++i) {
        Vector p = x, q = x;
        p[i] += h;
        q[i] -= h;
        g[i] = (f.eval(p) - f.eval(q)) / (2 * h);
    }
    return g;
}

Matrix fd_hess(const TestFunction& f, const Vector& x, double h) {
    Matrix H(f.dim, f.dim);
    for (int j = 0; j < f.dim; ++j) {
        Vector p = x, q = x;
        p[j] += h;
        q[j] -= h;
        H.col(j) = (f.grad(p) - f.grad(q)) / (2 * h);
    }
    return H;
}

double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

std::vector<TestFunction> catalog_samples() {
    Vector g(3);
    g << 0.25, -0.5, 1.5;
    Matrix H(3, 3);
    H << 2.0, 0.3, -0.1, 0.3, -1.0, 0.7, -0.1, 0.7, 0.5;
    Vector k(2);
    k << 1.3, -0.7;
    return {linear(g, 0.2), quadratic(g, H, -1.0), cubic_1d(0.8), sinusoid(2.0, k)};
}

}  // namespace

TEST(Linear, Examples) {
    const auto f0 = linear(Vector::Zero(1), 0.0);
    EXPECT_EQ(f0.eval(Vector::Constant(1, 3.7)), 0.0);
    const auto f1 = linear(Vector::Constant(1, 0.25), 1.0);
    EXPECT_EQ(f1.grad(Vector::Constant(1, -9.0))[0], 0.25);
    Vector g(2);
    g << 0.25, -0.125;
    EXPECT_EQ(linear(g, 0.0).hess(Vector::Ones(2)), Matrix::Zero(2, 2));
}

TEST(Quadratic, Examples) {
    const auto f = quadratic(Vector::Zero(2), Matrix::Identity(2, 2), 0.0);
    EXPECT_EQ(f.grad(Vector::Ones(2)), Vector::Ones(2));

    const double m = 1.0, N = 64.0;
    Matrix M(2, 2);
    M << 1, 1, 1, -1;
    const Matrix H = (m / N) * 0.1 * M;
    EXPECT_EQ(quadratic(Vector::Zero(2), H, 0.0).hess(Vector::Zero(2)), H);

    const auto q = quadratic(Vector::Constant(1, 2.0), Matrix::Zero(1, 1), 5.0);
    EXPECT_DOUBLE_EQ(q.eval(Vector::Constant(1, 3.0)), 11.0);
}

TEST(Quadratic, RejectsAsymmetricOrMisshapen) {
    Matrix H(2, 2);
    H << 1, 2, 0, 1;
    EXPECT_THROW(quadratic(Vector::Zero(2), H, 0.0), ValidationError);
    EXPECT_THROW(quadratic(Vector::Zero(2), Matrix::Identity(3, 3), 0.0), ValidationError);
}

TEST(Cubic, Examples) {
    EXPECT_DOUBLE_EQ(cubic_1d(1.0).eval(Vector::Constant(1, 2.0)), 8.0);
    const auto f = cubic_1d(0.7);
    for (double x : {-3.0, 0.0, 1.25}) EXPECT_DOUBLE_EQ(f.third(Vector::Constant(1, x), 0, 0, 0), 4.2);
}

TEST(Sinusoid, HessianByHand) {
    // d^2/dx^2 sin(k x) = -k^2 sin(k x); zero at the origin, -k^2 at k x = pi/2.
    const double k = 1.7;
    const auto f = sinusoid(1.0, Vector::Constant(1, k));
    EXPECT_DOUBLE_EQ(f.hess(Vector::Zero(1))(0, 0), 0.0);
    EXPECT_NEAR(f.hess(Vector::Constant(1, M_PI / (2 * k)))(0, 0), -k * k, 1e-14);
    EXPECT_NEAR(f.third(Vector::Zero(1), 0, 0, 0), -k * k * k, 1e-14);
}

TEST(Catalog, SelfConsistencyAgainstFiniteDifferences) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (const auto& f : catalog_samples()) {
        for (int trial = 0; trial < 20; ++trial) {
            Vector x(f.dim);
            for (int i = 0; i < f.dim; ++i) x[i] = u(rng);
            EXPECT_LT(rel_err(fd_grad(f, x, 1e-5), f.grad(x)), 1e-6) << f.name;
            EXPECT_LT(rel_err(fd_hess(f, x, 1e-5), f.hess(x)), 1e-6) << f.name;
            const Matrix H = f.hess(x);
            EXPECT_LT((H - H.transpose()).cwiseAbs().maxCoeff(), 1e-15) << f.name;
        }
    }
}

TEST(Catalog, CentralDifferenceConvergesAtSecondOrder) {
    // Sinusoid has nonzero third derivatives at this point, so the error is O(h^2).
    Vector k(2);
    k << 1.3, -0.7;
    const auto f = sinusoid(2.0, k);
    Vector x(2);
    x << 0.4, 0.9;
    const double e1 = (fd_grad(f, x, 1e-2) - f.grad(x)).norm();
    const double e2 = (fd_grad(f, x, 5e-3) - f.grad(x)).norm();
    EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.05);
}

TEST(Catalog, StandardEntries) {
    const auto cat = FunctionCatalog::standard();
    EXPECT_EQ(cat.names(), (std::vector<std::string>{"cubic", "linear", "quadratic", "sinusoid"}));
    CatalogParams p;
    p.d = 2;
    const auto f = cat.make("quadratic", p);
    EXPECT_EQ(f.dim, 2);
    EXPECT_EQ(f.eval(Vector::Ones(2)), 0.0);
    EXPECT_THROW(cat.make("rosenbrock", p), ValidationError);
    EXPECT_THROW(cat.make("cubic", p), ValidationError);
}

TEST(FunctionRange, ScanCoversLatticeCorners) {
    const ProblemSpec s = make_spec(2, 16, 8, 2.0, 1.0);
    Vector g(2);
    g << 1.0, -2.0;
    const auto r = function_range(linear(g, 0.0), s);
    // Corners are x in {-1, 1 - 2/16}; extremes of x1 - 2 x2.
    EXPECT_DOUBLE_EQ(r.min, -1.0 - 2.0 * (1.0 - 0.125));
    EXPECT_DOUBLE_EQ(r.max, (1.0 - 0.125) + 2.0);

    const auto tagged = with_range(linear(g, 0.0), -10.0, 10.0);
    EXPECT_EQ(function_range(tagged, s).max, 10.0);
    EXPECT_THROW(with_range(linear(g, 0.0), 1.0, 0.0), ValidationError);
}
