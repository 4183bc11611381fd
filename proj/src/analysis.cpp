#include "qgrad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qgrad {

namespace {

constexpr double kRankTolerance = 1e-12;
constexpr double kEdgeTolerance = 1e-12;

void require_symmetric(const Matrix& h, int d) {
    if (h.rows() != d || h.cols() != d) throw ValidationError("Hessian must be d x d");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ValidationError("Hessian must be symmetric");
    }
}

void require_range(double f_max, double f_min, double m, double l) {
    if (!(f_max > f_min)) throw ValidationError("precision bits: f_max must exceed f_min");
    if (!(m > 0.0) || !(l > 0.0)) throw ValidationError("precision bits: m and l must be positive");
}

/// Third partial f_ijk, analytic when available, else central differences of the Hessian.
double third_partial(const TestFunction& f, const Vector& x, int i, int j, int k, double h) {
    if (f.third) return f.third(x, i, j, k);
    Vector plus = x;
    Vector minus = x;
    plus[k] += h;
    minus[k] -= h;
    return (f.hess(plus)(i, j) - f.hess(minus)(i, j)) / (2.0 * h);
}

}  // namespace

double SigmaPrediction::support_volume() const {
    return std::abs(support.determinant());
}

double SigmaPrediction::cell_probability() const {
    const double v = support_volume();
    return v > 0.0 ? 1.0 / v : 0.0;
}

std::vector<Vector> SigmaPrediction::support_vertices() const {
    const auto d = static_cast<int>(support.rows());
    std::vector<Vector> out;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        Vector c(d);
        for (int i = 0; i < d; ++i) c[i] = (mask >> i & 1u) ? 0.5 : -0.5;
        out.push_back(support * c);
    }
    return out;
}

SigmaPrediction stationary_phase_sigma(const Matrix& hessian, const ProblemSpec& spec) {
    require_symmetric(hessian, spec.d);
    const double N = static_cast<double>(spec.N);
    SigmaPrediction p;
    p.support = (N * spec.l / spec.m) * hessian;
    p.sigma_k = (p.support.rowwise().squaredNorm() / 12.0).cwiseSqrt();
    // l / (2 sqrt 3) * sqrt(sum_j H_ij^2), written without N.
    p.sigma_grad = (spec.l / (2.0 * std::sqrt(3.0))) * hessian.rowwise().norm();
    return p;
}

bool support_membership(const Vector& k, const SigmaPrediction& prediction, double slack_cells) {
    const Matrix& a = prediction.support;
    if (k.size() != a.rows()) throw ValidationError("support_membership: frequency has wrong dimension");
    if (!(slack_cells >= 0.0)) throw ValidationError("support_membership: slack must be nonnegative");

    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
    cod.setThreshold(kRankTolerance);
    const Matrix pinv = cod.pseudoInverse();
    const Vector u = pinv * k;

    if (cod.rank() < a.rows()) {
        const Vector residual = k - a * u;
        if (residual.cwiseAbs().maxCoeff() > slack_cells + kEdgeTolerance) return false;
    }
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double allowed = 0.5 + slack_cells * pinv.row(i).cwiseAbs().sum() + kEdgeTolerance;
        if (std::abs(u[i]) > allowed) return false;
    }
    return true;
}

double classical_precision_bits(double f_max, double f_min, double m, double l, double n) {
    require_range(f_max, f_min, m, l);
    return std::log2((f_max - f_min) / (m * l / std::exp2(n)));
}

double quantum_precision_bits(double f_max, double f_min, double m, double l, double n, double theta) {
    require_range(f_max, f_min, m, l);
    if (!(theta > 0.0) || theta > 2.0 * std::numbers::pi) {
        throw ValidationError("quantum_precision_bits: theta must lie in (0, 2 pi]");
    }
    return std::log2((f_max - f_min) / ((m * l / std::exp2(n)) * (theta / (2.0 * std::numbers::pi))));
}

double success_probability_bound(double theta) {
    if (!(theta >= 0.0) || !(theta < std::numbers::pi / 2.0)) {
        throw ValidationError("success_probability_bound: theta must lie in [0, pi/2)");
    }
    const double c = std::cos(theta);
    return c * c;
}

double optimal_l(double sigma_target, double d2, double d3, int d, Method method) {
    if (!(sigma_target > 0.0) || d < 1) throw ValidationError("optimal_l: sigma and d must be positive");
    if (method == Method::classical) {
        if (!(d3 > 0.0)) throw ValidationError("optimal_l: D3 must be positive");
        return 2.0 * std::sqrt(6.0 * sigma_target / d3);
    }
    if (!(d2 > 0.0)) throw ValidationError("optimal_l: D2 must be positive");
    return 2.0 * std::sqrt(3.0) * sigma_target / (d2 * std::sqrt(static_cast<double>(d)));
}

DerivativeMagnitudes derivative_magnitudes(const TestFunction& f, const Vector& x, double l, DerivativeScale scale) {
    if (x.size() != f.dim) throw ValidationError("derivative_magnitudes: point has wrong dimension");
    const int d = f.dim;
    const double h = std::max(1e-4, 1e-3 * l);

    std::vector<Vector> points{x};
    if (scale == DerivativeScale::worst_case && d <= 10) {
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            Vector p = x;
            for (int i = 0; i < d; ++i) p[i] += (mask >> i & 1u) ? l / 2.0 : -l / 2.0;
            points.push_back(p);
        }
    }

    DerivativeMagnitudes out;
    double sum2 = 0.0;
    double sum3 = 0.0;
    for (const Vector& p : points) {
        const Matrix hp = f.hess(p);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                out.d2 = std::max(out.d2, std::abs(hp(i, j)));
                sum2 += hp(i, j) * hp(i, j);
                for (int k = 0; k < d; ++k) {
                    const double t = third_partial(f, p, i, j, k, h);
                    out.d3 = std::max(out.d3, std::abs(t));
                    sum3 += t * t;
                }
            }
        }
    }
    if (scale == DerivativeScale::typical) {
        out.d2 = std::sqrt(sum2 / (d * d));
        out.d3 = std::sqrt(sum3 / (d * d * d));
    }
    return out;
}

double alpha_1d(double second_derivative, double l, double m) {
    return l * second_derivative / (2.0 * m);
}

double sigma_1d(double alpha, std::int64_t N) {
    return std::abs(alpha) * static_cast<double>(N) / std::sqrt(3.0);
}

}  // namespace qgrad
