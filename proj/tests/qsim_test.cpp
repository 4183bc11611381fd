#include "qgrad/qsim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qgrad;

namespace {

constexpr double kPi = std::numbers::pi;

AmplitudeGrid random_grid(GridShape shape, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<Complex> amps(shape.size());
    double norm = 0.0;
    for (auto& a : amps) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto& a : amps) a /= std::sqrt(norm);
    return AmplitudeGrid(shape, std::move(amps));
}

double max_diff(const AmplitudeGrid& a, const AmplitudeGrid& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double wrap_angle(double a) {
    return a - 2 * kPi * std::floor(a / (2 * kPi) + 0.5);
}

}  // namespace

TEST(AmplitudeGrid, RejectsWrongLength) {
    EXPECT_THROW(AmplitudeGrid(GridShape{2, 4}, std::vector<Complex>(15)), ValidationError);
}

TEST(BuildPhaseState, ZeroFunctionIsUniform) {
    const ProblemSpec s = make_spec(2, 6, 8, 1.0, 1.0);
    const auto grid = build_phase_state(linear(Vector::Zero(2), 0.0), s);
    EXPECT_EQ(grid.query_count(), 1);
    for (const auto& a : grid.amplitudes()) {
        EXPECT_NEAR(a.real(), 1.0 / 6.0, 1e-15);
        EXPECT_NEAR(a.imag(), 0.0, 1e-15);
    }
}

TEST(BuildPhaseState, TwoPointHandCalculation) {
    // N=2, N_o=4, m=l=1: samples at x = (1/2)(delta - 1) = {-0.5, 0}, scale N N_o/(m l) = 8.
    const ProblemSpec s = make_spec(1, 2, 2, 1.0, 1.0);
    // f(x) = x: g = {round(-4), 0} mod 4 = {0, 0} -> flat.
    const auto flat = build_phase_state(linear(Vector::Ones(1), 0.0), s);
    EXPECT_NEAR(std::abs(flat[0] - Complex(M_SQRT1_2, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(flat[1] - Complex(M_SQRT1_2, 0)), 0.0, 1e-15);
    // f(x) = 0.3 x: g = {round(-1.2), 0} = {3, 0} -> (-i/sqrt2, 1/sqrt2).
    const auto tilted = build_phase_state(linear(Vector::Constant(1, 0.3), 0.0), s);
    EXPECT_NEAR(std::abs(tilted[0] - Complex(0, -M_SQRT1_2)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(tilted[1] - Complex(M_SQRT1_2, 0)), 0.0, 1e-15);
}

TEST(BuildPhaseState, QuadraticPhaseMatchesAnalyticWithinQuantization) {
    ProblemSpec s = make_spec(2, 12, 6, 0.8, 1.5);
    Vector g(2);
    g << 0.2, -0.35;
    Matrix H(2, 2);
    H << 0.9, -0.4, -0.4, 0.3;
    const double c = 0.05;
    const auto grid = build_phase_state(quadratic(g, H, c), s);
    const double N = 12.0;
    for (std::size_t flat = 0; flat < grid.amplitudes().size(); ++flat) {
        const LatticePoint p = unflatten(flat, 2, 12);
        Vector u(2);
        u << p[0] - N / 2, p[1] - N / 2;
        const double expected =
            2 * kPi * (g.dot(u) / s.m + s.l / (2 * s.m * N) * u.dot(H * u) + N * c / (s.m * s.l));
        const double err = wrap_angle(std::arg(grid[flat]) - expected);
        EXPECT_LE(std::abs(err), kPi / 64.0 * (1 + 1e-9)) << flat;
    }
}

TEST(BuildPhaseState, BudgetAndRangeErrors) {
    ProblemSpec s = make_spec(2, 64, 8, 1.0, 1.0);
    s.max_points = 1000;
    EXPECT_THROW(build_phase_state(linear(Vector::Zero(2), 0.0), s), BudgetError);

    const ProblemSpec ok = make_spec(1, 8, 8, 1.0, 1.0);
    const auto f = with_range(linear(Vector::Ones(1), 0.0), -0.1, 0.1);
    EXPECT_THROW(build_phase_state(f, ok), Error);
    EXPECT_THROW(build_phase_state(linear(Vector::Ones(2), 0.0), ok), ValidationError);
}

TEST(FourierTransform, ImpulseGivesUniformMagnitudes) {
    std::vector<Complex> amps(16);
    amps[0] = 1.0;
    const AmplitudeGrid impulse(GridShape{1, 16}, amps);
    for (auto* fn : {+[](const AmplitudeGrid& g) { return fourier_transform(g, Direction::forward); },
                     +[](const AmplitudeGrid& g) { return brute_force_transform(g, Direction::forward); }}) {
        const auto out = fn(impulse);
        for (const auto& a : out.amplitudes()) EXPECT_NEAR(std::abs(a), 0.25, 1e-14);
    }
}

TEST(FourierTransform, PlanewaveMapsToItsFrequency) {
    const auto out = fourier_transform(AmplitudeGrid::planewave(GridShape{1, 8}, Vector::Constant(1, 3.0)),
                                       Direction::forward);
    const auto dist = outcome_distribution(out);
    EXPECT_NEAR(dist.probs[3], 1.0, 1e-12);

    // Negative frequency -2 lands on N - 2.
    Vector nu(2);
    nu << -2.0, 5.0;
    const auto d2 = outcome_distribution(fourier_transform(AmplitudeGrid::planewave(GridShape{2, 10}, nu), Direction::forward));
    EXPECT_NEAR(d2.at({8, 5}), 1.0, 1e-12);
}

TEST(FourierTransform, ForwardInverseIdentityAndBruteForceAgreement) {
    for (GridShape shape : {GridShape{1, 4}, GridShape{2, 6}, GridShape{2, 16}, GridShape{1, 13}, GridShape{3, 5}}) {
        const auto g = random_grid(shape, shape.size());
        const auto f = fourier_transform(g, Direction::forward);
        EXPECT_NEAR(f.norm_squared(), 1.0, 1e-10);
        EXPECT_LT(max_diff(fourier_transform(f, Direction::inverse), g), 1e-10);
        EXPECT_LT(max_diff(f, brute_force_transform(g, Direction::forward)), 1e-10);
        EXPECT_LT(max_diff(fourier_transform(g, Direction::inverse), brute_force_transform(g, Direction::inverse)), 1e-10);
    }
}

TEST(FourierTransform, BruteForceGuard) {
    EXPECT_THROW(brute_force_transform(AmplitudeGrid::uniform(GridShape{2, 65}), Direction::forward), ValidationError);
}

TEST(OutcomeDistribution, UniformAndNormDefect) {
    const auto dist = outcome_distribution(AmplitudeGrid::uniform(GridShape{2, 4}));
    for (double p : dist.probs) EXPECT_NEAR(p, 1.0 / 16.0, 1e-15);

    std::vector<Complex> amps(4, Complex(0.5, 0.0));
    amps[0] *= std::sqrt(1.0 - 0.01 * 4);  // norm^2 = 1 - 0.01
    const auto defective = outcome_distribution(AmplitudeGrid(GridShape{1, 4}, amps));
    EXPECT_NEAR(defective.total(), 1.0, 0.01 + 1e-15);
}

TEST(Sample, PointMassAndDeterminism) {
    OutcomeDistribution point{GridShape{2, 4}, std::vector<double>(16, 0.0)};
    point.probs[6] = 1.0;
    for (const auto& k : sample(point, 200, 3)) EXPECT_EQ(k, (LatticePoint{1, 2}));

    const auto uniform = outcome_distribution(AmplitudeGrid::uniform(GridShape{1, 16}));
    EXPECT_EQ(sample(uniform, 500, 42), sample(uniform, 500, 42));
    EXPECT_NE(sample(uniform, 500, 42), sample(uniform, 500, 43));
    EXPECT_THROW(sample(uniform, 0, 1), ValidationError);
}

TEST(Sample, UniformFrequenciesWithinFiveSigma) {
    const auto uniform = outcome_distribution(AmplitudeGrid::uniform(GridShape{1, 16}));
    const std::size_t shots = 100000;
    std::vector<double> counts(16, 0.0);
    for (const auto& k : sample(uniform, shots, 2024)) counts[static_cast<std::size_t>(k[0])] += 1.0;
    const double p = 1.0 / 16.0;
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(shots));
    for (double c : counts) EXPECT_LT(std::abs(c / static_cast<double>(shots) - p), 5 * sigma);
}

TEST(CircularStats, WrapAroundMeanAndVariance) {
    std::vector<double> point(10, 0.0);
    point[7] = 1.0;
    EXPECT_NEAR(circular_stats(point).mean, -3.0, 1e-12);
    EXPECT_NEAR(circular_stats(point).variance, 0.0, 1e-20);

    std::vector<double> split(10, 0.0);
    split[0] = 0.5;
    split[9] = 0.5;
    const auto s = circular_stats(split);
    EXPECT_NEAR(s.mean, -0.5, 1e-12);
    EXPECT_NEAR(s.variance, 0.25, 1e-12);

    EXPECT_NEAR(circular_stats(std::vector<std::int64_t>{0, 9, 0, 9}, 10).variance, 0.25, 1e-12);
}

TEST(NearestRepresentable, TiesTowardNegative) {
    const ProblemSpec s = make_spec(1, 8, 4, 1.0, 1.0);
    EXPECT_EQ(nearest_representable(Vector::Constant(1, 2.5 / 8), s), (LatticePoint{2}));
    EXPECT_EQ(nearest_representable(Vector::Constant(1, -2.5 / 8), s), (LatticePoint{5}));
    EXPECT_EQ(nearest_representable(Vector::Constant(1, 0.3 / 8), s), (LatticePoint{0}));
}

TEST(RunGradientEstimation, ExactPlanewaveSucceedsWithCertainty) {
    // N g_j / m integer and N_o nu_j / N integer, so every phase is exact.
    ProblemSpec s = make_spec(2, 16, 10, 0.5, 2.0);
    Vector g(2);
    g << 2.0 * 3 / 16, -2.0 * 5 / 16;
    const auto r = run_gradient_estimation(linear(g, 0.0), s, RunOptions{64, 1, 1});
    EXPECT_NEAR(r.success_probability, 1.0, 1e-9);
    EXPECT_EQ(r.mode, (LatticePoint{3, 11}));
    EXPECT_NEAR((r.decoded_gradient - g).norm(), 0.0, 1e-15);
    EXPECT_EQ(r.query_count, 1);
    EXPECT_LT(r.unitarity_defect, 1e-10);
    for (const auto& k : r.samples) EXPECT_EQ(k, r.mode);
}

TEST(RunGradientEstimation, QuadraticVarianceNearStationaryPhase) {
    // alpha = (l/2m) f'' = 0.02 at N = 80; predicted variance alpha^2 N^2 / 3.
    const ProblemSpec s = make_spec(1, 80, 20, 1.0, 1.0);
    const auto f = quadratic(Vector::Zero(1), Matrix::Constant(1, 1, 0.04), 0.0);
    const auto r = run_gradient_estimation(f, s, RunOptions{1000, 5, 1});
    const double predicted = 0.02 * 0.02 * 80 * 80 / 3.0;
    EXPECT_NEAR(predicted, 0.853333333333, 1e-12);
    EXPECT_NEAR(std::sqrt(r.axes[0].exact.variance) / std::sqrt(predicted), 1.0, 0.25);
}

TEST(RunGradientEstimation, GlobalPhaseInvariance) {
    const ProblemSpec s = make_spec(2, 12, 8, 1.0, 1.0);
    Vector g(2);
    g << 0.13, -0.21;
    Matrix H(2, 2);
    H << 0.5, 0.2, 0.2, -0.3;
    const double step = s.m * s.l / (12.0 * 256.0);
    const auto a = run_gradient_estimation(quadratic(g, H, 0.0), s, RunOptions{10, 1, 1});
    const auto b = run_gradient_estimation(quadratic(g, H, 37 * step), s, RunOptions{10, 1, 1});
    for (std::size_t i = 0; i < a.distribution.probs.size(); ++i) {
        EXPECT_NEAR(a.distribution.probs[i], b.distribution.probs[i], 1e-12);
    }
}

TEST(RunGradientEstimation, ShiftCovariance) {
    const ProblemSpec s = make_spec(2, 16, 10, 1.0, 1.0);
    Matrix H(2, 2);
    H << 0.6, 0.1, 0.1, -0.4;
    Vector shift(2);
    shift << 3.0 / 16, -2.0 / 16;  // N a / m integer; N_o a / m = 64 * shift integer
    const auto base = run_gradient_estimation(quadratic(Vector::Zero(2), H, 0.0), s, RunOptions{1, 1, 1});
    const auto moved = run_gradient_estimation(quadratic(shift, H, 0.0), s, RunOptions{1, 1, 1});
    for (std::size_t flat = 0; flat < base.distribution.probs.size(); ++flat) {
        LatticePoint k = unflatten(flat, 2, 16);
        k[0] = (k[0] + 3) % 16;
        k[1] = (k[1] + 16 - 2) % 16;
        EXPECT_NEAR(moved.distribution.at(k), base.distribution.probs[flat], 1e-12);
    }
}

TEST(RunGradientEstimation, SingleQueryForAnyDimension) {
    for (int d = 1; d <= 3; ++d) {
        const ProblemSpec s = make_spec(d, 6, 8, 1.0, 1.0);
        EXPECT_EQ(run_gradient_estimation(linear(Vector::Zero(d), 0.0), s, RunOptions{1, 1, 1}).query_count, 1);
    }
}

TEST(Fidelity, ExactPlanewaveIsOne) {
    const ProblemSpec s = make_spec(2, 8, 10, 1.0, 1.0);
    Vector g(2);
    g << 0.125, -0.375;
    const auto grid = build_phase_state(linear(g, 0.0), s);
    EXPECT_NEAR(ideal_state_and_fidelity(grid, g, s).fidelity, 1.0, 1e-12);
    Vector bad(2);
    bad << 0.5, 0.0;
    EXPECT_THROW(ideal_state_and_fidelity(grid, bad, s), ValidationError);
}

TEST(Fidelity, BoundedPhaseErrorBounds) {
    const double theta = kPi / 8;
    EXPECT_NEAR(std::cos(theta), 0.923879532511, 1e-12);
    EXPECT_NEAR(std::cos(theta) * std::cos(theta), 0.853553390593, 1e-12);

    const ProblemSpec s = make_spec(2, 8, 10, 1.0, 1.0);
    Vector g(2);
    g << 0.25, -0.125;
    const auto exact = ideal_state(g, s);
    const LatticePoint target = nearest_representable(g, s);
    for (int trial = 0; trial < 100; ++trial) {
        for (auto kind : {PhaseNoise::uniform, PhaseNoise::adversarial}) {
            const auto noisy = perturb_phases(exact, theta, static_cast<std::uint64_t>(trial), kind);
            EXPECT_GE(ideal_state_and_fidelity(noisy, g, s).fidelity, std::cos(theta) - 1e-12);
            const auto dist = outcome_distribution(fourier_transform(noisy, Direction::forward));
            EXPECT_GE(dist.at(target), std::cos(theta) * std::cos(theta) - 1e-12);
        }
    }
}
