#pragma once

// Closed-form predictions: oracle precision requirements, the success
// bound for bounded phase error, the stationary-phase peak of the quadratic
// term, and the step-size tradeoff against finite differences.

#include <vector>

#include "qgrad/core.hpp"
#include "qgrad/functions.hpp"

namespace qgrad {

/// Stationary-phase peak for Hessian H. The outcome peak (in lattice units)
/// is uniform over the parallelotope A C, where A = (N l / m) H and C is the
/// centered unit cube.
struct SigmaPrediction {
    Vector sigma_k;     ///< per-axis std. dev., lattice units
    Vector sigma_grad;  ///< per-axis std. dev., gradient units; (m/N) sigma_k
    Matrix support;     ///< A

    /// |det A|: number of lattice cells covered by the peak.
    double support_volume() const;
    /// 1 / |det A|, or 0 when A is singular.
    double cell_probability() const;
    /// The 2^d vertices A c for c in {-1/2, 1/2}^d.
    std::vector<Vector> support_vertices() const;
};

/// sigma_k_i^2 = (1/12) sum_j A_ij^2. Throws ValidationError for asymmetric H.
SigmaPrediction stationary_phase_sigma(const Matrix& hessian, const ProblemSpec& spec);

inline constexpr double kDefaultSlackCells = 1.5;

/// Whether the signed frequency k lies in A C dilated by `slack_cells`
/// lattice cells (infinity norm). The dilation is carried into cube
/// coordinates through the (pseudo-)inverse of A; for rank-deficient A the
/// residual of k off the range of A must also be within slack.
bool support_membership(const Vector& k, const SigmaPrediction& prediction, double slack_cells = kDefaultSlackCells);

/// log2[(f_max - f_min) / (m l / 2^n)].
double classical_precision_bits(double f_max, double f_min, double m, double l, double n);

/// log2[(f_max - f_min) / ((m l / 2^n)(theta / 2 pi))], theta in (0, 2 pi].
double quantum_precision_bits(double f_max, double f_min, double m, double l, double n, double theta);

/// cos^2 theta for 0 <= theta < pi/2.
double success_probability_bound(double theta);

enum class Method { classical, quantum };

/// Step size reaching target uncertainty sigma: 2 sqrt(6 sigma / D3) for
/// central differences, 2 sqrt(3) sigma / (D2 sqrt(d)) for the quantum
/// estimator.
double optimal_l(double sigma_target, double d2, double d3, int d, Method method);

enum class DerivativeScale {
    typical,     ///< RMS over partials at the evaluation point
    worst_case,  ///< largest |partial| over the centre and corners of the cube
};

struct DerivativeMagnitudes {
    double d2 = 0.0;
    double d3 = 0.0;
};

DerivativeMagnitudes derivative_magnitudes(const TestFunction& f, const Vector& x, double l, DerivativeScale scale);

/// alpha = (l / 2m) f'' for the one-dimensional reduction.
double alpha_1d(double second_derivative, double l, double m);

/// alpha N / sqrt(3).
double sigma_1d(double alpha, std::int64_t N);

}  // namespace qgrad
