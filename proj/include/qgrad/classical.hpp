#pragma once

// Finite-difference gradient baselines with query accounting.

#include <optional>
#include <vector>

#include "qgrad/core.hpp"
#include "qgrad/functions.hpp"

namespace qgrad {

/// Fixed-point rounding applied to every classical function evaluation.
struct ClassicalQuantizer {
    FixedPointCodec codec;

    double apply(double value) const { return codec.decode(codec.encode(value)); }
};

/// Quantizer with offset range.min and step m l / 2^n_bits, which resolves
/// gradient components to m / 2^n_bits over a difference of width l. The
/// register has ceil(log2(width / step + 1)) bits, at most one more than the
/// classical precision requirement. Values outside the range wrap, so the
/// range must cover every queried point.
ClassicalQuantizer classical_quantizer(const ValueRange& range, double m, double l, int n_bits);

/// Min and max of f over x, x + l e_i and x +- (l/2) e_i: every point either
/// stencil queries. Not counted as queries.
ValueRange stencil_range(const TestFunction& f, const Vector& x, double l);

struct ClassicalReport {
    Vector gradient_estimate;
    int queries = 0;
    double l_used = 0.0;
    bool quantized = false;
    int n_o = 0;  ///< bits of the quantizer when quantized
};

/// g_i = (f(x + l e_i) - f(x)) / l using d + 1 queries.
ClassicalReport forward_difference(const TestFunction& f, const Vector& x, double l,
                                   const std::optional<ClassicalQuantizer>& quantizer = std::nullopt);

/// g_i = (f(x + l/2 e_i) - f(x - l/2 e_i)) / l using 2d queries.
ClassicalReport central_difference(const TestFunction& f, const Vector& x, double l,
                                   const std::optional<ClassicalQuantizer>& quantizer = std::nullopt);

enum class Stencil { forward, central };

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Some errors sit at the floating-point noise floor; the slope is not meaningful.
    bool degenerate = false;
    std::vector<double> l_values;
    std::vector<double> errors;  ///< Euclidean error against f.grad(x)
};

/// Least-squares slope of log(error) against log(l). Needs at least four
/// step sizes spanning at least one decade.
ScalingFit error_scaling_fit(const TestFunction& f, const Vector& x, const std::vector<double>& l_values,
                             Stencil stencil = Stencil::central);

}  // namespace qgrad
