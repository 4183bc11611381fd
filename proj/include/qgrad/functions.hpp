#pragma once

// Test functions with analytic derivatives, shared by the quantum simulator,
// the finite-difference baselines and the error predictor.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgrad/core.hpp"

namespace qgrad {

struct ValueRange {
    double min = 0.0;
    double max = 0.0;
};

struct TestFunction {
    std::string name;
    int dim = 1;
    std::function<double(const Vector&)> eval;
    std::function<Vector(const Vector&)> grad;
    std::function<Matrix(const Vector&)> hess;
    /// Third partial derivative d^3 f / dx_i dx_j dx_k, when known analytically.
    std::function<double(const Vector&, int, int, int)> third;
    /// Bounds on eval over the sampled domain, when supplied.
    std::optional<ValueRange> range;

    double operator()(const Vector& x) const { return eval(x); }
};

TestFunction linear(const Vector& gradient, double constant);

/// c + g.x + x^T H x / 2. Throws ValidationError unless H is symmetric.
TestFunction quadratic(const Vector& gradient, const Matrix& hessian, double constant);

/// a3 x^3 in one dimension.
TestFunction cubic_1d(double a3);

/// amplitude * sin(k . x).
TestFunction sinusoid(double amplitude, const Vector& wavevector);

/// Returns a copy of f with range metadata attached.
TestFunction with_range(TestFunction f, double lo, double hi);

/// Min and max of f over the hypercube sampled by spec, by a coarse scan of
/// at most `points_per_axis` points per axis (always including the lattice
/// corners). Uses f.range when present.
ValueRange function_range(const TestFunction& f, const ProblemSpec& spec, int points_per_axis = 33);

/// Parameters for building catalog entries by name.
struct CatalogParams {
    int d = 1;
    Vector gradient;       ///< linear, quadratic
    Matrix hessian;        ///< quadratic
    double constant = 0.0;
    double coefficient = 1.0;  ///< cubic a3, sinusoid amplitude
    Vector wavevector;     ///< sinusoid
};

class FunctionCatalog {
public:
    using Builder = std::function<TestFunction(const CatalogParams&)>;

    /// Catalog with the built-in entries: linear, quadratic, cubic, sinusoid.
    static FunctionCatalog standard();

    void add(const std::string& name, Builder builder);
    bool contains(const std::string& name) const;
    std::vector<std::string> names() const;

    /// Throws ValidationError for unknown names.
    TestFunction make(const std::string& name, const CatalogParams& params) const;

private:
    std::map<std::string, Builder> entries_;
};

}  // namespace qgrad
