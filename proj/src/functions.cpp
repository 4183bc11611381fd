#include "qgrad/functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qgrad {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

bool is_symmetric(const Matrix& h) {
    if (h.rows() != h.cols()) return false;
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    return (h - h.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTolerance * scale;
}

Vector or_zero(const Vector& v, int d) {
    return v.size() == 0 ? Vector::Zero(d) : v;
}

}  // namespace

TestFunction linear(const Vector& gradient, double constant) {
    const int d = static_cast<int>(gradient.size());
    if (d < 1) throw ValidationError("linear: gradient must have at least one component");
    TestFunction f;
    f.name = "linear";
    f.dim = d;
    f.eval = [gradient, constant](const Vector& x) { return constant + gradient.dot(x); };
    f.grad = [gradient](const Vector&) { return gradient; };
    f.hess = [d](const Vector&) { return Matrix::Zero(d, d).eval(); };
    f.third = [](const Vector&, int, int, int) { return 0.0; };
    return f;
}

TestFunction quadratic(const Vector& gradient, const Matrix& hessian, double constant) {
    const int d = static_cast<int>(gradient.size());
    if (d < 1) throw ValidationError("quadratic: gradient must have at least one component");
    if (hessian.rows() != d || hessian.cols() != d) {
        throw ValidationError("quadratic: Hessian must be d x d");
    }
    if (!is_symmetric(hessian)) throw ValidationError("quadratic: Hessian must be symmetric");
    const Matrix h = 0.5 * (hessian + hessian.transpose());
    TestFunction f;
    f.name = "quadratic";
    f.dim = d;
    f.eval = [gradient, h, constant](const Vector& x) {
        return constant + gradient.dot(x) + 0.5 * x.dot(h * x);
    };
    f.grad = [gradient, h](const Vector& x) { return (gradient + h * x).eval(); };
    f.hess = [h](const Vector&) { return h; };
    f.third = [](const Vector&, int, int, int) { return 0.0; };
    return f;
}

TestFunction cubic_1d(double a3) {
    TestFunction f;
    f.name = "cubic";
    f.dim = 1;
    f.eval = [a3](const Vector& x) { return a3 * x[0] * x[0] * x[0]; };
    f.grad = [a3](const Vector& x) {
        Vector g(1);
        g[0] = 3.0 * a3 * x[0] * x[0];
        return g;
    };
    f.hess = [a3](const Vector& x) {
        Matrix h(1, 1);
        h(0, 0) = 6.0 * a3 * x[0];
        return h;
    };
    f.third = [a3](const Vector&, int, int, int) { return 6.0 * a3; };
    return f;
}

TestFunction sinusoid(double amplitude, const Vector& wavevector) {
    const int d = static_cast<int>(wavevector.size());
    if (d < 1) throw ValidationError("sinusoid: wavevector must have at least one component");
    TestFunction f;
    f.name = "sinusoid";
    f.dim = d;
    f.eval = [amplitude, wavevector](const Vector& x) { return amplitude * std::sin(wavevector.dot(x)); };
    f.grad = [amplitude, wavevector](const Vector& x) {
        return (amplitude * std::cos(wavevector.dot(x)) * wavevector).eval();
    };
    f.hess = [amplitude, wavevector](const Vector& x) {
        return (-amplitude * std::sin(wavevector.dot(x)) * wavevector * wavevector.transpose()).eval();
    };
    f.third = [amplitude, wavevector](const Vector& x, int i, int j, int k) {
        return -amplitude * std::cos(wavevector.dot(x)) * wavevector[i] * wavevector[j] * wavevector[k];
    };
    return f;
}

TestFunction with_range(TestFunction f, double lo, double hi) {
    if (!(lo <= hi)) throw ValidationError("with_range: lower bound exceeds upper bound");
    f.range = ValueRange{lo, hi};
    return f;
}

ValueRange function_range(const TestFunction& f, const ProblemSpec& spec, int points_per_axis) {
    if (f.range) return *f.range;
    if (f.dim != spec.d) throw ValidationError("function_range: dimension mismatch");

    // Keep the scan below ~2^20 evaluations regardless of d.
    std::int64_t per_axis = std::min<std::int64_t>(std::max(points_per_axis, 2), spec.N);
    while (per_axis > 2 && std::pow(static_cast<double>(per_axis), spec.d) > 1048576.0) --per_axis;

    std::vector<std::int64_t> ticks(per_axis);
    for (std::int64_t t = 0; t < per_axis; ++t) {
        ticks[t] = (t * (spec.N - 1)) / (per_axis - 1);
    }

    ValueRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    LatticePoint counter(spec.d, 0);
    LatticePoint delta(spec.d);
    while (true) {
        for (int j = 0; j < spec.d; ++j) delta[j] = ticks[counter[j]];
        const double v = f.eval(encode_input(delta, spec));
        r.min = std::min(r.min, v);
        r.max = std::max(r.max, v);
        int axis = spec.d - 1;
        while (axis >= 0 && ++counter[axis] == per_axis) {
            counter[axis] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    return r;
}

FunctionCatalog FunctionCatalog::standard() {
    FunctionCatalog c;
    c.add("linear", [](const CatalogParams& p) { return linear(or_zero(p.gradient, p.d), p.constant); });
    c.add("quadratic", [](const CatalogParams& p) {
        const Matrix h = p.hessian.size() == 0 ? Matrix::Zero(p.d, p.d).eval() : p.hessian;
        return quadratic(or_zero(p.gradient, p.d), h, p.constant);
    });
    c.add("cubic", [](const CatalogParams& p) {
        if (p.d != 1) throw ValidationError("cubic is one-dimensional");
        return cubic_1d(p.coefficient);
    });
    c.add("sinusoid", [](const CatalogParams& p) {
        const Vector k = p.wavevector.size() == 0 ? Vector::Ones(p.d).eval() : p.wavevector;
        return sinusoid(p.coefficient, k);
    });
    return c;
}

void FunctionCatalog::add(const std::string& name, Builder builder) {
    entries_[name] = std::move(builder);
}

bool FunctionCatalog::contains(const std::string& name) const {
    return entries_.count(name) != 0;
}

std::vector<std::string> FunctionCatalog::names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : entries_) out.push_back(name);
    return out;
}

TestFunction FunctionCatalog::make(const std::string& name, const CatalogParams& params) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw ValidationError("unknown function '" + name + "'");
    TestFunction f = it->second(params);
    if (f.dim != params.d) throw ValidationError("function '" + name + "' built with wrong dimension");
    return f;
}

}  // namespace qgrad
