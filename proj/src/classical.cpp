#include "qgrad/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qgrad {

namespace {

class CountingOracle {
public:
    CountingOracle(const TestFunction& f, const std::optional<ClassicalQuantizer>& q) : f_(f), q_(q) {}

    double operator()(const Vector& x) {
        ++queries_;
        const double v = f_.eval(x);
        return q_ ? q_->apply(v) : v;
    }
    int queries() const { return queries_; }

private:
    const TestFunction& f_;
    const std::optional<ClassicalQuantizer>& q_;
    int queries_ = 0;
};

void check_args(const TestFunction& f, const Vector& x, double l) {
    if (!(l > 0.0)) throw ValidationError("finite difference: l must be positive");
    if (x.size() != f.dim) throw ValidationError("finite difference: point has wrong dimension");
}

ClassicalReport finish(Vector estimate, const CountingOracle& oracle, double l,
                       const std::optional<ClassicalQuantizer>& q) {
    ClassicalReport r;
    r.gradient_estimate = std::move(estimate);
    r.queries = oracle.queries();
    r.l_used = l;
    r.quantized = q.has_value();
    r.n_o = q ? q->codec.bits : 0;
    return r;
}

}  // namespace

ClassicalQuantizer classical_quantizer(const ValueRange& range, double m, double l, int n_bits) {
    if (!(m > 0.0) || !(l > 0.0)) throw ValidationError("classical_quantizer: m and l must be positive");
    if (!(range.max >= range.min)) throw ValidationError("classical_quantizer: empty range");
    const double resolution = m * l / std::ldexp(1.0, n_bits);
    // Codes 0 .. width/resolution inclusive must all be distinct.
    const int bits = std::max(1, static_cast<int>(std::ceil(std::log2((range.max - range.min) / resolution + 1.0))));
    if (bits > 52) throw ValidationError("classical_quantizer: more than 52 bits required");
    return ClassicalQuantizer{FixedPointCodec{range.min, resolution, bits}};
}

ValueRange stencil_range(const TestFunction& f, const Vector& x, double l) {
    check_args(f, x, l);
    ValueRange r{f.eval(x), f.eval(x)};
    auto visit = [&](const Vector& p) {
        const double v = f.eval(p);
        r.min = std::min(r.min, v);
        r.max = std::max(r.max, v);
    };
    for (int i = 0; i < f.dim; ++i) {
        for (double step : {l, l / 2.0, -l / 2.0}) {
            Vector p = x;
            p[i] += step;
            visit(p);
        }
    }
    return r;
}

ClassicalReport forward_difference(const TestFunction& f, const Vector& x, double l,
                                   const std::optional<ClassicalQuantizer>& quantizer) {
    check_args(f, x, l);
    CountingOracle oracle(f, quantizer);
    const double base = oracle(x);
    Vector g(f.dim);
    for (int i = 0; i < f.dim; ++i) {
        Vector p = x;
        p[i] += l;
        g[i] = (oracle(p) - base) / l;
    }
    return finish(std::move(g), oracle, l, quantizer);
}

ClassicalReport central_difference(const TestFunction& f, const Vector& x, double l,
                                   const std::optional<ClassicalQuantizer>& quantizer) {
    check_args(f, x, l);
    CountingOracle oracle(f, quantizer);
    Vector g(f.dim);
    for (int i = 0; i < f.dim; ++i) {
        Vector plus = x;
        Vector minus = x;
        plus[i] += l / 2.0;
        minus[i] -= l / 2.0;
        g[i] = (oracle(plus) - oracle(minus)) / l;
    }
    return finish(std::move(g), oracle, l, quantizer);
}

ScalingFit error_scaling_fit(const TestFunction& f, const Vector& x, const std::vector<double>& l_values,
                             Stencil stencil) {
    if (l_values.size() < 4) throw ValidationError("error_scaling_fit: need at least four step sizes");
    const auto [lo, hi] = std::minmax_element(l_values.begin(), l_values.end());
    if (!(*lo > 0.0) || *hi / *lo < 10.0) {
        throw ValidationError("error_scaling_fit: step sizes must be positive and span a decade");
    }

    ScalingFit fit;
    fit.l_values = l_values;
    const Vector truth = f.grad(x);
    const double scale = std::abs(f.eval(x)) + truth.norm() + 1.0;
    std::vector<double> lx;
    std::vector<double> ly;
    for (double l : l_values) {
        const ClassicalReport r = stencil == Stencil::central ? central_difference(f, x, l) : forward_difference(f, x, l);
        const double err = (r.gradient_estimate - truth).norm();
        fit.errors.push_back(err);
        // Roundoff in a difference quotient grows like eps * |f| / l.
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale / l;
        if (err <= floor) {
            fit.degenerate = true;
            continue;
        }
        lx.push_back(std::log(l));
        ly.push_back(std::log(err));
    }
    if (lx.size() < 2) {
        fit.slope = std::numeric_limits<double>::quiet_NaN();
        fit.intercept = std::numeric_limits<double>::quiet_NaN();
        fit.degenerate = true;
        return fit;
    }
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

}  // namespace qgrad
