#include "qgrad/core.hpp"

#include <cmath>
#include <sstream>

namespace qgrad {

namespace {

// Largest magnitude at which every integer is exactly representable in a double.
constexpr double kExactIntegerLimit = 9007199254740992.0;  // 2^53

double rounded_half_up(double value) {
    if (!std::isfinite(value)) {
        throw ValidationError("fixed-point rounding of a non-finite value");
    }
    double r = std::floor(value + 0.5);
    if (std::abs(r) >= kExactIntegerLimit) {
        throw ValidationError("fixed-point value exceeds 2^53; reduce n_o or the function range");
    }
    return r;
}

void check_index(std::int64_t v, std::int64_t N, const char* what) {
    if (v < 0 || v >= N) {
        std::ostringstream os;
        os << what << " component " << v << " outside [0, " << N << ")";
        throw ValidationError(os.str());
    }
}

}  // namespace

std::size_t ProblemSpec::lattice_size() const {
    if (d < 1 || N < 2) {
        throw ValidationError("lattice requires d >= 1 and N >= 2");
    }
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) {
        if (total > max_points / static_cast<std::size_t>(N)) {
            std::ostringstream os;
            os << "lattice N^d = " << N << "^" << d << " exceeds budget of " << max_points << " points";
            throw BudgetError(os.str());
        }
        total *= static_cast<std::size_t>(N);
    }
    return total;
}

void ProblemSpec::validate() const {
    if (d < 1) throw ValidationError("d must be >= 1");
    if (N < 2) throw ValidationError("N must be >= 2");
    if (n_o < 1 || n_o > 52) throw ValidationError("n_o must lie in [1, 52]");
    if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("l must be positive");
    if (!(m > 0.0) || !std::isfinite(m)) throw ValidationError("m must be positive");
    if (x0.size() != 0 && x0.size() != d) {
        throw ValidationError("x0 must have d components");
    }
    lattice_size();
}

Vector ProblemSpec::origin() const {
    if (x0.size() == 0) return Vector::Zero(d);
    return x0;
}

ProblemSpec make_spec(int d, std::int64_t N, int n_o, double l, double m) {
    ProblemSpec spec;
    spec.d = d;
    spec.N = N;
    spec.n_o = n_o;
    spec.l = l;
    spec.m = m;
    spec.validate();
    return spec;
}

std::int64_t round_half_up(double value) {
    return static_cast<std::int64_t>(rounded_half_up(value));
}

std::int64_t round_half_down(double value) {
    return -round_half_up(-value);
}

std::uint64_t wrap_unsigned(std::int64_t value, std::uint64_t modulus) {
    auto mod = static_cast<std::int64_t>(modulus);
    std::int64_t r = value % mod;
    if (r < 0) r += mod;
    return static_cast<std::uint64_t>(r);
}

std::int64_t signed_index(std::int64_t k, std::int64_t N) {
    // k' = k for k < N/2, k - N otherwise; N/2 compared exactly for odd N.
    return (2 * k < N) ? k : k - N;
}

Vector encode_input(const LatticePoint& delta, const ProblemSpec& spec) {
    if (static_cast<int>(delta.size()) != spec.d) {
        throw ValidationError("encode_input: lattice point has wrong dimension");
    }
    Vector x = spec.origin();
    const double scale = spec.l / static_cast<double>(spec.N);
    const double half = static_cast<double>(spec.N) / 2.0;
    for (int j = 0; j < spec.d; ++j) {
        check_index(delta[j], spec.N, "encode_input: delta");
        x[j] += scale * (static_cast<double>(delta[j]) - half);
    }
    return x;
}

std::int64_t quantize_output_unwrapped(double f_value, const ProblemSpec& spec) {
    const double scale = static_cast<double>(spec.N) * static_cast<double>(spec.output_modulus()) /
                         (spec.m * spec.l);
    return round_half_up(scale * f_value);
}

std::uint64_t quantize_output(double f_value, const ProblemSpec& spec) {
    return wrap_unsigned(quantize_output_unwrapped(f_value, spec), spec.output_modulus());
}

Vector decode_outcome(const LatticePoint& k, const ProblemSpec& spec) {
    if (static_cast<int>(k.size()) != spec.d) {
        throw ValidationError("decode_outcome: outcome has wrong dimension");
    }
    Vector g(spec.d);
    for (int j = 0; j < spec.d; ++j) {
        check_index(k[j], spec.N, "decode_outcome: k");
        g[j] = spec.m * static_cast<double>(signed_index(k[j], spec.N)) / static_cast<double>(spec.N);
    }
    return g;
}

std::uint64_t FixedPointCodec::encode(double value) const {
    return wrap_unsigned(round_half_up((value - offset) / step), std::uint64_t{1} << bits);
}

double FixedPointCodec::decode(std::uint64_t code) const {
    return offset + static_cast<double>(code) * step;
}

LatticePoint unflatten(std::size_t flat, int d, std::int64_t N) {
    LatticePoint p(d);
    for (int j = d - 1; j >= 0; --j) {
        p[j] = static_cast<std::int64_t>(flat % static_cast<std::size_t>(N));
        flat /= static_cast<std::size_t>(N);
    }
    return p;
}

std::size_t flatten(const LatticePoint& p, std::int64_t N) {
    std::size_t flat = 0;
    for (auto v : p) flat = flat * static_cast<std::size_t>(N) + static_cast<std::size_t>(v);
    return flat;
}

}  // namespace qgrad
