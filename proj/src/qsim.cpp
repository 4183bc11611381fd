#include "qgrad/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace qgrad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double to_unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

std::size_t GridShape::size() const {
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(N);
    return total;
}

AmplitudeGrid::AmplitudeGrid(GridShape shape, std::vector<Complex> amps, int query_count)
    : shape_(shape), amps_(std::move(amps)), query_count_(query_count) {
    if (shape_.d < 1 || shape_.N < 2) throw ValidationError("AmplitudeGrid: invalid shape");
    if (amps_.size() != shape_.size()) throw ValidationError("AmplitudeGrid: amplitude count is not N^d");
}

double AmplitudeGrid::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

AmplitudeGrid AmplitudeGrid::uniform(GridShape shape) {
    const double a = std::pow(static_cast<double>(shape.N), -0.5 * shape.d);
    return AmplitudeGrid(shape, std::vector<Complex>(shape.size(), Complex{a, 0.0}));
}

AmplitudeGrid AmplitudeGrid::planewave(GridShape shape, const Vector& nu) {
    if (nu.size() != shape.d) throw ValidationError("planewave: frequency has wrong dimension");
    const std::size_t total = shape.size();
    const double a = std::pow(static_cast<double>(shape.N), -0.5 * shape.d);
    std::vector<Complex> amps(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        const LatticePoint delta = unflatten(flat, shape.d, shape.N);
        double cycles = 0.0;
        for (int j = 0; j < shape.d; ++j) cycles += nu[j] * static_cast<double>(delta[j]);
        cycles /= static_cast<double>(shape.N);
        amps[flat] = std::polar(a, kTwoPi * (cycles - std::floor(cycles)));
    }
    return AmplitudeGrid(shape, std::move(amps));
}

double OutcomeDistribution::total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

double OutcomeDistribution::at(const LatticePoint& k) const {
    return probs.at(flatten(k, shape.N));
}

std::vector<double> OutcomeDistribution::marginal(int axis) const {
    if (axis < 0 || axis >= shape.d) throw ValidationError("marginal: axis out of range");
    std::vector<double> out(static_cast<std::size_t>(shape.N), 0.0);
    std::size_t stride = 1;
    for (int i = axis + 1; i < shape.d; ++i) stride *= static_cast<std::size_t>(shape.N);
    for (std::size_t flat = 0; flat < probs.size(); ++flat) {
        out[(flat / stride) % static_cast<std::size_t>(shape.N)] += probs[flat];
    }
    return out;
}

std::size_t OutcomeDistribution::mode_index() const {
    return static_cast<std::size_t>(std::distance(probs.begin(), std::max_element(probs.begin(), probs.end())));
}

AmplitudeGrid build_phase_state(const TestFunction& f, const ProblemSpec& spec) {
    spec.validate();
    if (f.dim != spec.d) throw ValidationError("build_phase_state: function dimension differs from d");

    const GridShape shape{spec.d, spec.N};
    const std::size_t total = spec.lattice_size();
    const double a = std::pow(static_cast<double>(spec.N), -0.5 * spec.d);
    const double modulus = static_cast<double>(spec.output_modulus());

    std::vector<Complex> amps(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        const Vector x = encode_input(unflatten(flat, spec.d, spec.N), spec);
        const double value = f.eval(x);
        if (f.range && (value < f.range->min || value > f.range->max)) {
            std::ostringstream os;
            os << "function '" << f.name << "' value " << value << " leaves its declared range ["
               << f.range->min << ", " << f.range->max << "]";
            throw Error(os.str());
        }
        const std::uint64_t g = quantize_output(value, spec);
        amps[flat] = std::polar(a, kTwoPi * static_cast<double>(g) / modulus);
    }
    // Every lattice evaluation above belongs to one superposed oracle call.
    return AmplitudeGrid(shape, std::move(amps), 1);
}

AmplitudeGrid fourier_transform(const AmplitudeGrid& grid, Direction dir, unsigned workers) {
    std::vector<Complex> amps = grid.amplitudes();
    fourier_nd(amps, grid.shape().d, grid.shape().N, dir, workers);
    return AmplitudeGrid(grid.shape(), std::move(amps), grid.query_count());
}

AmplitudeGrid brute_force_transform(const AmplitudeGrid& grid, Direction dir) {
    const GridShape& shape = grid.shape();
    const std::size_t total = shape.size();
    if (total > kBruteForceMaxPoints) {
        throw ValidationError("brute_force_transform: N^d exceeds 4096");
    }
    const auto N = static_cast<std::uint64_t>(shape.N);
    const double sign = dir == Direction::forward ? -1.0 : 1.0;
    const double norm = std::pow(static_cast<double>(shape.N), -0.5 * shape.d);

    std::vector<LatticePoint> points(total);
    for (std::size_t i = 0; i < total; ++i) points[i] = unflatten(i, shape.d, shape.N);

    std::vector<Complex> out(total);
    for (std::size_t ki = 0; ki < total; ++ki) {
        Complex sum{};
        for (std::size_t di = 0; di < total; ++di) {
            std::uint64_t dot = 0;
            for (int j = 0; j < shape.d; ++j) {
                dot += static_cast<std::uint64_t>(points[ki][j]) * static_cast<std::uint64_t>(points[di][j]);
            }
            const double angle = sign * kTwoPi * static_cast<double>(dot % N) / static_cast<double>(N);
            sum += grid[di] * Complex{std::cos(angle), std::sin(angle)};
        }
        out[ki] = sum * norm;
    }
    return AmplitudeGrid(shape, std::move(out), grid.query_count());
}

OutcomeDistribution outcome_distribution(const AmplitudeGrid& grid) {
    OutcomeDistribution dist{grid.shape(), {}};
    dist.probs.reserve(grid.amplitudes().size());
    for (const auto& a : grid.amplitudes()) dist.probs.push_back(std::norm(a));
    return dist;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<LatticePoint> sample(const OutcomeDistribution& dist, std::size_t shots, std::uint64_t seed) {
    if (shots == 0) throw ValidationError("sample: shots must be >= 1");
    std::vector<double> cdf(dist.probs.size());
    double running = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        running += std::max(0.0, dist.probs[i]);
        cdf[i] = running;
    }
    if (!(running > 0.0)) throw ValidationError("sample: distribution has no mass");

    std::mt19937_64 rng(mix_seed(seed, 0));
    std::vector<LatticePoint> out;
    out.reserve(shots);
    for (std::size_t s = 0; s < shots; ++s) {
        const double u = to_unit_interval(rng()) * running;
        // First strict increase past u, so zero-probability cells are never chosen.
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(std::distance(cdf.begin(), it));
        if (idx >= cdf.size()) idx = cdf.size() - 1;
        out.push_back(unflatten(idx, dist.shape.d, dist.shape.N));
    }
    return out;
}

CircularStats circular_stats(const std::vector<double>& probs) {
    const auto N = static_cast<double>(probs.size());
    Complex moment{};
    double mass = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        moment += probs[k] * std::polar(1.0, kTwoPi * static_cast<double>(k) / N);
        mass += probs[k];
    }
    CircularStats stats;
    if (!(mass > 0.0)) return stats;
    double mean = std::abs(moment) > 0.0 ? std::arg(moment) * N / kTwoPi : 0.0;
    if (mean >= N / 2.0) mean -= N;
    if (mean < -N / 2.0) mean += N;
    stats.mean = mean;

    double var = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        double dist = static_cast<double>(k) - mean;
        dist -= N * std::floor(dist / N + 0.5);  // shorter arc, signed
        var += probs[k] * dist * dist;
    }
    stats.variance = var / mass;
    return stats;
}

CircularStats circular_stats(const std::vector<std::int64_t>& samples, std::int64_t N) {
    std::vector<double> hist(static_cast<std::size_t>(N), 0.0);
    for (auto k : samples) hist.at(static_cast<std::size_t>(k)) += 1.0;
    return circular_stats(hist);
}

LatticePoint nearest_representable(const Vector& gradient, const ProblemSpec& spec) {
    LatticePoint k(spec.d);
    for (int j = 0; j < spec.d; ++j) {
        const double nu = static_cast<double>(spec.N) * gradient[j] / spec.m;
        k[j] = static_cast<std::int64_t>(wrap_unsigned(round_half_down(nu), static_cast<std::uint64_t>(spec.N)));
    }
    return k;
}

GradientReport run_gradient_estimation(const TestFunction& f, const ProblemSpec& spec, const RunOptions& options) {
    const AmplitudeGrid phase = build_phase_state(f, spec);
    const AmplitudeGrid spectrum = fourier_transform(phase, Direction::forward, options.workers);

    GradientReport report;
    report.query_count = spectrum.query_count();
    report.unitarity_defect = std::abs(spectrum.norm_squared() - phase.norm_squared());
    report.distribution = outcome_distribution(spectrum);
    report.samples = sample(report.distribution, options.shots, options.seed);

    report.mode = unflatten(report.distribution.mode_index(), spec.d, spec.N);
    report.decoded_gradient = decode_outcome(report.mode, spec);
    report.true_gradient = f.grad(spec.origin());
    report.target = nearest_representable(report.true_gradient, spec);
    report.success_probability = report.distribution.at(report.target);

    report.axes.resize(spec.d);
    for (int j = 0; j < spec.d; ++j) {
        AxisReport& axis = report.axes[j];
        axis.true_gradient = report.true_gradient[j];
        axis.target_k = report.target[j];
        axis.mode_k = report.mode[j];
        axis.decoded_mode = report.decoded_gradient[j];
        axis.exact = circular_stats(report.distribution.marginal(j));
        std::vector<std::int64_t> column;
        column.reserve(report.samples.size());
        for (const auto& s : report.samples) column.push_back(s[j]);
        axis.sampled = circular_stats(column, spec.N);
    }
    return report;
}

AmplitudeGrid ideal_state(const Vector& true_gradient, const ProblemSpec& spec) {
    spec.validate();
    if (true_gradient.size() != spec.d) throw ValidationError("ideal_state: gradient has wrong dimension");
    const GridShape shape{spec.d, spec.N};
    const std::size_t total = spec.lattice_size();
    const double a = std::pow(static_cast<double>(spec.N), -0.5 * spec.d);
    const double half = static_cast<double>(spec.N) / 2.0;
    std::vector<Complex> amps(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        const LatticePoint delta = unflatten(flat, spec.d, spec.N);
        double cycles = 0.0;
        for (int j = 0; j < spec.d; ++j) {
            cycles += true_gradient[j] / spec.m * (static_cast<double>(delta[j]) - half);
        }
        amps[flat] = std::polar(a, kTwoPi * (cycles - std::floor(cycles)));
    }
    return AmplitudeGrid(shape, std::move(amps));
}

FidelityResult ideal_state_and_fidelity(const AmplitudeGrid& grid, const Vector& true_gradient,
                                        const ProblemSpec& spec) {
    if (grid.shape() != GridShape{spec.d, spec.N}) throw ValidationError("fidelity: grid shape differs from spec");
    if (true_gradient.size() != spec.d) throw ValidationError("fidelity: gradient has wrong dimension");
    for (int j = 0; j < spec.d; ++j) {
        if (true_gradient[j] < -spec.m / 2.0 || true_gradient[j] >= spec.m / 2.0) {
            throw ValidationError("fidelity: gradient component outside [-m/2, m/2)");
        }
    }
    const AmplitudeGrid ideal = ideal_state(true_gradient, spec);
    Complex overlap{};
    for (std::size_t i = 0; i < ideal.amplitudes().size(); ++i) overlap += std::conj(ideal[i]) * grid[i];
    return FidelityResult{std::min(1.0, std::abs(overlap))};
}

AmplitudeGrid perturb_phases(const AmplitudeGrid& grid, double theta, std::uint64_t seed, PhaseNoise kind) {
    if (!(theta >= 0.0)) throw ValidationError("perturb_phases: theta must be nonnegative");
    std::mt19937_64 rng(mix_seed(seed, 1));
    std::vector<Complex> amps = grid.amplitudes();
    for (auto& a : amps) {
        const double u = to_unit_interval(rng());
        const double eps = kind == PhaseNoise::uniform ? theta * (2.0 * u - 1.0) : (u < 0.5 ? -theta : theta);
        a *= std::polar(1.0, eps);
    }
    return AmplitudeGrid(grid.shape(), std::move(amps), grid.query_count());
}

}  // namespace qgrad
