#pragma once

// Amplitude-level simulation of single-query gradient estimation.
//
// The output register is prepared in the Fourier eigenstate of addition
// modulo N_o, so a modular-add oracle acts on the input registers as the
// pure phase exp(2 pi i g(delta) / N_o) with integer g. The output register
// stays unentangled and is never stored; the simulated state is the input
// lattice only.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qgrad/core.hpp"
#include "qgrad/fft.hpp"
#include "qgrad/functions.hpp"

namespace qgrad {

struct GridShape {
    int d = 1;
    std::int64_t N = 2;

    std::size_t size() const;
    bool operator==(const GridShape&) const = default;
};

/// Complex amplitudes over [0,N)^d in row-major order (axis 0 slowest).
class AmplitudeGrid {
public:
    /// Throws ValidationError if amps.size() != N^d.
    AmplitudeGrid(GridShape shape, std::vector<Complex> amps, int query_count = 0);

    const GridShape& shape() const { return shape_; }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    const Complex& operator[](std::size_t flat) const { return amps_[flat]; }
    int query_count() const { return query_count_; }

    double norm_squared() const;

    /// Uniform superposition N^(-d/2).
    static AmplitudeGrid uniform(GridShape shape);
    /// N^(-d/2) exp(2 pi i nu . delta / N); nu may be non-integer.
    static AmplitudeGrid planewave(GridShape shape, const Vector& nu);

private:
    GridShape shape_;
    std::vector<Complex> amps_;
    int query_count_ = 0;
};

struct OutcomeDistribution {
    GridShape shape;
    std::vector<double> probs;

    double total() const;
    double at(const LatticePoint& k) const;
    /// Marginal distribution along one axis.
    std::vector<double> marginal(int axis) const;
    /// Flat index of the largest probability; lowest index wins ties.
    std::size_t mode_index() const;
};

/// One batched oracle query over the whole lattice.
/// Throws BudgetError when the lattice exceeds spec.max_points and Error when
/// f leaves its declared range at a lattice point.
AmplitudeGrid build_phase_state(const TestFunction& f, const ProblemSpec& spec);

/// Unitary forward transform sends exp(+2 pi i nu.delta/N) to |nu mod N>.
AmplitudeGrid fourier_transform(const AmplitudeGrid& grid, Direction dir, unsigned workers = 1);

inline constexpr std::size_t kBruteForceMaxPoints = 4096;

/// Direct O(N^2d) evaluation of the same transform. Guarded to N^d <= 4096.
AmplitudeGrid brute_force_transform(const AmplitudeGrid& grid, Direction dir);

OutcomeDistribution outcome_distribution(const AmplitudeGrid& grid);

/// I.i.d. draws by inverse CDF from a seeded 64-bit Mersenne twister.
std::vector<LatticePoint> sample(const OutcomeDistribution& dist, std::size_t shots, std::uint64_t seed);

/// SplitMix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Statistics on the periodic lattice [0,N). The mean is the argument of the
/// first trigonometric moment, reported as a signed index in [-N/2, N/2); the
/// variance uses the shorter-arc signed distance to that mean.
struct CircularStats {
    double mean = 0.0;
    double variance = 0.0;
};

CircularStats circular_stats(const std::vector<double>& probs);
CircularStats circular_stats(const std::vector<std::int64_t>& samples, std::int64_t N);

/// Outcome lattice point nearest to N g / m per axis, ties toward negative,
/// wrapped into [0, N).
LatticePoint nearest_representable(const Vector& gradient, const ProblemSpec& spec);

struct AxisReport {
    double true_gradient = 0.0;
    std::int64_t target_k = 0;     ///< nearest representable outcome
    std::int64_t mode_k = 0;
    double decoded_mode = 0.0;
    CircularStats exact;           ///< from the full distribution, lattice units
    CircularStats sampled;         ///< from the drawn shots, lattice units
};

struct GradientReport {
    LatticePoint mode;
    Vector decoded_gradient;       ///< decoded mode outcome
    Vector true_gradient;
    LatticePoint target;
    double success_probability = 0.0;
    OutcomeDistribution distribution;
    std::vector<LatticePoint> samples;
    std::vector<AxisReport> axes;
    int query_count = 0;
    double unitarity_defect = 0.0; ///< | ||after||^2 - ||before||^2 |
};

struct RunOptions {
    std::size_t shots = 1000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

/// build_phase_state -> forward transform -> outcome distribution -> sample.
GradientReport run_gradient_estimation(const TestFunction& f, const ProblemSpec& spec, const RunOptions& options);

/// Unquantized planewave for the given gradient, with the same centering as
/// build_phase_state: N^(-d/2) exp(2 pi i (N g/m) . (delta - N/2) / N).
AmplitudeGrid ideal_state(const Vector& true_gradient, const ProblemSpec& spec);

struct FidelityResult {
    double fidelity = 0.0;  ///< |<ideal|actual>|
};

/// Throws ValidationError if a gradient component lies outside [-m/2, m/2).
FidelityResult ideal_state_and_fidelity(const AmplitudeGrid& grid, const Vector& true_gradient,
                                        const ProblemSpec& spec);

enum class PhaseNoise {
    uniform,      ///< independent uniform draws in [-theta, theta]
    adversarial,  ///< independent random signs, magnitude exactly theta
};

/// Multiplies each amplitude by exp(i eps) with |eps| <= theta.
AmplitudeGrid perturb_phases(const AmplitudeGrid& grid, double theta, std::uint64_t seed, PhaseNoise kind);

}  // namespace qgrad
