#pragma once

// Problem parameters and the fixed-point maps between lattice indices,
// physical coordinates, oracle outputs and gradient components.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qgrad {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Integer lattice coordinate, one entry per input register.
using LatticePoint = std::vector<std::int64_t>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters that violate a documented precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Lattice too large for the configured simulation budget.
class BudgetError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

inline constexpr std::size_t kDefaultMaxPoints = std::size_t{1} << 24;

struct ProblemSpec {
    int d = 1;                         ///< number of input registers
    std::int64_t N = 16;               ///< lattice points per axis
    int n_o = 16;                      ///< output-register bits, N_o = 2^n_o
    double l = 1.0;                    ///< side of the sampled hypercube
    double m = 1.0;                    ///< width of the gradient-component interval
    Vector x0;                         ///< evaluation point (size d); empty means origin
    std::size_t max_points = kDefaultMaxPoints;

    std::uint64_t output_modulus() const { return std::uint64_t{1} << n_o; }

    /// N^d; throws BudgetError if it exceeds max_points.
    std::size_t lattice_size() const;

    /// Throws ValidationError (or BudgetError) when any invariant fails.
    void validate() const;

    /// x0 padded to size d.
    Vector origin() const;
};

/// Builds a spec with x0 at the origin and validates it.
ProblemSpec make_spec(int d, std::int64_t N, int n_o, double l, double m);

/// Nearest integer, ties toward +infinity. Every fixed-point rounding in the
/// library goes through here.
std::int64_t round_half_up(double value);

/// Nearest integer, ties toward -infinity.
std::int64_t round_half_down(double value);

/// Maps a signed integer to [0, modulus).
std::uint64_t wrap_unsigned(std::int64_t value, std::uint64_t modulus);

/// Maps an index in [0, N) to its signed representative in [-N/2, N/2).
std::int64_t signed_index(std::int64_t k, std::int64_t N);

/// x_j = x0_j + (l/N)(delta_j - N/2).
Vector encode_input(const LatticePoint& delta, const ProblemSpec& spec);

/// round(N N_o f / (m l)) mod N_o.
std::uint64_t quantize_output(double f_value, const ProblemSpec& spec);

/// Unreduced oracle integer, before the mod N_o wrap.
std::int64_t quantize_output_unwrapped(double f_value, const ProblemSpec& spec);

/// g_j = m k'_j / N where k' is the signed representative of k_j.
Vector decode_outcome(const LatticePoint& k, const ProblemSpec& spec);

/// Fixed-point codec with offset and step, reduced modulo 2^bits.
/// quantize_output is the special case offset 0, step m l / (N N_o).
struct FixedPointCodec {
    double offset = 0.0;
    double step = 1.0;
    int bits = 16;

    std::uint64_t encode(double value) const;
    double decode(std::uint64_t code) const;
};

/// Decomposes a row-major flat index into a lattice point.
LatticePoint unflatten(std::size_t flat, int d, std::int64_t N);

/// Inverse of unflatten.
std::size_t flatten(const LatticePoint& p, std::int64_t N);

}  // namespace qgrad
