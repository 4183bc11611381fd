#pragma once

// Experiment drivers behind the command-line tool. Each writes one CSV
// document (config comment, header, rows) and a short human summary.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qgrad/core.hpp"
#include "qgrad/functions.hpp"

namespace qgrad::experiments {

struct ExperimentConfig {
    std::string command;
    ProblemSpec spec;
    std::string function = "quadratic";
    std::vector<double> gradient;
    std::vector<double> hessian;  ///< row-major d x d
    std::optional<double> alpha;  ///< sets H = (2 m alpha / l) I
    double coefficient = 1.0;     ///< cubic a3 / sinusoid amplitude
    std::vector<double> wavevector;
    std::size_t shots = 1000;
    std::uint64_t seed = 1;
    double slack_cells = 1.5;
    double theta = 0.39269908169872414;  // pi/8
    std::vector<std::int64_t> n_list;
    std::vector<double> alpha_list;
    unsigned workers = 1;
};

/// Throws ValidationError on any invalid parameter.
void validate(const ExperimentConfig& config);

/// Test function selected by config for the given spec.
TestFunction build_function(const ExperimentConfig& config, const ProblemSpec& spec);

/// "# qgrad <version> <command> key=value ..." with every parameter.
std::string config_comment(const ExperimentConfig& config);

/// Formats with 12 significant digits.
std::string format_number(double value);

void cmd_run(const ExperimentConfig& config, std::ostream& csv, std::ostream& log);
void cmd_sweep_n(const ExperimentConfig& config, std::ostream& csv, std::ostream& log);
void cmd_sweep_alpha(const ExperimentConfig& config, std::ostream& csv, std::ostream& log);
void cmd_peak2d(const ExperimentConfig& config, std::ostream& csv, std::ostream& log);
void cmd_compare_classical(const ExperimentConfig& config, std::ostream& csv, std::ostream& log);

/// Hessian of the default two-dimensional peak: (N/m) H = 0.1 [[1, 1], [1, -1]].
Matrix default_peak_hessian(const ProblemSpec& spec);

/// One point of a one-dimensional quadratic sweep.
struct SweepPoint {
    std::int64_t N = 0;
    double alpha = 0.0;
    double sigma_pred = 0.0;
    double sigma_meas = 0.0;     ///< from the exact distribution
    double sigma_sampled = 0.0;  ///< from the shots
    double unitarity_defect = 0.0;
};

/// Simulates f(x) = (m alpha / l) x^2 (so that f'' = 2 m alpha / l).
SweepPoint simulate_sweep_point(const ExperimentConfig& config, std::int64_t N, double alpha, std::uint64_t seed);

}  // namespace qgrad::experiments
