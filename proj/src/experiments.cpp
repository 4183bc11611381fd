#include "qgrad/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "qgrad/analysis.hpp"
#include "qgrad/classical.hpp"
#include "qgrad/qsim.hpp"

#ifndef QGRAD_VERSION
#define QGRAD_VERSION "0.0.0"
#endif

namespace qgrad::experiments {

namespace {

template <typename T>
std::string join(const std::vector<T>& values, const char* sep = ";") {
    std::ostringstream os;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << sep;
        if constexpr (std::is_floating_point_v<T>) {
            os << format_number(values[i]);
        } else {
            os << values[i];
        }
    }
    return os.str();
}

std::vector<double> to_std(const Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Output order is
/// fixed by index, never by completion.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn fn) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

ProblemSpec spec_with_N(const ExperimentConfig& config, std::int64_t N) {
    ProblemSpec spec = config.spec;
    spec.N = N;
    spec.validate();
    return spec;
}

Matrix hessian_from_list(const std::vector<double>& values, int d) {
    if (static_cast<int>(values.size()) != d * d) {
        throw ValidationError("--hessian needs d*d comma-separated values");
    }
    Matrix h(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) h(i, j) = values[static_cast<std::size_t>(i * d + j)];
    }
    return h;
}

Vector vector_from_list(const std::vector<double>& values, int d, const char* flag) {
    if (values.empty()) return Vector::Zero(d);
    if (static_cast<int>(values.size()) != d) {
        throw ValidationError(std::string(flag) + " needs d comma-separated values");
    }
    return Eigen::Map<const Vector>(values.data(), d);
}

double bits_per_axis(std::int64_t N) {
    return std::log2(static_cast<double>(N));
}

}  // namespace

std::string format_number(double value) {
    std::ostringstream os;
    os << std::setprecision(12) << value;
    return os.str();
}

void validate(const ExperimentConfig& config) {
    config.spec.validate();
    if (config.shots < 1) throw ValidationError("--shots must be >= 1");
    if (!(config.slack_cells >= 0.0)) throw ValidationError("--slack-cells must be nonnegative");
    if (!(config.theta > 0.0) || config.theta > 2.0 * std::numbers::pi) {
        throw ValidationError("--theta must lie in (0, 2 pi]");
    }
    if (config.workers < 1) throw ValidationError("--workers must be >= 1");
    for (auto N : config.n_list) spec_with_N(config, N);
    if (!FunctionCatalog::standard().contains(config.function)) {
        throw ValidationError("unknown --function '" + config.function + "'");
    }
    if (!config.hessian.empty()) hessian_from_list(config.hessian, config.spec.d);
    vector_from_list(config.gradient, config.spec.d, "--gradient");
}

TestFunction build_function(const ExperimentConfig& config, const ProblemSpec& spec) {
    CatalogParams params;
    params.d = spec.d;
    params.gradient = vector_from_list(config.gradient, spec.d, "--gradient");
    params.coefficient = config.coefficient;
    if (!config.wavevector.empty()) params.wavevector = vector_from_list(config.wavevector, spec.d, "--wavevector");
    if (!config.hessian.empty()) {
        params.hessian = hessian_from_list(config.hessian, spec.d);
    } else if (config.alpha) {
        params.hessian = (2.0 * spec.m * *config.alpha / spec.l) * Matrix::Identity(spec.d, spec.d);
    }
    return FunctionCatalog::standard().make(config.function, params);
}

std::string config_comment(const ExperimentConfig& config) {
    const ProblemSpec& s = config.spec;
    std::ostringstream os;
    os << "# qgrad " << QGRAD_VERSION << ' ' << config.command << " d=" << s.d << " N=" << s.N << " n_o=" << s.n_o
       << " l=" << format_number(s.l) << " m=" << format_number(s.m) << " x0=" << join(to_std(s.origin()))
       << " function=" << config.function << " gradient=" << join(config.gradient)
       << " hessian=" << join(config.hessian)
       << " alpha=" << (config.alpha ? format_number(*config.alpha) : std::string("none"))
       << " coefficient=" << format_number(config.coefficient) << " wavevector=" << join(config.wavevector)
       << " shots=" << config.shots << " seed=" << config.seed << " slack_cells=" << format_number(config.slack_cells)
       << " theta=" << format_number(config.theta) << " N_list=" << join(config.n_list)
       << " alpha_list=" << join(config.alpha_list) << " max_points=" << s.max_points;
    return os.str();
}

void cmd_run(const ExperimentConfig& config, std::ostream& csv, std::ostream& log) {
    validate(config);
    const ProblemSpec& spec = config.spec;
    const TestFunction f = build_function(config, spec);
    const GradientReport report = run_gradient_estimation(f, spec, RunOptions{config.shots, config.seed, config.workers});
    const SigmaPrediction pred = stationary_phase_sigma(f.hess(spec.origin()), spec);

    csv << config_comment(config) << '\n';
    csv << "axis,true_gradient,decoded_mode,success_prob,sigma_pred,sigma_meas\n";
    for (int j = 0; j < spec.d; ++j) {
        const AxisReport& a = report.axes[static_cast<std::size_t>(j)];
        csv << j << ',' << format_number(a.true_gradient) << ',' << format_number(a.decoded_mode) << ','
            << format_number(report.success_probability) << ',' << format_number(pred.sigma_k[j]) << ','
            << format_number(std::sqrt(a.exact.variance)) << '\n';
    }
    log << "queries=" << report.query_count << " success_prob=" << format_number(report.success_probability)
        << " decoded=" << join(to_std(report.decoded_gradient), ",")
        << " true=" << join(to_std(report.true_gradient), ",") << '\n';
}

SweepPoint simulate_sweep_point(const ExperimentConfig& config, std::int64_t N, double alpha, std::uint64_t seed) {
    ProblemSpec spec = spec_with_N(config, N);
    if (spec.d != 1) throw ValidationError("sweeps are one-dimensional; use --d 1");
    Matrix h(1, 1);
    h(0, 0) = 2.0 * spec.m * alpha / spec.l;
    const TestFunction f = quadratic(Vector::Zero(1), h, 0.0);
    const GradientReport report = run_gradient_estimation(f, spec, RunOptions{config.shots, seed, 1});

    SweepPoint p;
    p.N = N;
    p.alpha = alpha;
    p.sigma_pred = stationary_phase_sigma(h, spec).sigma_k[0];
    p.sigma_meas = std::sqrt(report.axes[0].exact.variance);
    p.sigma_sampled = std::sqrt(report.axes[0].sampled.variance);
    p.unitarity_defect = report.unitarity_defect;
    return p;
}

namespace {

void write_sweep(const ExperimentConfig& config, const std::vector<SweepPoint>& points, bool n_first,
                 std::ostream& csv, std::ostream& log) {
    csv << config_comment(config) << '\n';
    csv << (n_first ? "N,alpha" : "alpha,N") << ",sigma_pred,sigma_meas,sigma_sampled\n";
    for (const auto& p : points) {
        if (n_first) {
            csv << p.N << ',' << format_number(p.alpha);
        } else {
            csv << format_number(p.alpha) << ',' << p.N;
        }
        csv << ',' << format_number(p.sigma_pred) << ',' << format_number(p.sigma_meas) << ','
            << format_number(p.sigma_sampled) << '\n';
    }
    log << "points=" << points.size() << '\n';
}

}  // namespace

void cmd_sweep_n(const ExperimentConfig& config, std::ostream& csv, std::ostream& log) {
    ExperimentConfig c = config;
    if (c.n_list.empty()) c.n_list = {16, 32, 64, 128, 256};
    if (!c.alpha) c.alpha = 0.02;
    validate(c);
    std::vector<SweepPoint> points(c.n_list.size());
    parallel_for(points.size(), c.workers, [&](std::size_t i) {
        points[i] = simulate_sweep_point(c, c.n_list[i], *c.alpha, mix_seed(c.seed, i));
    });
    write_sweep(c, points, true, csv, log);
}

void cmd_sweep_alpha(const ExperimentConfig& config, std::ostream& csv, std::ostream& log) {
    ExperimentConfig c = config;
    if (c.alpha_list.empty()) {
        for (int i = 1; i <= 10; ++i) c.alpha_list.push_back(0.005 * i);
    }
    validate(c);
    std::vector<SweepPoint> points(c.alpha_list.size());
    parallel_for(points.size(), c.workers, [&](std::size_t i) {
        points[i] = simulate_sweep_point(c, c.spec.N, c.alpha_list[i], mix_seed(c.seed, i));
    });
    write_sweep(c, points, false, csv, log);
}

Matrix default_peak_hessian(const ProblemSpec& spec) {
    Matrix h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    return (0.1 * spec.m / static_cast<double>(spec.N)) * h;
}

void cmd_peak2d(const ExperimentConfig& config, std::ostream& csv, std::ostream& log) {
    validate(config);
    const ProblemSpec& spec = config.spec;
    if (spec.d != 2) throw ValidationError("peak2d requires --d 2");
    const Matrix h = config.hessian.empty() ? default_peak_hessian(spec) : hessian_from_list(config.hessian, 2);
    const TestFunction f = quadratic(vector_from_list(config.gradient, 2, "--gradient"), h, 0.0);
    const GradientReport report = run_gradient_estimation(f, spec, RunOptions{config.shots, config.seed, config.workers});
    const SigmaPrediction pred = stationary_phase_sigma(h, spec);

    // Peak is centred on the true gradient's lattice frequency.
    const Vector centre = (static_cast<double>(spec.N) / spec.m) * report.true_gradient;

    csv << config_comment(config) << '\n';
    csv << "k1,k2,prob,inside_predicted\n";
    double inside_mass = 0.0;
    const auto& probs = report.distribution.probs;
    for (std::size_t flat = 0; flat < probs.size(); ++flat) {
        const LatticePoint k = unflatten(flat, 2, spec.N);
        Vector offset(2);
        for (int j = 0; j < 2; ++j) {
            double s = static_cast<double>(signed_index(k[j], spec.N)) - centre[j];
            s -= static_cast<double>(spec.N) * std::floor(s / static_cast<double>(spec.N) + 0.5);
            offset[j] = s;
        }
        const bool inside = support_membership(offset, pred, config.slack_cells);
        if (inside) inside_mass += probs[flat];
        csv << signed_index(k[0], spec.N) << ',' << signed_index(k[1], spec.N) << ',' << format_number(probs[flat])
            << ',' << (inside ? 1 : 0) << '\n';
    }
    csv << "# mass_inside=" << format_number(inside_mass) << '\n';
    log << "mass_inside=" << format_number(inside_mass) << " slack_cells=" << format_number(config.slack_cells)
        << " support_volume=" << format_number(pred.support_volume()) << '\n';
}

void cmd_compare_classical(const ExperimentConfig& config, std::ostream& csv, std::ostream& log) {
    validate(config);
    const ProblemSpec& spec = config.spec;
    const TestFunction f = build_function(config, spec);
    const Vector x0 = spec.origin();
    const Vector truth = f.grad(x0);
    const double n = bits_per_axis(spec.N);
    const ValueRange range = function_range(f, spec);

    const GradientReport q = run_gradient_estimation(f, spec, RunOptions{config.shots, config.seed, config.workers});
    const double q_err = (q.decoded_gradient - truth).cwiseAbs().maxCoeff();

    // A constant function needs no bits, but the gap is range-independent.
    const bool has_range = range.max > range.min;
    const double hi = has_range ? range.max : 1.0;
    const double lo = has_range ? range.min : 0.0;
    const double c_bits = classical_precision_bits(hi, lo, spec.m, spec.l, n);
    const double q_bits = quantum_precision_bits(hi, lo, spec.m, spec.l, n, config.theta);
    const std::string c_col = has_range ? format_number(c_bits) : "";
    const std::string q_col = has_range ? format_number(q_bits) : "";

    ValueRange queried = stencil_range(f, x0, spec.l);
    queried.min = std::min(queried.min, range.min);
    queried.max = std::max(queried.max, range.max);
    const ClassicalQuantizer quantizer = classical_quantizer(queried, spec.m, spec.l, static_cast<int>(std::ceil(n)));
    const ClassicalReport fwd = forward_difference(f, x0, spec.l, quantizer);
    const ClassicalReport ctr = central_difference(f, x0, spec.l, quantizer);

    std::vector<double> steps;
    for (int i = 0; i <= 8; ++i) steps.push_back(0.01 * std::pow(10.0, i / 4.0));
    const ScalingFit fit = error_scaling_fit(cubic_1d(1.0), Vector::Zero(1), steps, Stencil::central);

    csv << config_comment(config) << '\n';
    csv << "method,d,N,queries,achieved_error,oracle_bits,precision_bits,bit_gap,fit_slope\n";
    csv << "quantum," << spec.d << ',' << spec.N << ',' << q.query_count << ',' << format_number(q_err) << ','
        << spec.n_o << ',' << q_col << ',' << format_number(q_bits - c_bits) << ",\n";
    csv << "forward," << spec.d << ',' << spec.N << ',' << fwd.queries << ','
        << format_number((fwd.gradient_estimate - truth).cwiseAbs().maxCoeff()) << ',' << fwd.n_o << ','
        << c_col << ",0,\n";
    csv << "central," << spec.d << ',' << spec.N << ',' << ctr.queries << ','
        << format_number((ctr.gradient_estimate - truth).cwiseAbs().maxCoeff()) << ',' << ctr.n_o << ','
        << c_col << ",0," << format_number(fit.slope) << '\n';
    log << "bit_gap=" << format_number(q_bits - c_bits) << " central_slope=" << format_number(fit.slope) << '\n';
}

}  // namespace qgrad::experiments
