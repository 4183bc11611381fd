#include "qgrad/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "qgrad/experiments.hpp"

namespace qgrad {

namespace {

using experiments::ExperimentConfig;

struct Flags {
    ExperimentConfig config;
    std::vector<double> x0;
    std::optional<int> n_bits;
    std::optional<double> alpha;
    std::string out;
};

void add_common(CLI::App& cmd, Flags& flags) {
    ExperimentConfig& c = flags.config;
    cmd.add_option("--d", c.spec.d, "Number of input registers")->capture_default_str();
    auto* nb = cmd.add_option("--n-bits", flags.n_bits, "Qubits per register (sets N = 2^n)");
    cmd.add_option("--N", c.spec.N, "Lattice points per axis")->capture_default_str()->excludes(nb);
    cmd.add_option("--n-o", c.spec.n_o, "Output register bits")->capture_default_str();
    cmd.add_option("--l", c.spec.l, "Side of the sampled hypercube")->capture_default_str();
    cmd.add_option("--m", c.spec.m, "Width of the gradient-component interval")->capture_default_str();
    cmd.add_option("--x0", flags.x0, "Evaluation point, comma separated")->delimiter(',');
    cmd.add_option("--function", c.function, "linear | quadratic | cubic | sinusoid")->capture_default_str();
    cmd.add_option("--gradient", c.gradient, "Linear coefficients, comma separated")->delimiter(',');
    cmd.add_option("--hessian", c.hessian, "Row-major d*d Hessian, comma separated")->delimiter(',');
    cmd.add_option("--alpha", flags.alpha, "1D curvature alpha = l f'' / (2m)");
    cmd.add_option("--coefficient", c.coefficient, "cubic a3 or sinusoid amplitude")->capture_default_str();
    cmd.add_option("--wavevector", c.wavevector, "sinusoid wavevector, comma separated")->delimiter(',');
    cmd.add_option("--shots", c.shots, "Measurement shots")->capture_default_str();
    cmd.add_option("--seed", c.seed, "RNG seed")->capture_default_str();
    cmd.add_option("--out", flags.out, "CSV output path (default stdout)");
    cmd.add_option("--slack-cells", c.slack_cells, "Support-membership slack in lattice cells")->capture_default_str();
    cmd.add_option("--theta", c.theta, "Per-point phase accuracy for oracle precision")->capture_default_str();
    cmd.add_option("--workers", c.workers, "Worker threads")->capture_default_str();
    cmd.add_option("--max-points", c.spec.max_points, "Simulation budget in lattice points")->capture_default_str();
}

ExperimentConfig finalize(Flags& flags, const std::string& command) {
    ExperimentConfig c = flags.config;
    c.command = command;
    if (flags.n_bits) {
        if (*flags.n_bits < 1 || *flags.n_bits > 30) throw ValidationError("--n-bits must lie in [1, 30]");
        c.spec.N = std::int64_t{1} << *flags.n_bits;
    }
    if (!flags.x0.empty()) c.spec.x0 = Eigen::Map<const Vector>(flags.x0.data(), static_cast<Eigen::Index>(flags.x0.size()));
    if (flags.alpha) c.alpha = flags.alpha;
    return c;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Single-query quantum gradient estimation simulator with classical baselines"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QGRAD_VERSION);

    Flags flags;
    using Command = std::function<void(const ExperimentConfig&, std::ostream&, std::ostream&)>;
    std::vector<std::pair<CLI::App*, Command>> commands;

    auto add = [&](const char* name, const char* help, Command fn) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(*sub, flags);
        commands.emplace_back(sub, std::move(fn));
        return sub;
    };
    add("run", "One gradient estimation; per-axis CSV", experiments::cmd_run);
    add("sweep-n", "Fixed alpha, varying N (1D quadratic)", experiments::cmd_sweep_n)
        ->add_option("--N-list", flags.config.n_list, "Lattice sizes, comma separated")
        ->delimiter(',');
    add("sweep-alpha", "Fixed N, varying alpha (1D quadratic)", experiments::cmd_sweep_alpha)
        ->add_option("--alpha-list", flags.config.alpha_list, "Curvatures, comma separated")
        ->delimiter(',');
    add("peak2d", "Full 2D outcome distribution with predicted support mask", experiments::cmd_peak2d);
    add("compare-classical", "Query counts, errors and oracle bits against finite differences",
        experiments::cmd_compare_classical);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        for (auto& [sub, fn] : commands) {
            if (!sub->parsed()) continue;
            ExperimentConfig config = finalize(flags, sub->get_name());
            if (sub->get_name() == "sweep-alpha" && !sub->count("--N") && !flags.n_bits) config.spec.N = 80;
            if (sub->get_name() == "peak2d") {
                if (!sub->count("--d")) config.spec.d = 2;
                if (!sub->count("--N") && !flags.n_bits) config.spec.N = 64;
                if (!sub->count("--l")) config.spec.l = 100.0;
            }
            experiments::validate(config);
            if (flags.out.empty()) {
                fn(config, out, err);
            } else {
                std::ostringstream buffer;
                fn(config, buffer, err);
                std::ofstream file(flags.out, std::ios::binary);
                if (!file) throw Error("cannot open output file '" + flags.out + "'");
                file << buffer.str();
                if (!file) throw Error("failed writing '" + flags.out + "'");
            }
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace qgrad
