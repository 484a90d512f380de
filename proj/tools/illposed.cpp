// Command-line front end: run, sweep, validate-filter, m0.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 validation
// failure, 3 solver non-convergence.

#include "illposed/errors.hpp"
#include "illposed/experiment.hpp"
#include "illposed/filters.hpp"
#include "illposed/report.hpp"
#include "illposed/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kValidation = 2;
constexpr int kNonConvergence = 3;

struct OutputOptions {
    std::string config;
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
};

illposed::ReportFormat resolve_format(const OutputOptions& o) {
    return o.format.empty() ? illposed::report_format_from_path(o.out) : illposed::report_format_from_name(o.format);
}

std::size_t count_violations(const illposed::RunReport& report) {
    std::size_t n = 0;
    for (const auto& row : report.rows) {
        if (!(row.error_h <= row.bound_rhs * 1.05)) ++n;
    }
    return n;
}

int do_run(const OutputOptions& o, bool sweep) {
    const auto format = resolve_format(o);
    auto config = illposed::load_config(o.config);
    if (o.seed) config.seed = *o.seed;
    const illposed::Experiment experiment(config);
    const auto report = sweep ? illposed::convergence_study(experiment) : illposed::run_all(experiment);
    illposed::emit_report(report, format, o.out);

    std::printf("%zu rows written to %s\n", report.rows.size(), o.out.c_str());
    if (const std::size_t bad = count_violations(report); bad > 0) {
        std::printf("warning: %zu rows exceed the error bound by more than 5%%\n", bad);
    }
    for (const auto& s : report.slopes) {
        std::printf("t = %-10.6g slope = %-10.6g expected = %-10.6g (%zu points)\n", s.t, s.slope, s.theoretical,
                    s.points);
    }
    for (const auto& notice : report.notices) std::printf("note: %s\n", notice.c_str());
    return kOk;
}

int do_validate_filter(const std::string& family_name, const std::string& filter_name, double beta, double horizon) {
    const auto family = illposed::family_from_name(family_name);
    const auto scheme =
        illposed::make_filter(illposed::filter_kind_from_name(filter_name), family, beta, horizon);
    const auto samples = illposed::default_filter_samples(scheme);
    const auto bound = illposed::filter_bound_check(scheme, samples);
    const auto error = illposed::filter_error_check(scheme, samples);

    std::printf("family %s, filter %s, beta = %.17g, T = %.17g\n", family_name.c_str(), filter_name.c_str(), beta,
                horizon);
    std::printf("samples: %zu times x %zu eigenvalues\n", samples.times.size(), samples.lambdas.size());
    std::printf("M1 = %.17g, M2 = %.17g\n", scheme.m1(), scheme.m2());
    std::printf("sup |q_f| / gamma      = %.17g  %s\n", bound.sup_q_ratio, bound.q_pass ? "pass" : "FAIL");
    std::printf("sup |s_f| / gamma      = %.17g  %s\n", bound.sup_s_ratio, bound.s_pass ? "pass" : "FAIL");
    std::printf("weighted q error       = %.17g  (limit %.17g)  %s\n", error.sup_q, error.q_constant,
                error.q_pass ? "pass" : "FAIL");
    std::printf("weighted s error       = %.17g  (limit %.17g)  %s\n", error.sup_s, error.s_constant,
                error.s_pass ? "pass" : "FAIL");
    const bool pass = bound.pass() && error.pass();
    std::printf("%s\n", pass ? "PASS" : "FAIL");
    return pass ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Filter regularization experiments for ill-posed nonlinear evolution problems"};
    app.require_subcommand(1);

    OutputOptions run_opts;
    auto* run = app.add_subcommand("run", "Regularized solves for every noise level in a config");
    run->add_option("--config", run_opts.config, "Experiment config (JSON)")->required();
    run->add_option("--out", run_opts.out, "Report path (.csv or .json)")->required();
    run->add_option("--format", run_opts.format, "csv or json (default: from the file extension)");
    run->add_option("--seed", run_opts.seed, "Override the noise seed");

    OutputOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Convergence study with fitted rates");
    sweep->add_option("--config", sweep_opts.config, "Experiment config (JSON)")->required();
    sweep->add_option("--out", sweep_opts.out, "Report path (.csv or .json)")->required();
    sweep->add_option("--format", sweep_opts.format, "csv or json (default: from the file extension)");
    sweep->add_option("--seed", sweep_opts.seed, "Override the noise seed");

    std::string family = "backward_parabolic";
    std::string filter = "cutoff";
    double beta = 0.0;
    double horizon = 1.0;
    auto* validate = app.add_subcommand("validate-filter", "Check a built-in filter against its admissibility bounds");
    validate->add_option("--family", family, "backward_parabolic, elliptic_cauchy or damped_wave");
    validate->add_option("--filter", filter, "cutoff or quasi_boundary");
    validate->add_option("--beta", beta, "Regularization parameter")->required();
    validate->add_option("--T", horizon, "Time horizon");

    double m2 = 0.0;
    double lipschitz = 0.0;
    double gamma_T = 0.0;
    double m0_horizon = 0.0;
    auto* m0 = app.add_subcommand("m0", "Contraction index of the Picard map");
    m0->add_option("--M2", m2)->required();
    m0->add_option("--L", lipschitz)->required();
    m0->add_option("--gammaT", gamma_T)->required();
    m0->add_option("--T", m0_horizon)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return kUsage;
    }

    try {
        if (*run) return do_run(run_opts, false);
        if (*sweep) return do_run(sweep_opts, true);
        if (*validate) return do_validate_filter(family, filter, beta, horizon);
        if (*m0) {
            std::printf("%zu\n", illposed::m0_estimate(m2, lipschitz, gamma_T, m0_horizon));
            return kOk;
        }
    } catch (const illposed::NonConvergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        const auto& history = e.residual_history();
        const std::size_t first = history.size() > 5 ? history.size() - 5 : 0;
        for (std::size_t i = first; i < history.size(); ++i) {
            std::fprintf(stderr, "  residual[%zu] = %.17g\n", i + 1, history[i]);
        }
        return kNonConvergence;
    } catch (const illposed::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
    return kUsage;
}
