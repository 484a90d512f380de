#include "illposed/experiment.hpp"

#include "illposed/bounds.hpp"
#include "illposed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace illposed {

namespace {

constexpr std::size_t kFineFactor = 4;

using nlohmann::json;

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{"family",      "filter",          "K",         "N",
                                            "T",           "steps",           "nonlinearity", "u0_coefficients",
                                            "u1_coefficients", "epsilons",    "beta_rule", "seed",
                                            "tol",         "max_iters",       "local_lipschitz"};
    return keys;
}

template <class T>
T read_key(const json& j, const char* key) {
    if (!j.contains(key)) throw InvalidArgument(std::string("config is missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config key '") + key + "' has the wrong type: " + e.what());
    }
}

template <class T>
T read_optional(const json& j, const char* key, T fallback) {
    return j.contains(key) ? read_key<T>(j, key) : fallback;
}

std::size_t read_count(const json& j, const char* key) {
    const json& v = j.contains(key) ? j.at(key) : json();
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw InvalidArgument(std::string("config key '") + key + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

NonlinearitySpec read_nonlinearity(const json& j) {
    if (!j.contains("nonlinearity")) return {};
    const json& v = j.at("nonlinearity");
    NonlinearitySpec spec;
    if (v.is_string()) {
        spec.name = v.get<std::string>();
        return spec;
    }
    if (!v.is_object() || !v.contains("name") || !v.at("name").is_string()) {
        throw InvalidArgument("config key 'nonlinearity' must be \"zero\" or {\"name\": ..., \"params\": {...}}");
    }
    spec.name = v.at("name").get<std::string>();
    if (v.contains("params")) {
        if (!v.at("params").is_object()) throw InvalidArgument("nonlinearity params must be an object");
        for (const auto& [key, value] : v.at("params").items()) {
            if (!value.is_number()) throw InvalidArgument("nonlinearity parameter '" + key + "' must be a number");
            spec.params[key] = value.get<double>();
        }
    }
    return spec;
}

CoefficientVector padded(const std::vector<double>& values, std::size_t modes) {
    std::vector<double> c(modes, 0.0);
    std::copy(values.begin(), values.end(), c.begin());
    return CoefficientVector(std::move(c));
}

// Rejects configurations whose exact multipliers or smoothness weights
// leave the floating range on [0, T].
void precheck_overflow(const SpectrumModel& spectrum, const PropagatorFamily& family, double horizon) {
    for (std::size_t k = 0; k < spectrum.mode_count(); ++k) {
        const double lambda = spectrum.eigenvalue(k);
        const bool weight_ok = std::isfinite(std::exp(horizon * family.growth_rate(lambda)));
        const bool q_ok = std::isfinite(family.q(horizon, lambda));
        const bool s_ok = std::isfinite(family.s(horizon, lambda));
        if (!weight_ok || !q_ok || !s_ok) {
            std::ostringstream msg;
            msg << "mode " << k + 1 << " (lambda = " << lambda << ") overflows: exact " << family.name()
                << " multipliers are not representable at T = " << horizon;
            throw RangeError(msg.str());
        }
    }
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

std::vector<double> truth_profile(std::size_t count, double horizon, double scale) {
    // u(T)_k = scale / k, so u0_k = e^{-T k^2} scale / k is smooth enough.
    std::vector<double> u0(count);
    for (std::size_t k = 1; k <= count; ++k) {
        const double lambda = static_cast<double>(k * k);
        u0[k - 1] = std::exp(-horizon * lambda) * scale / static_cast<double>(k);
    }
    return u0;
}

}  // namespace

void ExperimentConfig::validate() const {
    (void)family_from_name(family);
    if (filter == FilterKind::custom) throw InvalidArgument("filter must be cutoff or quasi_boundary");
    if (modes < 1) throw InvalidArgument("K must be at least 1");
    if (modes > grid_points) {
        throw InvalidArgument("K = " + std::to_string(modes) + " exceeds N = " + std::to_string(grid_points));
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("T must be positive and finite");
    if (steps < 8) throw InvalidArgument("steps must be at least 8, got " + std::to_string(steps));
    if (u0.empty()) throw InvalidArgument("u0_coefficients must not be empty");
    if (u0.size() > modes) {
        throw InvalidArgument("u0_coefficients has " + std::to_string(u0.size()) + " entries for K = " +
                              std::to_string(modes) + " modes");
    }
    if (u1 && u1->size() > modes) {
        throw InvalidArgument("u1_coefficients has " + std::to_string(u1->size()) + " entries for K = " +
                              std::to_string(modes) + " modes");
    }
    for (double c : u0) {
        if (!std::isfinite(c)) throw InvalidArgument("u0_coefficients must be finite");
    }
    if (u1) {
        for (double c : *u1) {
            if (!std::isfinite(c)) throw InvalidArgument("u1_coefficients must be finite");
        }
    }
    if (epsilons.empty()) throw InvalidArgument("epsilons must not be empty");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0 && epsilons[i] < 1.0)) throw InvalidArgument("epsilons must lie in (0, 1)");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
            throw InvalidArgument("epsilons must be strictly decreasing");
        }
    }
    if (!(beta_power > 0.0 && beta_power <= 1.0)) {
        throw AdmissibilityError("beta_rule power must lie in (0, 1]");
    }
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!known_keys().count(key)) throw InvalidArgument("unknown config key '" + key + "'");
    }
    ExperimentConfig c;
    c.family = read_key<std::string>(j, "family");
    c.filter = filter_kind_from_name(read_key<std::string>(j, "filter"));
    c.modes = read_count(j, "K");
    c.grid_points = read_count(j, "N");
    c.horizon = read_key<double>(j, "T");
    c.steps = read_count(j, "steps");
    c.nonlinearity = read_nonlinearity(j);
    c.u0 = read_key<std::vector<double>>(j, "u0_coefficients");
    if (j.contains("u1_coefficients")) c.u1 = read_key<std::vector<double>>(j, "u1_coefficients");
    c.epsilons = read_key<std::vector<double>>(j, "epsilons");
    if (j.contains("beta_rule")) {
        const json& rule = j.at("beta_rule");
        if (!rule.is_object()) throw InvalidArgument("beta_rule must be an object {\"power\": p}");
        c.beta_power = read_optional<double>(rule, "power", 1.0);
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw InvalidArgument("seed must be a nonnegative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    c.tol = read_optional<double>(j, "tol", c.tol);
    if (j.contains("max_iters")) c.max_iters = read_count(j, "max_iters");
    const std::string mode = read_optional<std::string>(j, "local_lipschitz", "measured");
    if (mode == "measured") {
        c.local_lipschitz = LocalLipschitzMode::measured;
    } else if (mode == "truncated") {
        c.local_lipschitz = LocalLipschitzMode::truncated;
    } else {
        throw InvalidArgument("local_lipschitz must be \"measured\" or \"truncated\"");
    }
    c.validate();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["family"] = c.family;
    j["filter"] = std::string(to_string(c.filter));
    j["K"] = c.modes;
    j["N"] = c.grid_points;
    j["T"] = c.horizon;
    j["steps"] = c.steps;
    if (c.nonlinearity.name == "zero" && c.nonlinearity.params.empty()) {
        j["nonlinearity"] = "zero";
    } else {
        json params = json::object();
        for (const auto& [key, value] : c.nonlinearity.params) params[key] = value;
        j["nonlinearity"] = {{"name", c.nonlinearity.name}, {"params", params}};
    }
    j["u0_coefficients"] = c.u0;
    if (c.u1) j["u1_coefficients"] = *c.u1;
    j["epsilons"] = c.epsilons;
    j["beta_rule"] = {{"power", c.beta_power}};
    j["seed"] = c.seed;
    j["tol"] = c.tol;
    j["max_iters"] = c.max_iters;
    j["local_lipschitz"] = c.local_lipschitz == LocalLipschitzMode::measured ? "measured" : "truncated";
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidArgument("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

std::vector<std::string> preset_names() {
    return {"parabolic_cutoff_zero", "parabolic_quasi_boundary_zero", "parabolic_cutoff_cubic",
            "parabolic_quasi_boundary_cubic"};
}

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig c;
    c.family = "backward_parabolic";
    c.modes = 16;
    c.grid_points = 64;
    c.horizon = 0.05;
    c.steps = 128;
    c.epsilons = {1e-2, 1e-3, 1e-4, 1e-5};
    c.beta_power = 1.0;
    c.seed = 20240611;
    c.tol = 1e-10;

    const bool cubic = name.ends_with("_cubic");
    if (!cubic && !name.ends_with("_zero")) throw InvalidArgument("unknown preset '" + std::string(name) + "'");
    const std::string_view head = name.substr(0, name.size() - (cubic ? 6 : 5));
    if (head == "parabolic_cutoff") {
        c.filter = FilterKind::cutoff;
    } else if (head == "parabolic_quasi_boundary") {
        c.filter = FilterKind::quasi_boundary;
    } else {
        throw InvalidArgument("unknown preset '" + std::string(name) + "'");
    }
    // Small data for the cubic term means a small a |u|^2; the data scale is
    // kept at order one so the noise stays small against ||u0||_W.
    if (cubic) c.nonlinearity = NonlinearitySpec{"cubic", {{"a", 1e-3}}};
    c.u0 = truth_profile(c.modes, c.horizon, 2.0);
    c.validate();
    return c;
}

Truth manufacture_truth(const SpectrumModel& spectrum, const PropagatorFamily& family, const Nonlinearity& f,
                        const ExperimentConfig& config) {
    precheck_overflow(spectrum, family, config.horizon);
    const std::size_t modes = spectrum.mode_count();

    CoefficientVector u0 = padded(config.u0, modes);
    std::optional<CoefficientVector> u1;
    if (config.u1) u1 = padded(*config.u1, modes);

    const TimeGrid fine(config.horizon, kFineFactor * config.steps);
    const MildProblem problem{Evolution::exact(family), u0, u1, f};
    Solution fine_solution = picard_solve(spectrum, fine, problem, SolveOptions{config.tol, config.max_iters});

    const TimeGrid working(config.horizon, config.steps);
    std::vector<CoefficientVector> states;
    states.reserve(working.size());
    for (std::size_t i = 0; i < working.size(); ++i) states.push_back(fine_solution.states[kFineFactor * i]);
    Solution working_solution{working, std::move(states), fine_solution.diagnostics};

    const double u0_w = wtilde_norm(u0, config.horizon, family, spectrum);
    const double u1_w = u1 ? wtilde_norm(*u1, config.horizon, family, spectrum) : 0.0;
    double integral = 0.0;
    if (!f.is_zero()) {
        for (std::size_t i = 0; i < fine.size(); ++i) {
            const double weight = (i == 0 || i + 1 == fine.size()) ? 0.5 : 1.0;
            const CoefficientVector forcing = f(fine.node(i), fine_solution.states[i], spectrum);
            integral += weight * wtilde_norm(forcing, config.horizon, family, spectrum);
        }
        integral *= fine.step();
    }
    const double sup = fine_solution.sup_norm();
    return Truth{std::move(fine_solution), std::move(working_solution), std::move(u0), std::move(u1), u0_w, u1_w,
                 integral, sup};
}

Experiment::Experiment(ExperimentConfig config)
    : config_((config.validate(), std::move(config))),
      spectrum_(dirichlet_laplacian_1d(config_.modes, config_.grid_points)),
      family_(family_from_name(config_.family)),
      nonlinearity_(make_nonlinearity(config_.nonlinearity, spectrum_)),
      grid_(config_.horizon, config_.steps),
      truth_(manufacture_truth(spectrum_, family_, nonlinearity_, config_)) {}

CoefficientVector noise_inject(const CoefficientVector& u0, double epsilon, std::uint64_t seed) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("noise level must be nonnegative");
    if (epsilon == 0.0 || u0.size() == 0) return u0;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CoefficientVector d(u0.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = normal(rng);
    d *= 1.0 / h_norm(d);

    CoefficientVector out = u0 + epsilon * d;

    // Rounding in u0 + eps d perturbs the realized norm; re-solve one
    // component so the norm is eps to rounding. The component is taken where
    // u0 is small against eps so that out_j - u0_j is computed exactly.
    std::size_t pick = d.size();
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (std::abs(u0[k]) <= epsilon && (pick == d.size() || std::abs(d[k]) > std::abs(d[pick]))) pick = k;
    }
    if (pick == d.size()) return out;
    double rest = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (k == pick) continue;
        const double delta = out[k] - u0[k];
        rest += delta * delta;
    }
    const double remaining = std::max(0.0, epsilon * epsilon - rest);
    out[pick] = u0[pick] + std::copysign(std::sqrt(remaining), d[pick]);
    return out;
}

RegularizedRun regularized_solve(const Experiment& experiment, double epsilon, bool noisy_data) {
    const ExperimentConfig& cfg = experiment.config();
    const SpectrumModel& spectrum = experiment.spectrum();
    const Nonlinearity& f = experiment.nonlinearity();
    const Truth& truth = experiment.truth();

    const BetaSelection selection = select_beta(epsilon, PowerRule{cfg.beta_power});
    FilterScheme scheme = make_filter(cfg.filter, experiment.family(), selection.beta, cfg.horizon);
    CoefficientVector data = noisy_data ? noise_inject(truth.u0, epsilon, cfg.seed) : truth.u0;
    const SolveOptions options{cfg.tol, cfg.max_iters};

    auto solve_with = [&](const Nonlinearity& g) {
        return picard_solve(spectrum, experiment.grid(), MildProblem{Evolution::filtered(scheme), data, truth.u1, g},
                            options);
    };

    if (f.is_global()) {
        Solution solution = solve_with(f);
        const double lipschitz = f.lipschitz_constant(0.0);
        return RegularizedRun{selection, std::move(scheme), std::move(data), std::move(solution), lipschitz,
                              std::nullopt};
    }
    if (cfg.local_lipschitz == LocalLipschitzMode::measured) {
        Solution solution = solve_with(f);
        const double radius = std::max(truth.sup_norm, solution.sup_norm());
        const double lipschitz = f.lipschitz_constant(radius);
        return RegularizedRun{selection, std::move(scheme), std::move(data), std::move(solution), lipschitz,
                              std::nullopt};
    }
    const double radius = default_truncation_radius(f, scheme.m2(), cfg.horizon, selection.beta);
    Solution solution = std::isfinite(radius) ? solve_with(truncate_nonlinearity(f, radius)) : solve_with(f);
    const double lipschitz = std::isfinite(radius) ? f.lipschitz_constant(radius) : f.lipschitz_constant(0.0);
    return RegularizedRun{selection, std::move(scheme), std::move(data), std::move(solution), lipschitz, radius};
}

namespace {

double bound_at(const Experiment& experiment, const RegularizedRun& run, double t, double epsilon) {
    const Truth& truth = experiment.truth();
    const double w_integral =
        truth.f_wtilde_integral + experiment.family().s_envelope(experiment.config().horizon) * truth.u1_wtilde;
    if (run.truncation_radius && std::isfinite(*run.truncation_radius)) {
        return theorem2_bound(run.scheme, t, epsilon, run.lipschitz, truth.u0_wtilde, w_integral);
    }
    return theorem1_bound(run.scheme, t, epsilon, run.lipschitz, truth.u0_wtilde, w_integral);
}

std::size_t quartile_node(const TimeGrid& grid, std::size_t quarter) {
    return (quarter * grid.steps() + 2) / 4;
}

}  // namespace

std::vector<RunRow> run_experiment(const Experiment& experiment, double epsilon) {
    const RegularizedRun run = regularized_solve(experiment, epsilon);
    const auto& truth_states = experiment.truth().working.states;
    const auto& diagnostics = run.solution.diagnostics;
    std::vector<RunRow> rows;
    rows.reserve(truth_states.size());
    for (std::size_t i = 0; i < truth_states.size(); ++i) {
        const double t = experiment.grid().node(i);
        RunRow row;
        row.epsilon = epsilon;
        row.beta = run.selection.beta;
        row.t = t;
        row.error_h = h_norm(run.solution.states[i] - truth_states[i]);
        row.bound_rhs = bound_at(experiment, run, t, epsilon);
        row.gamma_inv_T = run.selection.gamma_inv_T;
        row.gammaT_times_eps = run.selection.gammaT_times_eps;
        row.iters = diagnostics.iterations;
        row.residual = diagnostics.final_residual;
        rows.push_back(row);
    }
    return rows;
}

RunReport run_all(const Experiment& experiment) {
    RunReport report;
    report.config = experiment.config();
    for (double epsilon : experiment.config().epsilons) {
        auto rows = run_experiment(experiment, epsilon);
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
    return report;
}

RunReport convergence_study(const Experiment& experiment) {
    const ExperimentConfig& cfg = experiment.config();
    if (cfg.epsilons.size() < 3) throw InvalidArgument("a convergence study needs at least 3 noise levels");
    RunReport report = run_all(experiment);
    const TimeGrid& grid = experiment.grid();
    const std::size_t per_run = grid.size();
    const double p = cfg.beta_power;

    for (std::size_t quarter = 0; quarter <= 4; ++quarter) {
        const std::size_t node = quartile_node(grid, quarter);
        const double t = grid.node(node);
        std::vector<double> x;
        std::vector<double> y;
        std::size_t excluded = 0;
        for (std::size_t r = 0; r < cfg.epsilons.size(); ++r) {
            const RunRow& row = report.rows[r * per_run + node];
            if (row.error_h > 0.0) {
                x.push_back(std::log(row.epsilon));
                y.push_back(std::log(row.error_h));
            } else {
                ++excluded;
            }
        }
        std::ostringstream where;
        where << "t = " << t;
        if (excluded > 0) {
            report.notices.push_back(where.str() + ": " + std::to_string(excluded) +
                                     " zero error(s) excluded from the rate fit");
        }
        if (x.size() < 3) {
            report.notices.push_back(where.str() + ": fewer than 3 nonzero errors, no rate fitted");
            continue;
        }
        SlopeRow slope;
        slope.t = t;
        slope.slope = least_squares_slope(x, y);
        slope.theoretical = std::min(1.0 - p * t / cfg.horizon, p * (cfg.horizon - t) / cfg.horizon);
        slope.points = x.size();
        slope.excluded = excluded;
        report.slopes.push_back(slope);
    }
    return report;
}

std::vector<DecompositionRow> decompose_error(const Experiment& experiment, double epsilon) {
    const RegularizedRun noisy = regularized_solve(experiment, epsilon, true);
    const RegularizedRun clean = regularized_solve(experiment, epsilon, false);
    const Truth& truth = experiment.truth();
    const Nonlinearity& f = experiment.nonlinearity();

    double lipschitz = 0.0;
    if (f.is_global()) {
        lipschitz = f.lipschitz_constant(0.0);
    } else if (noisy.truncation_radius && std::isfinite(*noisy.truncation_radius)) {
        lipschitz = 2.0 * noisy.lipschitz;
    } else {
        const double radius = std::max({truth.sup_norm, noisy.solution.sup_norm(), clean.solution.sup_norm()});
        lipschitz = f.lipschitz_constant(radius);
    }
    const double w_integral =
        truth.f_wtilde_integral + experiment.family().s_envelope(experiment.config().horizon) * truth.u1_wtilde;
    const double data_error = h_norm(noisy.noisy_data - truth.u0);

    std::vector<DecompositionRow> rows;
    for (std::size_t i = 0; i < experiment.grid().size(); ++i) {
        const double t = experiment.grid().node(i);
        DecompositionRow row;
        row.t = t;
        row.noise_error = h_norm(noisy.solution.states[i] - clean.solution.states[i]);
        row.noise_bound = noise_propagation_bound(noisy.scheme, t, lipschitz, data_error);
        row.approximation_error = h_norm(clean.solution.states[i] - truth.working.states[i]);
        row.approximation_bound = approximation_bound(clean.scheme, t, lipschitz, truth.u0_wtilde, w_integral);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace illposed
