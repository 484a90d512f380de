#pragma once

// Manufactured-solution experiments: an exact solution is computed from
// band-limited data with the exact (unbounded) multipliers, the data are
// perturbed by noise of H-norm exactly eps, and the regularized solution is
// compared against the truth and the a-priori error bound.

#include "illposed/filters.hpp"
#include "illposed/nonlinearity.hpp"
#include "illposed/propagators.hpp"
#include "illposed/solver.hpp"
#include "illposed/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace illposed {

/// How a locally Lipschitz f enters a run: `measured` solves with f and
/// uses L(E) on the ball holding both trajectories; `truncated` solves with
/// f_B on the default radius schedule and reports the truncated-f bound.
enum class LocalLipschitzMode { measured, truncated };

struct ExperimentConfig {
    std::string family = "backward_parabolic";
    FilterKind filter = FilterKind::cutoff;
    std::size_t modes = 16;        // K
    std::size_t grid_points = 64;  // N
    double horizon = 1.0;          // T
    std::size_t steps = 128;       // M
    NonlinearitySpec nonlinearity;
    std::vector<double> u0;
    std::optional<std::vector<double>> u1;
    std::vector<double> epsilons;
    double beta_power = 1.0;
    std::uint64_t seed = 1;
    double tol = 1e-10;
    std::size_t max_iters = 200;
    LocalLipschitzMode local_lipschitz = LocalLipschitzMode::measured;

    /// Throws InvalidArgument describing the first violated constraint.
    void validate() const;
};

[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json config_to_json(const ExperimentConfig& config);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

[[nodiscard]] std::vector<std::string> preset_names();
[[nodiscard]] ExperimentConfig preset(std::string_view name);

struct Truth {
    Solution fine;                       // on the 4M-step grid
    Solution working;                    // restricted to the M-step grid
    CoefficientVector u0;
    std::optional<CoefficientVector> u1;
    double u0_wtilde = 0.0;              // ||u0||_W
    double u1_wtilde = 0.0;
    double f_wtilde_integral = 0.0;      // int_0^T ||f(t, u(t))||_W dt, fine-grid trapezoid
    double sup_norm = 0.0;               // max over fine nodes of ||u(t)||_H
};

/// A validated configuration with its spectrum, family, nonlinearity and
/// manufactured truth.
class Experiment {
public:
    explicit Experiment(ExperimentConfig config);

    [[nodiscard]] const ExperimentConfig& config() const noexcept { return config_; }
    [[nodiscard]] const SpectrumModel& spectrum() const noexcept { return spectrum_; }
    [[nodiscard]] const PropagatorFamily& family() const noexcept { return family_; }
    [[nodiscard]] const Nonlinearity& nonlinearity() const noexcept { return nonlinearity_; }
    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const Truth& truth() const noexcept { return truth_; }

private:
    ExperimentConfig config_;
    SpectrumModel spectrum_;
    PropagatorFamily family_;
    Nonlinearity nonlinearity_;
    TimeGrid grid_;
    Truth truth_;
};

/// Exact solution of the configured problem. Throws RangeError naming the
/// mode whose exact multiplier overflows.
[[nodiscard]] Truth manufacture_truth(const SpectrumModel& spectrum, const PropagatorFamily& family,
                                      const Nonlinearity& f, const ExperimentConfig& config);

/// u0 + eps d with d a seeded direction of unit H-norm; the realized
/// perturbation has H-norm eps up to rounding.
[[nodiscard]] CoefficientVector noise_inject(const CoefficientVector& u0, double epsilon, std::uint64_t seed);

struct RunRow {
    double epsilon = 0.0;
    double beta = 0.0;
    double t = 0.0;
    double error_h = 0.0;
    double bound_rhs = 0.0;
    double gamma_inv_T = 0.0;
    double gammaT_times_eps = 0.0;
    std::size_t iters = 0;
    double residual = 0.0;
};

struct SlopeRow {
    double t = 0.0;
    double slope = 0.0;            // least-squares d log(error) / d log(eps)
    double theoretical = 0.0;      // exponent predicted by the bound
    std::size_t points = 0;        // noise levels used
    std::size_t excluded = 0;      // zero errors left out of the fit
};

struct RunReport {
    ExperimentConfig config;
    std::vector<RunRow> rows;
    std::vector<SlopeRow> slopes;
    std::vector<std::string> notices;
};

/// Everything produced by one regularized solve.
struct RegularizedRun {
    BetaSelection selection;
    FilterScheme scheme;
    CoefficientVector noisy_data;
    Solution solution;
    double lipschitz = 0.0;                  // constant entering the bound exponent
    std::optional<double> truncation_radius; // set in truncated mode
};

[[nodiscard]] RegularizedRun regularized_solve(const Experiment& experiment, double epsilon,
                                               bool noisy_data = true);

/// Rows (one per working-grid node) for a single noise level.
[[nodiscard]] std::vector<RunRow> run_experiment(const Experiment& experiment, double epsilon);

/// Rows for every configured noise level, in configuration order.
[[nodiscard]] RunReport run_all(const Experiment& experiment);

/// run_all plus least-squares rates at t = 0, T/4, T/2, 3T/4, T.
[[nodiscard]] RunReport convergence_study(const Experiment& experiment);

/// Split of the error into the noise part ||u_eps - U|| and the
/// approximation part ||U - u||, U being the regularized solution from exact
/// data, each next to its a-priori bound.
struct DecompositionRow {
    double t = 0.0;
    double noise_error = 0.0;
    double noise_bound = 0.0;
    double approximation_error = 0.0;
    double approximation_bound = 0.0;
};

[[nodiscard]] std::vector<DecompositionRow> decompose_error(const Experiment& experiment, double epsilon);

}  // namespace illposed
