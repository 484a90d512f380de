#pragma once

// Filter regularized operators: bounded spectral multipliers that replace the
// unbounded Q and S. A scheme is admissible when, for some constants M1, M2,
//
//   |q_f(t,lambda)| <= M1 gamma(t,beta),     |s_f(t,lambda)| <= M2 gamma(t,beta),
//   |q_f - q| e^{-T rho(lambda)} <= C gamma(T-t,beta)^{-1}   (same for s),
//
// where gamma(t, beta) = beta^{-t/T} is multiplicative in t.

#include "illposed/propagators.hpp"

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace illposed {

/// Amplification profile gamma(t, beta). Defaults to beta^{-t/T}.
class GammaFunction {
public:
    using Evaluator = std::function<double(double t, double beta)>;

    explicit GammaFunction(double horizon);
    GammaFunction(double horizon, Evaluator evaluator);

    /// Throws InvalidArgument for t outside [0, T] or beta <= 0.
    [[nodiscard]] double operator()(double t, double beta) const;
    [[nodiscard]] double inverse(double t, double beta) const { return 1.0 / (*this)(t, beta); }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }

private:
    double horizon_;
    Evaluator evaluator_;
};

[[nodiscard]] double gamma_eval(const GammaFunction& gamma, double t, double beta);

/// One draw for the gamma property checks: property 1 at (t, beta), the
/// product rule at (tau1, tau2) when tau1 + tau2 <= T, the quotient rule at
/// (max, min) of the pair.
struct GammaSample {
    double t = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double beta = 0.5;
};

struct GammaPropertyReport {
    bool identity_at_zero = true;   // gamma(0, beta) = 1
    bool unbounded_as_beta_vanishes = true;  // strictly increasing along beta = 10^-j, t > 0
    bool product_rule = true;       // gamma(a+b) = gamma(a) gamma(b)
    bool quotient_rule = true;      // gamma(a-b) = gamma(a) / gamma(b)
    double worst_identity_error = 0.0;
    double worst_product_error = 0.0;   // relative
    double worst_quotient_error = 0.0;  // relative
    std::size_t product_samples = 0;

    [[nodiscard]] bool pass() const noexcept {
        return identity_at_zero && unbounded_as_beta_vanishes && product_rule && quotient_rule;
    }
};

[[nodiscard]] GammaPropertyReport gamma_property_check(const GammaFunction& gamma,
                                                       std::span<const GammaSample> samples,
                                                       double rel_tol = 1e-12);

enum class FilterKind { cutoff, quasi_boundary, custom };

[[nodiscard]] std::string_view to_string(FilterKind kind) noexcept;
[[nodiscard]] FilterKind filter_kind_from_name(std::string_view name);

/// A pair of bounded multipliers standing in for the exact Q and S.
class FilterScheme {
public:
    using Multiplier = std::function<double(double t, double lambda)>;

    struct Constants {
        double m1 = 1.0;
        double m2 = 1.0;
    };

    FilterScheme(PropagatorFamily family, double beta, GammaFunction gamma, Multiplier q_filtered,
                 Multiplier s_filtered, Constants constants, FilterKind kind);

    [[nodiscard]] double q(double t, double lambda) const { return q_(t, lambda); }
    [[nodiscard]] double s(double t, double lambda) const { return s_(t, lambda); }
    [[nodiscard]] double multiplier(Which which, double t, double lambda) const {
        return which == Which::Q ? q_(t, lambda) : s_(t, lambda);
    }

    [[nodiscard]] const PropagatorFamily& family() const noexcept { return family_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] const GammaFunction& gamma() const noexcept { return gamma_; }
    [[nodiscard]] double horizon() const noexcept { return gamma_.horizon(); }
    [[nodiscard]] double m1() const noexcept { return constants_.m1; }
    [[nodiscard]] double m2() const noexcept { return constants_.m2; }
    [[nodiscard]] FilterKind kind() const noexcept { return kind_; }

private:
    PropagatorFamily family_;
    double beta_;
    GammaFunction gamma_;
    Multiplier q_;
    Multiplier s_;
    Constants constants_;
    FilterKind kind_;
};

/// Keeps modes with rho(lambda) <= ln(1/beta)/T unchanged and zeroes the rest.
/// Requires 0 < beta < 1.
[[nodiscard]] FilterScheme cutoff_filter(const PropagatorFamily& family, double beta, double horizon);

/// Damps every mode by 1 / (1 + beta e^{T rho(lambda)}).
[[nodiscard]] FilterScheme quasi_boundary_filter(const PropagatorFamily& family, double beta, double horizon);

/// Builds a scheme by kind name; `custom` is rejected.
[[nodiscard]] FilterScheme make_filter(FilterKind kind, const PropagatorFamily& family, double beta,
                                       double horizon);

/// Cutoff level in eigenvalue units, lambda_c with rho(lambda_c) = ln(1/beta)/T.
[[nodiscard]] double cutoff_eigenvalue(const PropagatorFamily& family, double beta, double horizon);

struct FilterSamples {
    std::vector<double> times;
    std::vector<double> lambdas;
};

/// t on a uniform 64-point grid of [0, T]; lambda on the given eigenvalues
/// plus a log-spaced grid reaching four times the cutoff growth rate.
[[nodiscard]] FilterSamples default_filter_samples(const FilterScheme& scheme,
                                                   std::span<const double> eigenvalues = {});

struct FilterBoundReport {
    double sup_q_ratio = 0.0;  // sup |q_f| / gamma(t, beta)
    double sup_s_ratio = 0.0;
    bool q_pass = false;       // sup <= M1 + 1e-9
    bool s_pass = false;

    [[nodiscard]] bool pass() const noexcept { return q_pass && s_pass; }
};

[[nodiscard]] FilterBoundReport filter_bound_check(const FilterScheme& scheme, const FilterSamples& samples);

struct FilterErrorReport {
    double sup_q = 0.0;  // sup |q_f - q| e^{-T rho} gamma(T - t, beta)
    double sup_s = 0.0;
    double q_constant = 1.0;
    double s_constant = 1.0;
    bool q_pass = false;
    bool s_pass = false;

    [[nodiscard]] bool pass() const noexcept { return q_pass && s_pass; }
};

/// Weighted approximation error of both multipliers. The admissible constant
/// is 1 for Q and the family's S envelope factor at T for S.
[[nodiscard]] FilterErrorReport filter_error_check(const FilterScheme& scheme, const FilterSamples& samples);

/// beta = eps^p with 0 < p <= 1.
struct PowerRule {
    double power = 1.0;
};

struct BetaSelection {
    double epsilon = 0.0;
    double beta = 0.0;
    double power = 1.0;             // effective exponent log(beta)/log(eps)
    double gamma_inv_T = 0.0;       // gamma(T, beta)^{-1} = beta
    double gammaT_times_eps = 0.0;  // gamma(T, beta) eps = eps^{1-p}
    double limit_K = 0.0;           // limit of gamma(T, beta) eps as eps -> 0: 1 if p = 1, else 0
};

[[nodiscard]] BetaSelection select_beta(double epsilon, PowerRule rule);

/// Accepts an explicit beta for noise level eps, inferring its exponent.
/// Throws AdmissibilityError when beta = eps^p with p > 1 (gamma(T,beta) eps
/// diverges) or p <= 0 (gamma(T,beta)^{-1} does not vanish).
[[nodiscard]] BetaSelection assess_beta(double epsilon, double beta);

}  // namespace illposed
