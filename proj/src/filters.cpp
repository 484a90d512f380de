#include "illposed/filters.hpp"

#include "illposed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace illposed {

namespace {

constexpr double kCheckSlack = 1e-9;

double relative_error(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

void require_horizon(double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("horizon T must be positive and finite");
}

}  // namespace

GammaFunction::GammaFunction(double horizon)
    : GammaFunction(horizon, [horizon](double t, double beta) { return std::exp(-(t / horizon) * std::log(beta)); }) {}

GammaFunction::GammaFunction(double horizon, Evaluator evaluator)
    : horizon_(horizon), evaluator_(std::move(evaluator)) {
    require_horizon(horizon);
}

double GammaFunction::operator()(double t, double beta) const {
    if (!(t >= 0.0 && t <= horizon_)) {
        std::ostringstream msg;
        msg << "gamma: time " << t << " outside [0, " << horizon_ << "]";
        throw InvalidArgument(msg.str());
    }
    if (!(beta > 0.0)) throw InvalidArgument("gamma: beta must be positive");
    return evaluator_(t, beta);
}

double gamma_eval(const GammaFunction& gamma, double t, double beta) { return gamma(t, beta); }

GammaPropertyReport gamma_property_check(const GammaFunction& gamma, std::span<const GammaSample> samples,
                                         double rel_tol) {
    GammaPropertyReport report;
    const double horizon = gamma.horizon();
    for (const auto& sample : samples) {
        const double beta = sample.beta;

        const double at_zero = gamma(0.0, beta);
        report.worst_identity_error = std::max(report.worst_identity_error, std::abs(at_zero - 1.0));

        if (sample.t > 0.0) {
            double previous = gamma(sample.t, 0.1);
            for (int j = 2; j <= 8; ++j) {
                const double next = gamma(sample.t, std::pow(10.0, -j));
                if (!(next > previous)) report.unbounded_as_beta_vanishes = false;
                previous = next;
            }
        }

        if (sample.tau1 + sample.tau2 <= horizon) {
            const double lhs = gamma(sample.tau1 + sample.tau2, beta);
            const double rhs = gamma(sample.tau1, beta) * gamma(sample.tau2, beta);
            report.worst_product_error = std::max(report.worst_product_error, relative_error(lhs, rhs));
            ++report.product_samples;
        }

        const double hi = std::max(sample.tau1, sample.tau2);
        const double lo = std::min(sample.tau1, sample.tau2);
        const double lhs = gamma(hi - lo, beta);
        const double rhs = gamma(hi, beta) / gamma(lo, beta);
        report.worst_quotient_error = std::max(report.worst_quotient_error, relative_error(lhs, rhs));
    }
    report.identity_at_zero = report.worst_identity_error <= rel_tol;
    report.product_rule = report.worst_product_error <= rel_tol;
    report.quotient_rule = report.worst_quotient_error <= rel_tol;
    return report;
}

std::string_view to_string(FilterKind kind) noexcept {
    switch (kind) {
        case FilterKind::cutoff: return "cutoff";
        case FilterKind::quasi_boundary: return "quasi_boundary";
        case FilterKind::custom: return "custom";
    }
    return "unknown";
}

FilterKind filter_kind_from_name(std::string_view name) {
    if (name == "cutoff") return FilterKind::cutoff;
    if (name == "quasi_boundary") return FilterKind::quasi_boundary;
    throw InvalidArgument("unknown filter '" + std::string(name) + "' (expected cutoff or quasi_boundary)");
}

FilterScheme::FilterScheme(PropagatorFamily family, double beta, GammaFunction gamma, Multiplier q_filtered,
                           Multiplier s_filtered, Constants constants, FilterKind kind)
    : family_(family),
      beta_(beta),
      gamma_(std::move(gamma)),
      q_(std::move(q_filtered)),
      s_(std::move(s_filtered)),
      constants_(constants),
      kind_(kind) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive and finite");
    if (!(constants.m1 > 0.0) || !(constants.m2 > 0.0)) throw InvalidArgument("bound constants must be positive");
}

double cutoff_eigenvalue(const PropagatorFamily& family, double beta, double horizon) {
    return family.growth_inverse(std::log(1.0 / beta) / horizon);
}

FilterScheme cutoff_filter(const PropagatorFamily& family, double beta, double horizon) {
    require_horizon(horizon);
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("cutoff filter needs 0 < beta < 1");
    const double rho_cut = std::log(1.0 / beta) / horizon;
    auto keep = [family, rho_cut](Which which) {
        return [family, rho_cut, which](double t, double lambda) {
            return family.growth_rate(lambda) <= rho_cut ? family.multiplier(which, t, lambda) : 0.0;
        };
    };
    const double c2 = family.borel_constants().upper;
    return FilterScheme(family, beta, GammaFunction(horizon), keep(Which::Q), keep(Which::S),
                        {c2, c2 * family.s_envelope(horizon)}, FilterKind::cutoff);
}

FilterScheme quasi_boundary_filter(const PropagatorFamily& family, double beta, double horizon) {
    require_horizon(horizon);
    if (!(beta > 0.0)) throw InvalidArgument("quasi-boundary filter needs beta > 0");
    // q / (1 + beta e^{T rho}) rewritten as (q e^{-T rho}) / (e^{-T rho} + beta).
    auto damp = [family, beta, horizon](Which which) {
        return [family, beta, horizon, which](double t, double lambda) {
            const double decay = std::exp(-horizon * family.growth_rate(lambda));
            return family.scaled(which, t, lambda, horizon) / (decay + beta);
        };
    };
    const double c2 = family.borel_constants().upper;
    return FilterScheme(family, beta, GammaFunction(horizon), damp(Which::Q), damp(Which::S),
                        {c2, c2 * family.s_envelope(horizon)}, FilterKind::quasi_boundary);
}

FilterScheme make_filter(FilterKind kind, const PropagatorFamily& family, double beta, double horizon) {
    switch (kind) {
        case FilterKind::cutoff: return cutoff_filter(family, beta, horizon);
        case FilterKind::quasi_boundary: return quasi_boundary_filter(family, beta, horizon);
        case FilterKind::custom: break;
    }
    throw InvalidArgument("custom filters have no default construction");
}

FilterSamples default_filter_samples(const FilterScheme& scheme, std::span<const double> eigenvalues) {
    constexpr int kTimePoints = 64;
    constexpr int kLambdaPoints = 256;
    const double horizon = scheme.horizon();
    const PropagatorFamily& family = scheme.family();

    FilterSamples samples;
    samples.times.reserve(kTimePoints);
    for (int i = 0; i < kTimePoints; ++i) {
        samples.times.push_back(horizon * (static_cast<double>(i) / (kTimePoints - 1)));
    }

    double lambda_hi = 1e3;
    double lambda_cut = 0.0;
    if (family.kind() != FamilyKind::damped_wave) {
        const double rho_cut = std::max(std::log(1.0 / scheme.beta()) / horizon, 1.0 / horizon);
        lambda_cut = family.growth_inverse(rho_cut);
        lambda_hi = family.growth_inverse(4.0 * rho_cut);
    }
    const double lambda_lo = lambda_hi * 1e-8;
    samples.lambdas.assign(eigenvalues.begin(), eigenvalues.end());
    const double log_lo = std::log(lambda_lo);
    const double log_hi = std::log(lambda_hi);
    for (int i = 0; i < kLambdaPoints; ++i) {
        samples.lambdas.push_back(std::exp(log_lo + (log_hi - log_lo) * i / (kLambdaPoints - 1)));
    }
    if (lambda_cut > 0.0) {
        samples.lambdas.push_back(lambda_cut);
        samples.lambdas.push_back(lambda_cut * (1.0 + 1e-12));
    }
    std::sort(samples.lambdas.begin(), samples.lambdas.end());
    samples.lambdas.erase(std::unique(samples.lambdas.begin(), samples.lambdas.end()), samples.lambdas.end());
    return samples;
}

FilterBoundReport filter_bound_check(const FilterScheme& scheme, const FilterSamples& samples) {
    FilterBoundReport report;
    bool finite = true;
    for (double t : samples.times) {
        const double g = scheme.gamma()(t, scheme.beta());
        for (double lambda : samples.lambdas) {
            const double rq = std::abs(scheme.q(t, lambda)) / g;
            const double rs = std::abs(scheme.s(t, lambda)) / g;
            if (std::isnan(rq) || std::isnan(rs)) finite = false;
            report.sup_q_ratio = std::max(report.sup_q_ratio, rq);
            report.sup_s_ratio = std::max(report.sup_s_ratio, rs);
        }
    }
    report.q_pass = finite && report.sup_q_ratio <= scheme.m1() + kCheckSlack;
    report.s_pass = finite && report.sup_s_ratio <= scheme.m2() + kCheckSlack;
    return report;
}

FilterErrorReport filter_error_check(const FilterScheme& scheme, const FilterSamples& samples) {
    FilterErrorReport report;
    const double horizon = scheme.horizon();
    const PropagatorFamily& family = scheme.family();
    report.q_constant = 1.0;
    report.s_constant = family.s_envelope(horizon);
    bool finite = true;
    for (double t : samples.times) {
        const double g = scheme.gamma()(horizon - t, scheme.beta());
        for (double lambda : samples.lambdas) {
            const double decay = std::exp(-horizon * family.growth_rate(lambda));
            const double eq = std::abs(scheme.q(t, lambda) * decay - family.scaled(Which::Q, t, lambda, horizon)) * g;
            const double es = std::abs(scheme.s(t, lambda) * decay - family.scaled(Which::S, t, lambda, horizon)) * g;
            if (std::isnan(eq) || std::isnan(es)) finite = false;
            report.sup_q = std::max(report.sup_q, eq);
            report.sup_s = std::max(report.sup_s, es);
        }
    }
    report.q_pass = finite && report.sup_q <= report.q_constant + kCheckSlack;
    report.s_pass = finite && report.sup_s <= report.s_constant + kCheckSlack;
    return report;
}

BetaSelection select_beta(double epsilon, PowerRule rule) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("noise level must lie in (0, 1)");
    if (!(rule.power > 0.0 && rule.power <= 1.0)) {
        std::ostringstream msg;
        msg << "beta rule power " << rule.power << " is outside (0, 1]";
        throw AdmissibilityError(msg.str());
    }
    BetaSelection sel;
    sel.epsilon = epsilon;
    sel.power = rule.power;
    sel.beta = std::pow(epsilon, rule.power);
    // gamma(T, beta) = 1/beta for beta^{-t/T}, independent of T.
    sel.gamma_inv_T = sel.beta;
    sel.gammaT_times_eps = epsilon / sel.beta;
    sel.limit_K = rule.power == 1.0 ? 1.0 : 0.0;
    return sel;
}

BetaSelection assess_beta(double epsilon, double beta) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("noise level must lie in (0, 1)");
    if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
    const double power = std::log(beta) / std::log(epsilon);
    if (power > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "beta = eps^" << power << ": gamma(T, beta) eps = eps^" << 1.0 - power
            << " diverges as eps -> 0 (admissibility requires a finite limit)";
        throw AdmissibilityError(msg.str());
    }
    if (!(power > 0.0)) {
        std::ostringstream msg;
        msg << "beta = eps^" << power << ": gamma(T, beta)^-1 does not vanish as eps -> 0";
        throw AdmissibilityError(msg.str());
    }
    BetaSelection sel;
    sel.epsilon = epsilon;
    sel.beta = beta;
    sel.power = std::min(power, 1.0);
    sel.gamma_inv_T = beta;
    sel.gammaT_times_eps = epsilon / beta;
    sel.limit_K = sel.power == 1.0 ? 1.0 : 0.0;
    return sel;
}

}  // namespace illposed
