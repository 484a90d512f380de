#include "illposed/propagators.hpp"

#include "illposed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

namespace illposed {

namespace {

// Below this value of t^2 lambda the elliptic S multiplier uses its series.
constexpr double kEllipticSeriesThreshold = 1e-8;
// Below this |lambda^2 - 4 lambda| the damped-wave roots are treated as equal.
constexpr double kConfluentThreshold = 1e-10;
// Imaginary residues above this (relative) size mean the evaluation is wrong.
constexpr double kImaginaryResidueLimit = 1e-10;
// Hyperbolic arguments beyond this are assembled from exponentials.
constexpr double kHyperbolicDirectLimit = 20.0;

struct Pair {
    double q;
    double s;
};

double elliptic_s(double t, double lambda) {
    const double mu = std::sqrt(lambda);
    const double x2 = t * t * lambda;
    if (x2 < kEllipticSeriesThreshold) return t * (1.0 + x2 / 6.0);
    return std::sinh(t * mu) / mu;
}

double elliptic_scaled(Which which, double t, double lambda, double shift) {
    const double mu = std::sqrt(lambda);
    const double x = t * mu;
    const double damping = std::exp(-shift * mu);
    if (which == Which::Q) {
        if (x < kHyperbolicDirectLimit) return std::cosh(x) * damping;
        return 0.5 * (std::exp((t - shift) * mu) + std::exp(-(t + shift) * mu));
    }
    if (t * t * lambda < kEllipticSeriesThreshold || x < kHyperbolicDirectLimit) {
        return elliptic_s(t, lambda) * damping;
    }
    return 0.5 * (std::exp((t - shift) * mu) - std::exp(-(t + shift) * mu)) / mu;
}

// Roots chi_pm = m +- d of chi^2 + lambda chi + lambda = 0 with m = -lambda/2,
// d = sqrt(lambda^2 - 4 lambda)/2 (imaginary for 0 < lambda < 4).
Pair damped_wave(double t, double lambda) {
    const double disc = lambda * lambda - 4.0 * lambda;
    const double m = -0.5 * lambda;
    if (std::abs(disc) < kConfluentThreshold) {
        const double e = std::exp(m * t);
        return {e * (1.0 - m * t), t * e};
    }
    // z^2 = d^2 t^2 is real even when d is imaginary.
    const double z2 = 0.25 * disc * t * t;
    if (std::abs(z2) < 1e-6) {
        const double e = std::exp(m * t);
        const double sh = t * (1.0 + z2 / 6.0 + z2 * z2 / 120.0);
        const double ch = 1.0 + z2 / 2.0 + z2 * z2 / 24.0;
        return {e * (ch - m * sh), e * sh};
    }

    using cplx = std::complex<double>;
    const cplx d = 0.5 * std::sqrt(cplx(disc, 0.0));
    const cplx chi_plus = m + d;
    const cplx chi_minus = m - d;
    const cplx e_plus = std::exp(chi_plus * t);
    const cplx e_minus = std::exp(chi_minus * t);
    const cplx q = (chi_plus * e_minus - chi_minus * e_plus) / (chi_plus - chi_minus);
    const cplx s = (e_minus - e_plus) / (chi_minus - chi_plus);

    for (const cplx& value : {q, s}) {
        if (std::abs(value.imag()) > kImaginaryResidueLimit * std::max(1.0, std::abs(value.real()))) {
            std::ostringstream msg;
            msg << "damped-wave multiplier has imaginary residue " << value.imag() << " at t = " << t
                << ", lambda = " << lambda;
            throw NumericalError(msg.str());
        }
    }
    return {q.real(), s.real()};
}

void require_domain(double t, double lambda) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and nonnegative");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("eigenvalue must be positive and finite");
}

}  // namespace

std::string_view to_string(FamilyKind kind) noexcept {
    switch (kind) {
        case FamilyKind::backward_parabolic: return "backward_parabolic";
        case FamilyKind::elliptic_cauchy: return "elliptic_cauchy";
        case FamilyKind::damped_wave: return "damped_wave";
    }
    return "unknown";
}

std::string_view to_string(Which which) noexcept { return which == Which::Q ? "Q" : "S"; }

double PropagatorFamily::q(double t, double lambda) const { return multiplier(Which::Q, t, lambda); }

double PropagatorFamily::s(double t, double lambda) const { return multiplier(Which::S, t, lambda); }

double PropagatorFamily::multiplier(Which which, double t, double lambda) const {
    require_domain(t, lambda);
    switch (kind_) {
        case FamilyKind::backward_parabolic: return std::exp(t * lambda);
        case FamilyKind::elliptic_cauchy:
            return which == Which::Q ? std::cosh(t * std::sqrt(lambda)) : elliptic_s(t, lambda);
        case FamilyKind::damped_wave: {
            const Pair p = damped_wave(t, lambda);
            return which == Which::Q ? p.q : p.s;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double PropagatorFamily::scaled(Which which, double t, double lambda, double shift) const {
    require_domain(t, lambda);
    switch (kind_) {
        case FamilyKind::backward_parabolic: return std::exp((t - shift) * lambda);
        case FamilyKind::elliptic_cauchy: return elliptic_scaled(which, t, lambda, shift);
        case FamilyKind::damped_wave: return multiplier(which, t, lambda);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double PropagatorFamily::growth_rate(double lambda) const noexcept {
    switch (kind_) {
        case FamilyKind::backward_parabolic: return lambda;
        case FamilyKind::elliptic_cauchy: return std::sqrt(lambda);
        case FamilyKind::damped_wave: return 0.0;
    }
    return 0.0;
}

double PropagatorFamily::growth_inverse(double r) const {
    switch (kind_) {
        case FamilyKind::backward_parabolic: return r;
        case FamilyKind::elliptic_cauchy: return r * r;
        case FamilyKind::damped_wave: break;
    }
    throw InvalidArgument("damped_wave multipliers do not grow; growth rate has no inverse");
}

BorelConstants PropagatorFamily::borel_constants() const noexcept {
    switch (kind_) {
        case FamilyKind::backward_parabolic: return {1.0, 1.0};
        case FamilyKind::elliptic_cauchy: return {0.5, 1.0};
        case FamilyKind::damped_wave: return {1.0, 1.0};
    }
    return {};
}

double PropagatorFamily::s_envelope(double t) const noexcept {
    // sinh(t mu)/mu <= t cosh(t mu); the damped-wave S is bounded by t.
    return kind_ == FamilyKind::backward_parabolic ? 1.0 : std::max(1.0, t);
}

PropagatorFamily backward_parabolic_family() noexcept { return PropagatorFamily(FamilyKind::backward_parabolic); }
PropagatorFamily elliptic_cauchy_family() noexcept { return PropagatorFamily(FamilyKind::elliptic_cauchy); }
PropagatorFamily damped_wave_family() noexcept { return PropagatorFamily(FamilyKind::damped_wave); }

PropagatorFamily family_from_name(std::string_view name) {
    for (auto kind : {FamilyKind::backward_parabolic, FamilyKind::elliptic_cauchy, FamilyKind::damped_wave}) {
        if (name == to_string(kind)) return PropagatorFamily(kind);
    }
    throw InvalidArgument("unknown propagator family '" + std::string(name) + "'");
}

CoefficientVector apply_propagator(const PropagatorFamily& family, Which which, double t,
                                   const CoefficientVector& v, const SpectrumModel& spectrum) {
    spectrum.require_aligned(v);
    CoefficientVector out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double lambda = spectrum.eigenvalue(k);
        const double m = family.multiplier(which, t, lambda);
        if (!std::isfinite(m)) {
            std::ostringstream msg;
            msg << "multiplier " << to_string(which) << " of " << family.name() << " overflows at mode " << k + 1
                << " (t = " << t << ", lambda = " << lambda << ")";
            throw RangeError(msg.str());
        }
        out[k] = m * v[k];
    }
    return out;
}

double wtilde_norm(const CoefficientVector& v, double horizon, const PropagatorFamily& family,
                   const SpectrumModel& spectrum) {
    return wtilde_norm(v, spectrum.eigenvalues(), horizon,
                       [&family](double lambda) { return family.growth_rate(lambda); });
}

BorelReport borel_bound_check(const PropagatorFamily& family, std::span<const TimeLambda> samples) {
    if (samples.empty()) throw InvalidArgument("borel_bound_check needs at least one sample");
    BorelReport report;
    if (family.kind() == FamilyKind::damped_wave) {
        report.skipped = true;
        return report;
    }
    constexpr double tol = 1e-9;
    const auto [lower, upper] = family.borel_constants();
    report.q_min_ratio = report.s_min_ratio = std::numeric_limits<double>::infinity();
    report.q_max_ratio = report.s_max_ratio = -std::numeric_limits<double>::infinity();
    for (const auto& [t, lambda] : samples) {
        const double rq = family.scaled(Which::Q, t, lambda, t);
        const double rs = family.scaled(Which::S, t, lambda, t) / family.s_envelope(t);
        report.q_min_ratio = std::min(report.q_min_ratio, rq);
        report.q_max_ratio = std::max(report.q_max_ratio, rq);
        report.s_min_ratio = std::min(report.s_min_ratio, rs);
        report.s_max_ratio = std::max(report.s_max_ratio, rs);
    }
    report.q_pass = report.q_min_ratio >= lower - tol && report.q_max_ratio <= upper + tol;
    report.s_upper_pass = report.s_max_ratio <= upper + tol;
    report.s_lower_pass = report.s_min_ratio >= lower - tol;
    return report;
}

}  // namespace illposed
