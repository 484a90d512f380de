#pragma once

// Exact solution-operator multipliers Q(t, lambda) and S(t, lambda) of the
// mild-solution equation
//
//   u(t) = Q(t,A) u0 + integral_0^t S(t - tau, A) f(tau, u(tau)) dtau
//
// for three evolution problems. All are unbounded in lambda except the
// damped wave family.

#include "illposed/spectral.hpp"

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace illposed {

enum class FamilyKind {
    backward_parabolic,  // u' = A u + f
    elliptic_cauchy,     // u'' = A u + f, u'(0) = 0
    damped_wave,         // u'' + A (u + u') = f, u'(0) = 0
};

enum class Which { Q, S };

[[nodiscard]] std::string_view to_string(FamilyKind kind) noexcept;
[[nodiscard]] std::string_view to_string(Which which) noexcept;

/// Lower and upper envelope constants: C1 e^{t rho} <= Q <= C2 e^{t rho}.
struct BorelConstants {
    double lower = 1.0;
    double upper = 1.0;
};

class PropagatorFamily {
public:
    explicit PropagatorFamily(FamilyKind kind) noexcept : kind_(kind) {}

    [[nodiscard]] FamilyKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::string_view name() const noexcept { return to_string(kind_); }

    [[nodiscard]] double q(double t, double lambda) const;
    [[nodiscard]] double s(double t, double lambda) const;
    [[nodiscard]] double multiplier(Which which, double t, double lambda) const;

    /// multiplier(t, lambda) * exp(-shift * rho(lambda)), evaluated without
    /// forming the (possibly overflowing) unscaled multiplier.
    [[nodiscard]] double scaled(Which which, double t, double lambda, double shift) const;

    /// Spectral growth rate rho: lambda for parabolic, sqrt(lambda) for
    /// elliptic, 0 for the (decaying) damped wave.
    [[nodiscard]] double growth_rate(double lambda) const noexcept;

    /// lambda with rho(lambda) = r; only defined for the growing families.
    [[nodiscard]] double growth_inverse(double r) const;

    [[nodiscard]] BorelConstants borel_constants() const noexcept;

    /// Extra factor in the upper envelope of S at time t:
    /// |S(t, lambda)| <= C2 * s_envelope(t) * e^{t rho(lambda)}.
    [[nodiscard]] double s_envelope(double t) const noexcept;

    friend bool operator==(const PropagatorFamily&, const PropagatorFamily&) = default;

private:
    FamilyKind kind_;
};

[[nodiscard]] PropagatorFamily backward_parabolic_family() noexcept;
[[nodiscard]] PropagatorFamily elliptic_cauchy_family() noexcept;
[[nodiscard]] PropagatorFamily damped_wave_family() noexcept;

/// Looks up a family by its name ("backward_parabolic", ...).
[[nodiscard]] PropagatorFamily family_from_name(std::string_view name);

/// Per-mode product multiplier(t, lambda_k) * c_k. Throws RangeError naming
/// the mode when the multiplier overflows.
[[nodiscard]] CoefficientVector apply_propagator(const PropagatorFamily& family, Which which, double t,
                                                 const CoefficientVector& v, const SpectrumModel& spectrum);

/// Smoothness-space norm using the family's growth rate.
[[nodiscard]] double wtilde_norm(const CoefficientVector& v, double horizon, const PropagatorFamily& family,
                                 const SpectrumModel& spectrum);

struct TimeLambda {
    double t = 0.0;
    double lambda = 1.0;
};

struct BorelReport {
    bool skipped = false;           // damped wave: no growth envelope
    double q_min_ratio = 0.0;       // min over samples of Q / e^{t rho}
    double q_max_ratio = 0.0;
    double s_min_ratio = 0.0;       // same for S, divided by s_envelope(t)
    double s_max_ratio = 0.0;
    bool q_pass = true;             // C1 <= ratio <= C2
    bool s_upper_pass = true;       // ratio <= C2
    bool s_lower_pass = true;       // ratio >= C1 (not required)

    [[nodiscard]] bool pass() const noexcept { return q_pass && s_upper_pass; }
};

/// Checks the growth envelope of Q two-sidedly and of S from above, with
/// tolerance 1e-9.
[[nodiscard]] BorelReport borel_bound_check(const PropagatorFamily& family, std::span<const TimeLambda> samples);

}  // namespace illposed
