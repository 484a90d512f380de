#pragma once

// A-priori estimates for the regularized solution. All are evaluated from the
// constants of a FilterScheme; none of them look at a computed solution.

#include "illposed/filters.hpp"
#include "illposed/nonlinearity.hpp"

namespace illposed {

/// exp(M2 L t) M1 gamma(t, beta) ||u0_eps||_H: the growth allowed for the
/// regularized solution at time t.
[[nodiscard]] double stability_bound(const FilterScheme& scheme, double t, double lipschitz, double data_norm);

/// Error bound against the exact solution for a globally Lipschitz f:
///
///   gamma(T-t,beta)^{-1} (M1 gamma(T,beta) eps ||u0||_W + int_0^T ||f(s,u(s))||_W ds) exp(M2 L t).
[[nodiscard]] double theorem1_bound(const FilterScheme& scheme, double t, double epsilon, double lipschitz,
                                    double w_norm_u0, double w_integral_f);

/// The same estimate for a truncated locally Lipschitz f, with exponent
/// rate 2 M2 L(B).
[[nodiscard]] double theorem2_bound(const FilterScheme& scheme, double t, double epsilon, double lipschitz_at_radius,
                                    double w_norm_u0, double w_integral_f);

/// Noise part: ||u_eps - U|| <= exp(M2 L t) M1 gamma(t, beta) ||u0_eps - u0||,
/// where U solves the regularized equation with exact data.
[[nodiscard]] double noise_propagation_bound(const FilterScheme& scheme, double t, double lipschitz,
                                             double data_error);

/// Approximation part: ||U - u|| <= gamma(T-t,beta)^{-1} (||u0||_W + int ||f||_W) exp(M2 L t).
[[nodiscard]] double approximation_bound(const FilterScheme& scheme, double t, double lipschitz, double w_norm_u0,
                                         double w_integral_f);

/// Radius B with 2 M2 L(B) T = theta ln(1/beta), found by bisection on the
/// nondecreasing map L. Throws InvalidArgument when f is globally Lipschitz
/// or L(0) already exceeds the target.
[[nodiscard]] double default_truncation_radius(const Nonlinearity& f, double m2, double horizon, double beta,
                                               double theta = 0.25);

}  // namespace illposed
