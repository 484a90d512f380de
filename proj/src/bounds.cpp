#include "illposed/bounds.hpp"

#include "illposed/errors.hpp"

#include <cmath>
#include <sstream>

namespace illposed {

namespace {

void require_time(const FilterScheme& scheme, double t) {
    if (!(t >= 0.0 && t <= scheme.horizon())) throw InvalidArgument("time outside [0, T]");
}

}  // namespace

double stability_bound(const FilterScheme& scheme, double t, double lipschitz, double data_norm) {
    require_time(scheme, t);
    return std::exp(scheme.m2() * lipschitz * t) * scheme.m1() * scheme.gamma()(t, scheme.beta()) * data_norm;
}

double theorem1_bound(const FilterScheme& scheme, double t, double epsilon, double lipschitz, double w_norm_u0,
                      double w_integral_f) {
    require_time(scheme, t);
    if (!(epsilon > 0.0)) throw InvalidArgument("noise level must be positive");
    const auto& gamma = scheme.gamma();
    const double beta = scheme.beta();
    const double bracket = scheme.m1() * gamma(scheme.horizon(), beta) * epsilon * w_norm_u0 + w_integral_f;
    return gamma.inverse(scheme.horizon() - t, beta) * bracket * std::exp(scheme.m2() * lipschitz * t);
}

double theorem2_bound(const FilterScheme& scheme, double t, double epsilon, double lipschitz_at_radius,
                      double w_norm_u0, double w_integral_f) {
    return theorem1_bound(scheme, t, epsilon, 2.0 * lipschitz_at_radius, w_norm_u0, w_integral_f);
}

double noise_propagation_bound(const FilterScheme& scheme, double t, double lipschitz, double data_error) {
    return stability_bound(scheme, t, lipschitz, data_error);
}

double approximation_bound(const FilterScheme& scheme, double t, double lipschitz, double w_norm_u0,
                           double w_integral_f) {
    require_time(scheme, t);
    return scheme.gamma().inverse(scheme.horizon() - t, scheme.beta()) * (w_norm_u0 + w_integral_f) *
           std::exp(scheme.m2() * lipschitz * t);
}

double default_truncation_radius(const Nonlinearity& f, double m2, double horizon, double beta, double theta) {
    if (f.is_global()) throw InvalidArgument("truncation schedule needs a locally Lipschitz nonlinearity");
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("truncation schedule needs 0 < beta < 1");
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("schedule fraction theta must lie in (0, 1)");
    const double target = theta * std::log(1.0 / beta) / (2.0 * m2 * horizon);  // required L(B)
    auto excess = [&](double radius) { return f.lipschitz_constant(radius) - target; };
    if (excess(0.0) > 0.0) {
        std::ostringstream msg;
        msg << "truncation schedule infeasible: L(0) = " << f.lipschitz_constant(0.0) << " exceeds target " << target;
        throw InvalidArgument(msg.str());
    }
    double lo = 0.0;
    double hi = 1.0;
    while (excess(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return INFINITY;  // L stays below the target: no truncation needed
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace illposed
