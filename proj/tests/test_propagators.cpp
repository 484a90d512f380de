#include "illposed/errors.hpp"
#include "illposed/propagators.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace illposed;

namespace {

// Damped-wave oracle for real distinct roots (lambda > 4), in long double.
std::pair<long double, long double> damped_real_roots(long double t, long double lambda) {
    const long double r = std::sqrt(lambda * lambda - 4.0L * lambda);
    const long double cp = 0.5L * (-lambda + r);
    const long double cm = 0.5L * (-lambda - r);
    const long double q = (cp * std::exp(cm * t) - cm * std::exp(cp * t)) / (cp - cm);
    const long double s = (std::exp(cm * t) - std::exp(cp * t)) / (cm - cp);
    return {q, s};
}

// Same for complex roots (lambda < 4), written with cos/sin of the
// imaginary part w = sqrt(4 lambda - lambda^2) / 2.
std::pair<long double, long double> damped_complex_roots(long double t, long double lambda) {
    const long double m = -0.5L * lambda;
    const long double w = 0.5L * std::sqrt(4.0L * lambda - lambda * lambda);
    const long double e = std::exp(m * t);
    return {e * (std::cos(w * t) - m * std::sin(w * t) / w), e * std::sin(w * t) / w};
}

}  // namespace

TEST_CASE("backward parabolic multipliers") {
    const auto fam = backward_parabolic_family();
    CHECK(fam.q(0.0, 7.0) == 1.0);
    CHECK(fam.q(1.0, 1.0) == doctest::Approx(2.718281828459045).epsilon(1e-15));
    CHECK(fam.s(1.0, 1.0) == fam.q(1.0, 1.0));
    for (double lambda : {0.5, 3.0, 20.0}) {
        CHECK(fam.q(0.3, lambda) * fam.q(0.7, lambda) == doctest::Approx(fam.q(1.0, lambda)).epsilon(1e-12));
    }
    CHECK(fam.growth_rate(5.0) == 5.0);
    CHECK(fam.growth_inverse(5.0) == 5.0);
    CHECK(fam.borel_constants().lower == 1.0);
    CHECK(fam.borel_constants().upper == 1.0);
}

TEST_CASE("elliptic Cauchy multipliers") {
    const auto fam = elliptic_cauchy_family();
    CHECK(fam.q(0.0, 9.0) == 1.0);
    CHECK(fam.s(0.0, 9.0) == 0.0);
    // cosh(4) from its power series
    long double cosh4 = 0.0L;
    long double term = 1.0L;
    for (int n = 0; n < 60; ++n) {
        cosh4 += term;
        term *= 16.0L / static_cast<long double>((2 * n + 1) * (2 * n + 2));
    }
    CHECK(fam.q(2.0, 4.0) == doctest::Approx(static_cast<double>(cosh4)).epsilon(1e-14));
    CHECK(fam.q(2.0, 4.0) == doctest::Approx(27.3082328).epsilon(1e-8));
    CHECK(fam.s(0.5, 1e-300) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(fam.s(0.5, 1e-12) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fam.growth_rate(9.0) == 3.0);
    CHECK(fam.growth_inverse(3.0) == 9.0);
}

TEST_CASE("elliptic s matches its series across the branch switch") {
    const auto fam = elliptic_cauchy_family();
    for (double t : {0.25, 1.0, 2.0}) {
        for (double x : {1e-10, 1e-9, 5e-9, 9.99e-9, 1.001e-8, 1e-7, 1e-6}) {
            const double lambda = x / (t * t);
            const long double z = static_cast<long double>(t) * t * lambda;
            const long double series = t * (1.0L + z / 6.0L + z * z / 120.0L + z * z * z / 5040.0L);
            CHECK(std::abs(fam.s(t, lambda) - static_cast<double>(series)) <= 1e-12 * t);
        }
    }
}

TEST_CASE("damped wave multipliers") {
    const auto fam = damped_wave_family();
    CHECK(fam.q(0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(fam.s(0.0, 2.0)) < 1e-15);
    CHECK(fam.q(0.0, 9.0) == doctest::Approx(1.0).epsilon(1e-15));

    SUBCASE("confluent point lambda = 4") {
        const double e2 = std::exp(-2.0);
        CHECK(std::abs(fam.q(1.0, 4.0) - 3.0 * e2) < 1e-10);
        CHECK(std::abs(fam.s(1.0, 4.0) - e2) < 1e-10);
        // just off the confluent point, both sides
        for (double lambda : {4.0 - 1e-9, 4.0 + 1e-9, 4.0 - 1e-6, 4.0 + 1e-6}) {
            CHECK(fam.q(1.0, lambda) == doctest::Approx(3.0 * e2).epsilon(1e-5));
        }
    }
    SUBCASE("distinct real roots") {
        const auto [q, s] = damped_real_roots(1.0L, 5.0L);
        CHECK(fam.q(1.0, 5.0) == doctest::Approx(static_cast<double>(q)).epsilon(1e-13));
        CHECK(fam.s(1.0, 5.0) == doctest::Approx(static_cast<double>(s)).epsilon(1e-13));
    }
    SUBCASE("complex roots give real values") {
        for (double lambda : {0.5, 1.0, 2.0, 3.5}) {
            const auto [q, s] = damped_complex_roots(1.3L, lambda);
            CHECK(fam.q(1.3, lambda) == doctest::Approx(static_cast<double>(q)).epsilon(1e-12));
            CHECK(fam.s(1.3, lambda) == doctest::Approx(static_cast<double>(s)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS((void)fam.growth_inverse(1.0), InvalidArgument);
    CHECK(fam.growth_rate(9.0) == 0.0);
}

TEST_CASE("damped wave multipliers solve y'' + lambda (y' + y) = 0") {
    const auto fam = damped_wave_family();
    const double h = 1e-3;
    for (double lambda : {0.7, 3.0, 4.0, 6.0, 12.0}) {
        for (double t : {0.3, 0.8, 1.5}) {
            for (Which which : {Which::Q, Which::S}) {
                const double ym = fam.multiplier(which, t - h, lambda);
                const double y0 = fam.multiplier(which, t, lambda);
                const double yp = fam.multiplier(which, t + h, lambda);
                const double d2 = (yp - 2 * y0 + ym) / (h * h);
                const double d1 = (yp - ym) / (2 * h);
                CHECK(std::abs(d2 + lambda * (d1 + y0)) < 1e-4 * std::max(1.0, lambda));
            }
        }
    }
}

TEST_CASE("family lookup by name") {
    CHECK(family_from_name("backward_parabolic").kind() == FamilyKind::backward_parabolic);
    CHECK(family_from_name("elliptic_cauchy").kind() == FamilyKind::elliptic_cauchy);
    CHECK(family_from_name("damped_wave").kind() == FamilyKind::damped_wave);
    CHECK_THROWS_AS((void)family_from_name("heat"), InvalidArgument);
}

TEST_CASE("apply_propagator") {
    const auto spectrum = dirichlet_laplacian_1d(2, 8);
    const auto fam = backward_parabolic_family();
    const CoefficientVector v{0.3, -1.2};
    CHECK(apply_propagator(fam, Which::Q, 0.0, v, spectrum) == v);

    const auto out = apply_propagator(fam, Which::Q, 1.0, CoefficientVector{1.0, 1.0}, spectrum);
    CHECK(out[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(std::exp(4.0)).epsilon(1e-15));

    const CoefficientVector w{2.0, 0.5};
    const auto lhs = apply_propagator(fam, Which::S, 0.6, 1.5 * v + (-0.25) * w, spectrum);
    const auto rhs = 1.5 * apply_propagator(fam, Which::S, 0.6, v, spectrum) +
                     (-0.25) * apply_propagator(fam, Which::S, 0.6, w, spectrum);
    CHECK(h_norm(lhs - rhs) <= 1e-12 * h_norm(rhs));

    SUBCASE("overflow names the mode") {
        const auto big = dirichlet_laplacian_1d(30, 40);
        CoefficientVector ones(30);
        for (std::size_t k = 0; k < 30; ++k) ones[k] = 1.0;
        try {
            (void)apply_propagator(fam, Which::Q, 1.0, ones, big);
            FAIL("expected a range error");
        } catch (const RangeError& e) {
            CHECK(std::string(e.what()).find("mode 27") != std::string::npos);
        }
    }
}

TEST_CASE("scaled multipliers agree with the plain ones where both are finite") {
    for (const auto& fam : {backward_parabolic_family(), elliptic_cauchy_family(), damped_wave_family()}) {
        for (double t : {0.0, 0.4, 1.0}) {
            for (double lambda : {0.5, 4.0, 30.0}) {
                for (double shift : {0.0, 1.0}) {
                    for (Which which : {Which::Q, Which::S}) {
                        const double expect =
                            fam.multiplier(which, t, lambda) * std::exp(-shift * fam.growth_rate(lambda));
                        CHECK(fam.scaled(which, t, lambda, shift) ==
                              doctest::Approx(expect).epsilon(1e-12).scale(1e-300));
                    }
                }
            }
        }
    }
    // e^{t lambda} itself overflows, the scaled value does not
    const auto fam = backward_parabolic_family();
    CHECK(fam.scaled(Which::Q, 0.9, 1000.0, 1.0) == doctest::Approx(std::exp(-100.0)).epsilon(1e-13));
    CHECK(fam.scaled(Which::Q, 1.0, 2000.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("borel bound check") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ut(0.0, 2.0);
    std::uniform_real_distribution<double> ul(0.0, 5.0);
    std::vector<TimeLambda> samples;
    std::vector<TimeLambda> elliptic_samples;
    for (int i = 0; i < 200; ++i) {
        const double t = ut(rng);
        const double lambda = std::pow(10.0, ul(rng) - 2.0);
        samples.push_back({t, lambda});
        if (t * std::sqrt(lambda) >= 1.0) elliptic_samples.push_back({t, lambda});
    }

    const auto parabolic = borel_bound_check(backward_parabolic_family(), samples);
    CHECK(parabolic.pass());
    CHECK(parabolic.q_min_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(parabolic.q_max_ratio == doctest::Approx(1.0).epsilon(1e-12));

    const auto elliptic = borel_bound_check(elliptic_cauchy_family(), elliptic_samples);
    CHECK(elliptic.pass());
    CHECK(elliptic.q_min_ratio >= 0.5 - 1e-9);
    CHECK(elliptic.q_max_ratio <= 1.0 + 1e-9);

    // S decays by 1/sqrt(lambda) against the envelope: the lower bound fails
    const std::vector<TimeLambda> large{{1.0, 1e4}, {2.0, 1e5}};
    const auto s_large = borel_bound_check(elliptic_cauchy_family(), large);
    CHECK(s_large.pass());
    CHECK_FALSE(s_large.s_lower_pass);

    const auto damped = borel_bound_check(damped_wave_family(), samples);
    CHECK(damped.skipped);

    CHECK_THROWS_AS((void)borel_bound_check(backward_parabolic_family(), {}), InvalidArgument);
}

TEST_CASE("invalid arguments") {
    const auto fam = backward_parabolic_family();
    CHECK_THROWS_AS((void)fam.q(-1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS((void)fam.q(1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS((void)fam.s(NAN, 1.0), InvalidArgument);
}
