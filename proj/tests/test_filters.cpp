#include "illposed/errors.hpp"
#include "illposed/filters.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace illposed;

TEST_CASE("gamma evaluation") {
    const GammaFunction gamma(1.0);
    CHECK(gamma(0.0, 0.1) == 1.0);
    CHECK(gamma_eval(gamma, 1.0, 0.1) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(gamma(0.5, 0.01) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(gamma.inverse(0.5, 0.01) == doctest::Approx(0.1).epsilon(1e-15));

    const GammaFunction half(2.0);
    CHECK(half(1.0, 0.01) == doctest::Approx(10.0).epsilon(1e-15));

    CHECK_THROWS_AS((void)gamma(-0.1, 0.5), InvalidArgument);
    CHECK_THROWS_AS((void)gamma(1.1, 0.5), InvalidArgument);
    CHECK_THROWS_AS((void)gamma(0.5, 0.0), InvalidArgument);
    CHECK_THROWS_AS((void)gamma(0.5, -1.0), InvalidArgument);
    CHECK_THROWS_AS(GammaFunction(0.0), InvalidArgument);
}

TEST_CASE("gamma property check") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<GammaSample> samples;
    for (int i = 0; i < 200; ++i) samples.push_back({u(rng), u(rng), u(rng), std::pow(10.0, -8.0 * u(rng))});

    const auto good = gamma_property_check(GammaFunction(1.0), samples);
    CHECK(good.pass());
    CHECK(good.product_samples > 0);

    SUBCASE("a broken evaluator fails the product rule") {
        const GammaFunction broken(1.0, [](double t, double beta) { return 1.0 + t / beta; });
        const auto bad = gamma_property_check(broken, samples);
        CHECK(bad.identity_at_zero);
        CHECK_FALSE(bad.product_rule);
        CHECK_FALSE(bad.pass());
    }
    SUBCASE("equal times recover the identity") {
        const std::vector<GammaSample> same{{0.3, 0.4, 0.4, 0.2}};
        const auto r = gamma_property_check(GammaFunction(1.0), same);
        CHECK(r.quotient_rule);
        CHECK(r.worst_quotient_error == 0.0);
    }
    SUBCASE("a bounded evaluator fails unboundedness") {
        const GammaFunction flat(1.0, [](double, double) { return 1.0; });
        CHECK_FALSE(gamma_property_check(flat, samples).unbounded_as_beta_vanishes);
    }
}

TEST_CASE("cutoff filter") {
    const auto fam = backward_parabolic_family();
    const auto scheme = cutoff_filter(fam, std::exp(-4.0), 1.0);
    CHECK(scheme.q(0.5, 3.0) == doctest::Approx(4.4816890703380645).epsilon(1e-14));
    CHECK(scheme.q(0.5, 5.0) == 0.0);
    CHECK(scheme.s(0.5, 5.0) == 0.0);
    CHECK(scheme.q(0.0, 2.0) == 1.0);
    CHECK(scheme.m1() == 1.0);
    CHECK(scheme.m2() == 1.0);
    CHECK(scheme.kind() == FilterKind::cutoff);
    CHECK(cutoff_eigenvalue(fam, std::exp(-4.0), 1.0) == doctest::Approx(4.0).epsilon(1e-15));

    CHECK_THROWS_AS((void)cutoff_filter(fam, 1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS((void)cutoff_filter(fam, 0.0, 1.0), InvalidArgument);

    SUBCASE("elliptic constants") {
        const auto ell = cutoff_filter(elliptic_cauchy_family(), 0.01, 2.0);
        CHECK(ell.m1() == 1.0);
        CHECK(ell.m2() == 2.0);
        CHECK(cutoff_eigenvalue(elliptic_cauchy_family(), 0.01, 2.0) ==
              doctest::Approx(std::pow(std::log(100.0) / 2.0, 2)).epsilon(1e-14));
    }
}

TEST_CASE("quasi-boundary filter") {
    const auto fam = backward_parabolic_family();
    const auto scheme = quasi_boundary_filter(fam, 0.1, 1.0);
    CHECK(scheme.q(1.0, std::log(100.0)) == doctest::Approx(100.0 / 11.0).epsilon(1e-13));
    CHECK(scheme.q(1.0, std::log(100.0)) <= scheme.gamma()(1.0, 0.1));
    CHECK(scheme.q(0.0, 1e-14) == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
    // consistency as beta vanishes
    double previous = INFINITY;
    for (int j = 1; j <= 8; ++j) {
        const auto s = quasi_boundary_filter(fam, std::pow(10.0, -j), 1.0);
        const double gap = std::abs(s.q(0.4, 2.0) - fam.q(0.4, 2.0));
        CHECK(gap < previous);
        previous = gap;
    }
    CHECK(previous < 1e-6);
    // huge lambda: no overflow
    CHECK(scheme.q(0.5, 1e6) == 0.0);
    CHECK(std::isfinite(scheme.q(1.0, 800.0)));
}

TEST_CASE("Definition-1 validators on the built-in filters") {
    for (double beta : {1e-1, 1e-2, 1e-3, 1e-4}) {
        for (FilterKind kind : {FilterKind::cutoff, FilterKind::quasi_boundary}) {
            const auto scheme = make_filter(kind, backward_parabolic_family(), beta, 1.0);
            const auto samples = default_filter_samples(scheme);
            CHECK(samples.times.size() == 64);
            const auto bound = filter_bound_check(scheme, samples);
            const auto error = filter_error_check(scheme, samples);
            CHECK(bound.pass());
            CHECK(error.pass());
            CHECK(bound.sup_q_ratio <= 1.0 + 1e-9);
            CHECK(error.sup_q <= 1.0 + 1e-9);
        }
    }
    SUBCASE("cutoff error is attained at the cutoff") {
        const auto scheme = cutoff_filter(backward_parabolic_family(), 1e-2, 1.0);
        const auto error = filter_error_check(scheme, default_filter_samples(scheme));
        CHECK(error.sup_q == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("an unfiltered multiplier fails the bound check") {
        const auto fam = backward_parabolic_family();
        const FilterScheme raw(
            fam, 0.01, GammaFunction(1.0), [fam](double t, double l) { return fam.q(t, l); },
            [fam](double t, double l) { return fam.s(t, l); }, {1.0, 1.0}, FilterKind::custom);
        CHECK_FALSE(filter_bound_check(raw, default_filter_samples(raw)).pass());
    }
    SUBCASE("elliptic filters") {
        for (FilterKind kind : {FilterKind::cutoff, FilterKind::quasi_boundary}) {
            const auto scheme = make_filter(kind, elliptic_cauchy_family(), 1e-3, 1.0);
            const auto samples = default_filter_samples(scheme, std::vector<double>{1.0, 4.0, 9.0});
            CHECK(filter_bound_check(scheme, samples).pass());
            CHECK(filter_error_check(scheme, samples).pass());
        }
    }
}

TEST_CASE("cutoff monotonicity in beta") {
    const auto fam = backward_parabolic_family();
    for (double lambda = 0.5; lambda < 40.0; lambda *= 1.3) {
        bool kept_before = false;
        for (int j = 1; j <= 8; ++j) {
            const auto scheme = cutoff_filter(fam, std::pow(10.0, -j), 1.0);
            const bool kept = scheme.q(0.5, lambda) != 0.0;
            if (kept_before) CHECK(kept);
            kept_before = kept;
        }
    }
}

TEST_CASE("beta selection") {
    const auto a = select_beta(1e-3, PowerRule{1.0});
    CHECK(a.beta == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(a.gammaT_times_eps == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a.gamma_inv_T == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(a.limit_K == 1.0);

    const auto b = select_beta(1e-4, PowerRule{0.5});
    CHECK(b.beta == doctest::Approx(1e-2).epsilon(1e-14));
    CHECK(b.gammaT_times_eps == doctest::Approx(1e-2).epsilon(1e-14));
    CHECK(b.limit_K == 0.0);

    CHECK_THROWS_AS((void)select_beta(1e-3, PowerRule{2.0}), AdmissibilityError);
    CHECK_THROWS_AS((void)select_beta(1e-3, PowerRule{0.0}), AdmissibilityError);
    CHECK_THROWS_AS((void)select_beta(1.5, PowerRule{1.0}), InvalidArgument);

    CHECK_THROWS_AS((void)assess_beta(1e-3, 1e-6), AdmissibilityError);
    CHECK_THROWS_AS((void)assess_beta(1e-3, 1.0), AdmissibilityError);
    const auto c = assess_beta(1e-4, 1e-2);
    CHECK(c.power == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("filter names") {
    CHECK(filter_kind_from_name("cutoff") == FilterKind::cutoff);
    CHECK(filter_kind_from_name("quasi_boundary") == FilterKind::quasi_boundary);
    CHECK_THROWS_AS((void)filter_kind_from_name("tikhonov"), InvalidArgument);
    CHECK(to_string(FilterKind::quasi_boundary) == "quasi_boundary");
    CHECK_THROWS_AS((void)make_filter(FilterKind::custom, backward_parabolic_family(), 0.1, 1.0), InvalidArgument);
}
