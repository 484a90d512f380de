#include "illposed/errors.hpp"
#include "illposed/propagators.hpp"
#include "illposed/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace illposed;

namespace {

CoefficientVector random_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    CoefficientVector v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = normal(rng);
    return v;
}

double parabolic_rate(double lambda) { return lambda; }

}  // namespace

TEST_CASE("coefficient vectors reject non-finite entries") {
    CHECK_THROWS_AS(CoefficientVector({1.0, NAN}), InvalidArgument);
    CHECK_THROWS_AS(CoefficientVector(std::vector<double>{INFINITY}), InvalidArgument);
    CHECK_THROWS_AS((void)(CoefficientVector({1.0}) + CoefficientVector({1.0, 2.0})), InvalidArgument);
}

TEST_CASE("h_norm") {
    CHECK(h_norm(CoefficientVector(4)) == 0.0);
    CHECK(h_norm(CoefficientVector{1.0}) == 1.0);
    CHECK(h_norm(CoefficientVector{3.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-15));
    // no overflow for large entries
    CHECK(h_norm(CoefficientVector{3e200, 4e200}) == doctest::Approx(5e200).epsilon(1e-15));
}

TEST_CASE("wtilde_norm") {
    const std::vector<double> one{1.0};
    CHECK(wtilde_norm(CoefficientVector(1), one, 1.0, parabolic_rate) == 0.0);
    CHECK(wtilde_norm(CoefficientVector{1.0}, one, 1.0, parabolic_rate) ==
          doctest::Approx(2.718281828459045).epsilon(1e-14));

    const std::vector<double> two{1.0, 4.0};
    const double expected = std::sqrt(std::exp(1.0) + std::exp(4.0));
    CHECK(wtilde_norm(CoefficientVector{1.0, 1.0}, two, 0.5, parabolic_rate) ==
          doctest::Approx(expected).epsilon(1e-14));

    SUBCASE("overflow names the mode") {
        const std::vector<double> big{1.0, 1000.0};
        try {
            (void)wtilde_norm(CoefficientVector{1.0, 1.0}, big, 1.0, parabolic_rate);
            FAIL("expected a range error");
        } catch (const RangeError& e) {
            CHECK(std::string(e.what()).find("mode 2") != std::string::npos);
        }
    }
    SUBCASE("family overload uses the growth rate") {
        const auto spectrum = dirichlet_laplacian_1d(2, 4);
        const CoefficientVector v{1.0, 1.0};
        const double elliptic = std::sqrt(std::exp(2.0 * 1.0) + std::exp(2.0 * 2.0));
        CHECK(wtilde_norm(v, 1.0, elliptic_cauchy_family(), spectrum) == doctest::Approx(elliptic).epsilon(1e-14));
        CHECK(wtilde_norm(v, 1.0, damped_wave_family(), spectrum) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    }
}

TEST_CASE("dirichlet_laplacian_1d") {
    const auto s3 = dirichlet_laplacian_1d(3, 8);
    REQUIRE(s3.mode_count() == 3);
    CHECK(s3.eigenvalue(0) == 1.0);
    CHECK(s3.eigenvalue(1) == 4.0);
    CHECK(s3.eigenvalue(2) == 9.0);
    CHECK(s3.grid_size() == 8);

    const auto s1 = dirichlet_laplacian_1d(1, 1);
    REQUIRE(s1.grid_size() == 1);
    CHECK(s1.basis().nodes[0] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));

    CHECK_THROWS_AS((void)dirichlet_laplacian_1d(5, 4), InvalidArgument);
    CHECK_THROWS_AS((void)dirichlet_laplacian_1d(0, 4), InvalidArgument);
}

TEST_CASE("spectrum invariants are enforced") {
    CHECK_THROWS_AS(SpectrumModel(std::vector<double>{}), InvalidArgument);
    CHECK_THROWS_AS(SpectrumModel(std::vector<double>{0.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(SpectrumModel(std::vector<double>{2.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(SpectrumModel(std::vector<double>{1.0, 1.0}), InvalidArgument);

    // a non-orthonormal table is rejected
    const std::vector<double> nodes{0.5, 1.0};
    CHECK_THROWS_AS(SpectrumModel({1.0, 2.0}, nodes, 1.0, [](std::size_t, std::size_t) { return 1.0; }),
                    InvalidArgument);
}

TEST_CASE("synthesize and analyze") {
    const auto spectrum = dirichlet_laplacian_1d(3, 16);
    const auto& nodes = spectrum.basis().nodes;
    const double c = std::sqrt(2.0 / std::numbers::pi);

    CHECK(synthesize(CoefficientVector(3), spectrum).values == std::vector<double>(16, 0.0));

    const auto g1 = synthesize(CoefficientVector{1.0, 0.0, 0.0}, spectrum);
    for (std::size_t j = 0; j < nodes.size(); ++j) CHECK(g1.values[j] == doctest::Approx(c * std::sin(nodes[j])));

    const auto g12 = synthesize(CoefficientVector{1.0, 1.0, 0.0}, spectrum);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        CHECK(g12.values[j] == doctest::Approx(c * (std::sin(nodes[j]) + std::sin(2 * nodes[j]))).epsilon(1e-13));
    }

    GridFunction sin2;
    for (double x : nodes) sin2.values.push_back(c * std::sin(2 * x));
    const auto coeffs = analyze(sin2, spectrum);
    CHECK(coeffs[0] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(std::abs(coeffs[0]) < 1e-13);
    CHECK(coeffs[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(coeffs[2]) < 1e-13);

    SUBCASE("cube of the first mode") {
        // sin^3 x = (3 sin x - sin 3x) / 4, so (a c sin x)^3 has
        // coefficients a^3 c^2 (3/4, 0, -1/4) in the orthonormal basis.
        const double a = 0.7;
        GridFunction cube;
        for (double x : nodes) cube.values.push_back(std::pow(a * c * std::sin(x), 3));
        const auto k = analyze(cube, spectrum);
        const double scale = a * a * a * c * c;
        CHECK(k[0] == doctest::Approx(0.75 * scale).epsilon(1e-13));
        CHECK(std::abs(k[1]) < 1e-14);
        CHECK(k[2] == doctest::Approx(-0.25 * scale).epsilon(1e-13));
        CHECK(k[0] / k[2] == doctest::Approx(-3.0).epsilon(1e-12));
    }
    SUBCASE("abstract spectrum has no grid") {
        const SpectrumModel abstract(std::vector<double>{1.0, 2.0});
        CHECK_THROWS_AS((void)synthesize(CoefficientVector{1.0, 0.0}, abstract), InvalidArgument);
        CHECK_THROWS_AS((void)analyze(GridFunction{{1.0}}, abstract), InvalidArgument);
    }
}

TEST_CASE("round trip on K=2, N=8") {
    const auto spectrum = dirichlet_laplacian_1d(2, 8);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto v = random_vector(2, rng);
        const auto back = analyze(synthesize(v, spectrum), spectrum);
        CHECK(h_norm(back - v) <= 1e-12 * h_norm(v));
    }
}

TEST_CASE("sup norm constant bounds grid values") {
    const auto spectrum = dirichlet_laplacian_1d(6, 24);
    const double kappa = spectrum.sup_norm_constant();
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        const auto v = random_vector(6, rng);
        const auto g = synthesize(v, spectrum);
        double sup = 0.0;
        for (double x : g.values) sup = std::max(sup, std::abs(x));
        CHECK(sup <= kappa * h_norm(v) * (1 + 1e-12));
    }
}
