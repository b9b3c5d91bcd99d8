#include <doctest.h>

#include <cmath>
#include <vector>

#include "boc/thresholds.hpp"
#include "support.hpp"

using namespace boc;

TEST_SUITE("thresholds") {

TEST_CASE("riemann_zeta") {
    CHECK(riemann_zeta(2.0) == doctest::Approx(1.6449340668482264).epsilon(1e-12));  // pi^2/6
    // reference values from a 1e7-term high-precision series, computed once
    CHECK(riemann_zeta(1.5) == doctest::Approx(2.6123753486854883).epsilon(1e-12));
    CHECK(riemann_zeta(1.2) == doctest::Approx(5.5915824411777508).epsilon(1e-12));
    const double near_pole = riemann_zeta(1.0001);
    CHECK(near_pole > 1e3);
    CHECK(std::isfinite(near_pole));
    CHECK_THROWS_AS(riemann_zeta(1.0), std::invalid_argument);
    CHECK_THROWS_AS(riemann_zeta(0.5), std::invalid_argument);
}

TEST_CASE("psi basic properties") {
    for (double x : {0.1, 1.0, 10.0, 100.0, 1e4}) CHECK(psi(x) >= x);
    // large-x expansion of the minimum: x + log(x)/2 + 0.5717 + o(1)
    CHECK(psi(1e4) - 1e4 == doctest::Approx(0.5 * std::log(1e4) + 0.5717).epsilon(1e-3));
    CHECK(psi(1e4) <= 1e4 + std::log(1e4));  // one-sided comparison against x + log x
    CHECK_THROWS_AS(psi(0.0), std::invalid_argument);
    CHECK_THROWS_AS(psi(-1.0), std::invalid_argument);
}

TEST_CASE("psi against the dense-grid oracle") {
    // regression values pinned from this implementation's first verified run,
    // cross-checked here against a staged 1e-7-resolution grid
    const double grid = boc_test::grid_psi(1.0, riemann_zeta);
    CHECK(psi(1.0) == doctest::Approx(grid).epsilon(1e-8));
    CHECK(psi(1.0) == doctest::Approx(2.5070945465805812).epsilon(1e-9));
    CHECK(psi(1e4) == doctest::Approx(10005.177309642999).epsilon(1e-9));

    for (double x : {0.25, 5.0, 50.0})
        CHECK(psi(x) == doctest::Approx(boc_test::grid_psi(x, riemann_zeta)).epsilon(1e-8));
}

TEST_CASE("psi is insensitive to the search tolerance") {
    // golden-section at width 1e-10 already sits on the minimum: perturbing h
    // by +-1e-6 around the found value never drops below psi(x) - 1e-8
    for (double x : {0.3, 1.0, 20.0}) {
        const double value = psi(x);
        const double grid = boc_test::grid_psi(x, riemann_zeta, 1e-6);
        CHECK(value <= grid + 1e-8);
        CHECK(value >= grid - 1e-6);
    }
}

TEST_CASE("beta_exact") {
    std::vector<long long> ones(5, 1);
    // with all counts 1 the sum term collapses to M * 2d * log 4
    const int d = 3;
    const double expected_sum = 5 * 2.0 * d * std::log(4.0);
    const double md = 5.0 * d;
    CHECK(beta_exact(0.1, ones, d) ==
          doctest::Approx(expected_sum + md * psi(std::log(10.0) / md)).epsilon(1e-12));

    SUBCASE("monotone in every count") {
        std::vector<long long> counts{3, 1, 4, 1, 5};
        const double base = beta_exact(0.1, counts, d);
        for (std::size_t m = 0; m < counts.size(); ++m) {
            auto bumped = counts;
            ++bumped[m];
            CHECK(beta_exact(0.1, bumped, d) >= base);
        }
    }
    SUBCASE("beta >= log(1/delta)") {
        std::vector<long long> counts{2, 7, 9};
        for (double delta : {0.5, 0.1, 1e-4, 1e-12})
            CHECK(beta_exact(delta, counts, 2) >= std::log(1.0 / delta));
    }
    SUBCASE("uniform counts agree with the direct formula") {
        const long long t = 17;
        std::vector<long long> counts(8, t);
        const double direct = 8 * 2.0 * d * std::log(4.0 + std::log(static_cast<double>(t))) +
                              8.0 * d * psi(std::log(1.0 / 0.05) / (8.0 * d));
        CHECK(beta_exact(0.05, counts, d) == doctest::Approx(direct).epsilon(1e-9));
    }
    SUBCASE("errors") {
        std::vector<long long> with_zero{1, 0, 2};
        CHECK_THROWS_AS(beta_exact(0.1, with_zero, 1), std::invalid_argument);
        std::vector<long long> counts{1, 1};
        CHECK_THROWS_AS(beta_exact(0.0, counts, 1), std::invalid_argument);
        CHECK_THROWS_AS(beta_exact(1.0, counts, 1), std::invalid_argument);
    }
}

TEST_CASE("beta_heuristic") {
    CHECK(beta_heuristic(0.1, 1, 3) == doctest::Approx(std::log(10.0)).epsilon(1e-12));
    // t = e: log t = 1, so the value is log(2/delta) at d = 1
    const long long t_e = 3;  // smallest integer above e; use the formula directly instead
    (void)t_e;
    CHECK(beta_heuristic(0.1, 3, 1) ==
          doctest::Approx(std::log(1.0 + std::log(3.0)) + std::log(10.0)).epsilon(1e-12));
    double prev = 0.0;
    for (long long t = 1; t < 100; t += 7) {
        const double value = beta_heuristic(0.2, t, 2);
        CHECK(value >= prev);
        prev = value;
    }
    CHECK_THROWS_AS(beta_heuristic(0.1, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(beta_heuristic(2.0, 5, 1), std::invalid_argument);
}

TEST_CASE("binary_kl") {
    CHECK(binary_kl(0.3, 0.3) == doctest::Approx(0.0));
    CHECK(binary_kl(0.1, 0.9) == doctest::Approx(1.7577796618689755).epsilon(1e-12));
    // the (a,b) -> (1-a,1-b) substitution symmetry
    CHECK(binary_kl(0.1, 0.9) == doctest::Approx(binary_kl(0.9, 0.1)).epsilon(1e-12));
    CHECK(binary_kl(0.2, 0.7) > 0.0);
    CHECK_THROWS_AS(binary_kl(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(binary_kl(0.5, 1.0), std::invalid_argument);
}

}  // TEST_SUITE
