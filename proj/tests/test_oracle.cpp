#include <doctest.h>

#include <random>

#include "lseries/oracle.hpp"

using namespace lseries;
using namespace lseries::oracle;

TEST_CASE("best_prefix_error on tiny instances") {
    CoefficientSet lam({{0, 0}, {1, 0}});

    SUBCASE("exactly representable target") {
        auto r = best_prefix_error(lam, {0.5, 0}, {1.875, 0}, 4);
        CHECK(r.best_error == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(r.evaluated_count == 16);
        for (const auto& t : r.best_assignment.terms()) CHECK(t.value == cplx{1, 0});
    }
    SUBCASE("single coefficient, two-case enumeration") {
        // L = 1 exposes only lambda_0 * tau^0, so the reachable values are
        // {0, 1} and the best error against 0.3 is 0.3.
        auto r = best_prefix_error(lam, {0.5, 0}, {0.3, 0}, 1);
        CHECK(r.best_error == doctest::Approx(0.3));
        CHECK(r.evaluated_count == 2);
    }
}

TEST_CASE("meet-in-the-middle equals direct enumeration") {
    CoefficientSet lam({{0, 0}, {1, 0}});
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-1.5, 1.5), up(0.3, 0.9), uphase(0.0, kTwoPi);
    for (int i = 0; i < 50; ++i) {
        cplx tau = std::polar(up(rng), uphase(rng));
        cplx w{u(rng), u(rng)};
        std::uint32_t L = 8 + (i % 9);
        auto d = best_prefix_error_direct(lam, tau, w, L);
        auto m = best_prefix_error_mim(lam, tau, w, L);
        CHECK(std::abs(d.best_error - m.best_error) <= 1e-12);
    }
    // the documented example point
    auto d = best_prefix_error_direct(lam, std::polar(0.6, 0.2 * kTwoPi), {1.0, 0.5}, 16);
    auto m = best_prefix_error_mim(lam, std::polar(0.6, 0.2 * kTwoPi), {1.0, 0.5}, 16);
    CHECK(std::abs(d.best_error - m.best_error) <= 1e-12);
}

TEST_CASE("oracle with a three-element set") {
    CoefficientSet lam({{0, 0}, {1, 0}, {0, 1}});
    auto d = best_prefix_error_direct(lam, {0.4, 0.2}, {0.7, 0.4}, 8);
    auto m = best_prefix_error_mim(lam, {0.4, 0.2}, {0.7, 0.4}, 8);
    CHECK(std::abs(d.best_error - m.best_error) <= 1e-12);
    CHECK(d.evaluated_count == 6561);
    // the reported assignment actually achieves the reported error
    CHECK(std::abs(eval_prefix(d.best_assignment, {0.4, 0.2}) - cplx{0.7, 0.4}) ==
          doctest::Approx(d.best_error).epsilon(1e-12));
}

TEST_CASE("budget guard") {
    CoefficientSet lam({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    CHECK_THROWS_AS(best_prefix_error_direct(lam, {0.5, 0}, {0, 0}, 30), BudgetExceeded);
    CHECK_THROWS_AS(best_prefix_error(lam, {0.5, 0}, {0, 0}, 60), BudgetExceeded);
}

TEST_CASE("net_coverage") {
    Disk d3{{0, 0}, 3.0};
    SUBCASE("empty points cover nothing") { CHECK(net_coverage({}, 1.0, d3) == 0.0); }
    SUBCASE("the grid covers itself") {
        std::vector<cplx> pts;
        for (int i = 0; i < 100; ++i)
            for (int j = 0; j < 100; ++j) {
                cplx g{(2.0 * (i + 0.5) / 100 - 1.0) * 3.0, (2.0 * (j + 0.5) / 100 - 1.0) * 3.0};
                if (std::abs(g) < 3.0) pts.push_back(g);
            }
        CHECK(net_coverage(pts, 1e-9, d3) == 1.0);
    }
    SUBCASE("Gaussian integers at eps just above the covering radius") {
        std::vector<cplx> pts;
        for (int a = -5; a <= 5; ++a)
            for (int b = -5; b <= 5; ++b)
                if (std::abs(cplx(a, b)) < 5.0) pts.push_back({double(a), double(b)});
        CHECK(net_coverage(pts, 0.75, d3) == 1.0);
        CHECK(net_coverage(pts, 0.5, d3) < 1.0);
    }
}
