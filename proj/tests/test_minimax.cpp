#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "vfplan/errors.hpp"
#include "vfplan/minimax.hpp"

using namespace vfplan;

namespace {
constexpr double kPi = oracles::kPi;
const double kHalfInvPi2 = 1.0 / (2.0 * kPi * kPi);
}  // namespace

TEST_CASE("minimax error: direct substitutions") {
    CHECK(minimax_error_single({1.0, {1.0}}, {{1.0}}) == doctest::Approx(kHalfInvPi2).epsilon(1e-14));
    CHECK(minimax_error_single({1.0, {1.0, 2.0}}, {{1.0, 1.0}}) ==
          doctest::Approx(kHalfInvPi2).epsilon(1e-14));
    CHECK(minimax_error_single({10.0, {1.0}}, {{0.1}}) ==
          doctest::Approx(10.0 * 0.01 * kHalfInvPi2).epsilon(1e-14));
}

TEST_CASE("minimax error: invariant under joint scaling of lambda and h") {
    const SmoothnessClass cls{2.5, {1.0, 3.0}};
    const double base = minimax_error_single(cls, {{0.4, 0.9}});
    for (double c : {0.3, 2.0, 17.0}) {
        const SmoothnessClass scaled{2.5, {c * 1.0, c * 3.0}};
        CHECK(minimax_error_single(scaled, {{c * 0.4, c * 0.9}}) ==
              doctest::Approx(base).epsilon(1e-13));
    }
}

TEST_CASE("minimax kernel") {
    CHECK(minimax_kernel_eval(std::vector<double>{0.0}, {{1.0}}) == 1.0);
    CHECK(minimax_kernel_eval(std::vector<double>{1.0}, {{1.0}}) == 0.0);
    CHECK(minimax_kernel_eval(std::vector<double>{0.3, 0.4}, {{1.0, 1.0}}) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(minimax_kernel_eval(std::vector<double>{5.0, 0.1}, {{1.0, 1.0}}) == 0.0);
    for (double w = -2.0; w < 2.0; w += 0.17) {
        const double k = minimax_kernel_eval(std::vector<double>{w}, {{0.7}});
        CHECK(k >= 0.0);
        CHECK(k <= 1.0);
    }
}

TEST_CASE("kernel bound: worked points") {
    SUBCASE("origin") {
        const auto [lhs, rhs] = verify_kernel_bound(std::vector<double>{0.0}, {{1.0}});
        CHECK(lhs == 0.0);
        CHECK(rhs == 0.0);
    }
    SUBCASE("half point in 1-d is tight") {
        const auto [lhs, rhs] = verify_kernel_bound(std::vector<double>{0.5}, {{1.0}});
        CHECK(lhs == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(rhs == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("diagonal point in 2-d against hand enumeration") {
        const auto [lhs, rhs] = verify_kernel_bound(std::vector<double>{0.3, 0.3}, {{1.0, 1.0}});
        // translates from {-1, 0}^2 \ {0}: (-0.7, 0.3), (0.3, -0.7), (-0.7, -0.7)
        const double n0 = std::sqrt(0.18);
        const double na = std::sqrt(0.49 + 0.09);
        const double nc = std::sqrt(0.98);
        double expect = (1.0 - (1.0 - n0)) * (1.0 - (1.0 - n0));
        expect += 2.0 * (1.0 - na) * (1.0 - na) + (1.0 - nc) * (1.0 - nc);
        CHECK(lhs == doctest::Approx(expect).epsilon(1e-13));
        CHECK(rhs == doctest::Approx(0.36).epsilon(1e-13));
        CHECK(lhs <= rhs);
    }
}

TEST_CASE("kernel bound holds on quasi-random points in d = 1, 2, 3") {
    for (int d = 1; d <= 3; ++d) {
        oracles::QuasiRandom q(d);
        GridSpec grid{std::vector<double>(d, 1.0)};
        for (int i = 0; i < 1000; ++i) {
            auto u = q.next();
            for (double& x : u) x = 4.0 * x - 2.0;
            const auto [lhs, rhs] = verify_kernel_bound(u, grid);
            CHECK(lhs <= rhs + 1e-12);
        }
    }
}

TEST_CASE("kernel bound respects grid normalisation") {
    const auto a = verify_kernel_bound(std::vector<double>{0.5}, {{1.0}});
    const auto b = verify_kernel_bound(std::vector<double>{2.0}, {{0.25}});
    CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-14));
    CHECK(a.rhs == doctest::Approx(b.rhs).epsilon(1e-14));
}

TEST_CASE("spiky witness: axis selection breaks ties to the lowest index") {
    CHECK(spiky_axis({1.0, {1.0, 1.0}}, {{0.5, 0.5}}) == 0);
    CHECK(spiky_axis({1.0, {1.0, 2.0}}, {{0.5, 0.5}}) == 0);
    CHECK(spiky_axis({1.0, {2.0, 1.0}}, {{0.5, 0.5}}) == 1);
}

TEST_CASE("spiky lower bound approaches the minimax error") {
    QuadratureConfig cfg;
    const SmoothnessClass cls{1.0, {1.0}};
    const GridSpec grid{{1.0}};
    const double target = minimax_error_single(cls, grid);

    const double v = spiky_lower_bound(make_spiky(cls, grid, 1e-3), grid, cfg);
    CHECK(std::abs(v - target) / target <= 0.02);
    CHECK(v <= target);

    SUBCASE("halving epsilon shrinks the gap") {
        const double v2 = spiky_lower_bound(make_spiky(cls, grid, 5e-4), grid, cfg);
        CHECK(target - v2 <= target - v);
        CHECK(target - v2 >= 0.0);
    }
    SUBCASE("linear in L") {
        const SmoothnessClass cls10{10.0, {1.0}};
        const double v10 = spiky_lower_bound(make_spiky(cls10, grid, 1e-3), grid, cfg);
        CHECK(v10 == doctest::Approx(10.0 * v).epsilon(1e-12));
    }
    SUBCASE("oversized epsilon is rejected") {
        CHECK_THROWS_AS(spiky_lower_bound(make_spiky(cls, grid, 0.3), grid, cfg),
                        std::invalid_argument);
    }
}

TEST_CASE("spiky witness mass matches the risk it induces") {
    QuadratureConfig cfg;
    const SmoothnessClass cls{2.0, {1.0, 1.5}};
    const GridSpec grid{{0.8, 0.6}};
    const auto spiky = make_spiky(cls, grid, 1e-3);
    const double a = spiky_mass(spiky, grid);
    const double v = spiky_lower_bound(spiky, grid, cfg);
    // the folded fraction is exactly 1/2 on the support, so the risk equals A_eps
    CHECK(v == doctest::Approx(a).epsilon(1e-10));
}

TEST_CASE("saddle bracket in 1-d: witness and kernel bound pinch the minimax value") {
    QuadratureConfig cfg;
    const SmoothnessClass cls{1.0, {1.0}};
    const GridSpec grid{{1.0}};
    const double target = minimax_error_single(cls, grid);

    const double lower = spiky_lower_bound(make_spiky(cls, grid, 1e-3), grid, cfg);

    oracles::QuasiRandom q(1);
    double worst_ratio = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double u = 4.0 * q.next()[0] - 2.0;
        if (std::abs(u) < 1e-6) continue;
        const auto [lhs, rhs] = verify_kernel_bound(std::vector<double>{u}, grid);
        worst_ratio = std::max(worst_ratio, lhs / (u * u));
    }
    const double upper = cls.L / (4.0 * kPi * kPi) * grid.h[0] * grid.h[0] * worst_ratio;

    CHECK(lower <= target * (1.0 + 1e-12));
    CHECK(std::abs(lower - target) / target <= 0.02);
    CHECK(std::abs(upper - target) / target <= 0.02);
}

TEST_CASE("optimal grid") {
    SUBCASE("symmetric case") {
        const auto [h, risk] = optimal_grid({1.0, {1.0, 1.0}}, 1.0);
        CHECK(h[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(h[1] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(risk == doctest::Approx(kHalfInvPi2).epsilon(1e-14));
    }
    SUBCASE("anisotropic weights equalise h_i / lambda_i") {
        const auto [h, risk] = optimal_grid({1.0, {1.0, 4.0}}, 1.0);
        CHECK(h[1] / h[0] == doctest::Approx(4.0).epsilon(1e-13));
        CHECK(h[0] / 1.0 == doctest::Approx(h[1] / 4.0).epsilon(1e-13));
        // density constraint: prod(1/h_i) = n
        CHECK(1.0 / (h[0] * h[1]) == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("consistency with the single-grid formula") {
        const auto [h, risk] = optimal_grid({1.0, {1.0}}, 10.0);
        CHECK(h[0] == doctest::Approx(0.1).epsilon(1e-14));
        CHECK(risk == doctest::Approx(minimax_error_single({1.0, {1.0}}, {{0.1}})).epsilon(1e-14));
        CHECK(risk == doctest::Approx(kHalfInvPi2 * 0.01).epsilon(1e-13));
    }
}

TEST_CASE("two-fidelity minimax error") {
    const FidelitySmoothness unit{1.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(minimax_error_vf(unit, kPi, 1, 1) == doctest::Approx(1.0).epsilon(1e-14));

    SUBCASE("large refinement leaves only the correction term") {
        const double v = minimax_error_vf(unit, 0.7, 1000000, 2);
        CHECK(v == doctest::Approx(0.5 * 0.7 * 0.7 / (kPi * kPi)).epsilon(1e-9));
    }
    SUBCASE("worked arithmetic") {
        const FidelitySmoothness fs{3.0, 1.0, 2.0, 1.0, 1.0};
        CHECK(minimax_error_vf(fs, 1.0, 2, 1) == doctest::Approx(2.0 / (kPi * kPi)).epsilon(1e-13));
    }
    SUBCASE("m = 1 degenerates to the pooled class") {
        const FidelitySmoothness fs{2.0, 0.5, 1.5, 1.0, 1.0};
        const double expect = (1.5 * 1.5 * 2.0 + 0.5) / 2.0 * (0.3 / kPi) * (0.3 / kPi);
        CHECK(minimax_error_vf(fs, 0.3, 1, 3) == doctest::Approx(expect).epsilon(1e-13));
    }
    SUBCASE("strictly decreasing in m, increasing in h") {
        double prev = minimax_error_vf(unit, 1.0, 1, 1);
        for (int m : {2, 3, 5, 16}) {
            const double v = minimax_error_vf(unit, 1.0, m, 1);
            CHECK(v < prev);
            prev = v;
        }
        prev = 0.0;
        for (double h : {0.1, 0.3, 0.9, 2.7}) {
            const double v = minimax_error_vf(unit, h, 2, 1);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(minimax_error_single({0.0, {1.0}}, {{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(minimax_error_single({1.0, {1.0}}, {{1.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(minimax_error_vf({1, 1, 1, 1, 1}, 1.0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(
        verify_kernel_bound(std::vector<double>{0, 0, 0, 0}, {{1.0, 1.0, 1.0, 1.0}}),
        UnsupportedDimensionError);
}
