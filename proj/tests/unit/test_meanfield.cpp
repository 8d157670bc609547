#include <cmath>
#include <numbers>

#include "cqa/core.hpp"
#include "cqa/meanfield.hpp"
#include "cqa/thermo.hpp"
#include "doctest.h"

using namespace cqa;

TEST_SUITE("meanfield") {

TEST_CASE("roots solve the self-consistency condition") {
    for (double mu : {-0.05, 0.1, 0.2, 0.35, 0.6})
        for (double d : {0.005, 0.0212, 0.08}) {
            const MeanFieldParams p{mu, d, 1.0, 0.01};
            const auto r = solve_roots(p);
            REQUIRE(r.count() >= 1);
            for (double n : r.roots) {
                CHECK(n >= 0.0);
                CHECK(n <= 0.5);
                CHECK(std::fabs(self_consistency_residual(n, p)) < 1e-12);
            }
            // Every genuine root is a quartic root; the rest fail the original equation.
            for (double q : quartic_real_roots(p)) {
                bool listed = false;
                for (double n : r.roots) listed = listed || std::fabs(n - q) < 1e-8;
                if (!listed) CHECK(std::fabs(self_consistency_residual(q, p)) > 1e-10);
            }
        }
}

TEST_CASE("three roots on a pairing interval containing 0.0212 at mu = 0.2") {
    CHECK(solve_roots({0.2, 0.0212, 1.0, 0.01}).count() == 3);
    CHECK(solve_roots({0.2, 0.015, 1.0, 0.01}).count() == 3);
    CHECK(solve_roots({0.2, 0.5, 1.0, 0.01}).count() == 1);
    const auto r = solve_roots({0.2, 0.0212, 1.0, 0.01});
    CHECK(r.stable[0]);
    CHECK_FALSE(r.stable[1]);
    CHECK(r.stable[2]);
}

TEST_CASE("bistable region lies inside 0 < mu < 1/2") {
    std::vector<double> mus, deltas;
    for (int i = 0; i <= 80; ++i) mus.push_back((i - 10) / 100.0);
    for (int i = 1; i <= 40; ++i) deltas.push_back(0.5 * i / 40);
    const auto region = bistable_region(mus, deltas, 1.0, 0.01);
    bool any = false;
    for (std::size_t i = 0; i < mus.size(); ++i)
        for (std::size_t j = 0; j < deltas.size(); ++j)
            if (region[j][i]) {
                any = true;
                CHECK(mus[i] > 0.0);
                CHECK(mus[i] < 0.5);
            }
    CHECK(any);
    const std::vector<double> bad{0.8};
    CHECK_THROWS_AS(bistable_region(bad, deltas, 1.0, 0.01), Error);
}

TEST_CASE("fold points: analytic branches, root counting and discriminant agree") {
    for (double d : {0.01, 0.02, 0.05, 0.1}) {
        CAPTURE(d);
        const auto a = fold_points(d, 1.0, 0.01);
        const auto b = fold_points_by_root_count(d, 1.0, 0.01);
        REQUIRE(a);
        REQUIRE(b);
        CHECK(a->mu_lo == doctest::Approx(b->mu_lo).epsilon(1e-8));
        CHECK(a->mu_hi == doctest::Approx(b->mu_hi).epsilon(1e-8));
        const auto zeros = discriminant_zeros(d, 1.0, 0.01, a->mu_lo - 0.05, a->mu_hi + 0.05);
        bool lo = false, hi = false;
        for (double z : zeros) {
            lo = lo || std::fabs(z - a->mu_lo) < 1e-7;
            hi = hi || std::fabs(z - a->mu_hi) < 1e-7;
        }
        CHECK(lo);
        CHECK(hi);
    }
    CHECK_FALSE(fold_points(0.4, 1.0, 0.01));
}

TEST_CASE("inverse branches invert the self-consistency map") {
    const double d = 0.05, k = 0.01;
    for (double n : {0.01, 0.1, 0.2}) {
        for (int branch : {+1, -1}) {
            const auto mu = inverse_mu(n, branch, d, 1.0, k);
            REQUIRE(mu);
            CHECK(std::fabs(self_consistency_residual(n, {*mu, d, 1.0, k})) < 1e-12);
        }
    }
    CHECK_FALSE(inverse_mu(0.499, +1, d, 1.0, k));
    const double nc = branch_turning_density(d, k);
    CHECK(inverse_mu(nc * (1 - 1e-9), +1, d, 1.0, k));
}

TEST_CASE("Maxwell construction disagrees with the exact transition") {
    for (double d : {0.02, 0.05, 0.1}) {
        const double star = maxwell_transition(d, 1.0, 0.01);
        CHECK(std::fabs(maxwell_area(star, d, 1.0, 0.01)) < 1e-9);
        const auto f = fold_points(d, 1.0, 0.01);
        CHECK(star > f->mu_lo);
        CHECK(star < f->mu_hi);
        CHECK(std::fabs(star - critical_mu(d, 0.01, DissipationMode::Full)) > 1e-3);
    }
}

TEST_CASE("momentum occupations") {
    CHECK(nk_steady(0.0, 0.1, 0.2, 0.3, 1.0, 0.01) == 0.0);
    CHECK(nk_steady(std::numbers::pi / 2, 0.0, 0.0, 0.3, 0.0, 0.0) == doctest::Approx(0.5));
    CHECK(free_finite_L_density(4000, 0.2, 0.3, 0.01) == doctest::Approx(free_density_continuum(0.2, 0.3, 0.01)).epsilon(1e-9));
}

}  // TEST_SUITE
