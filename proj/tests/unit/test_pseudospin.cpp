#include <cmath>
#include <numbers>

#include "cqa/focked.hpp"
#include "cqa/meanfield.hpp"
#include "cqa/pseudospin.hpp"
#include "doctest.h"

using namespace cqa;

namespace {

std::vector<double> grid(double stop, int count) {
    std::vector<double> t;
    for (int i = 0; i < count; ++i) t.push_back(stop * i / (count - 1));
    return t;
}

double bloch_excess(const MomentState& s) {
    double worst = -1.0;
    for (int q = 0; q < s.pairs(); ++q) worst = std::max(worst, 4.0 * std::norm(s.s_minus[q]) + s.s_z[q] * s.s_z[q] - 1.0);
    return worst;
}

}  // namespace

TEST_SUITE("pseudospin") {

TEST_CASE("pair grid") {
    CHECK(pair_count(10) == 5);
    CHECK_THROWS_AS(pair_count(7), Error);
    CHECK(pair_drive(10, 0, 0.3) == 0.0);
    CHECK(pair_drive(10, 1, 0.3) == doctest::Approx(0.3 * std::sin(std::numbers::pi / 5)));
}

TEST_CASE("right-hand sides") {
    const MomentState vac = vacuum_moments(MomentKind::Fermion, 8);
    const auto d = fermion_moment_rhs(vac, 0.2, 0.0, 1.0, 0.01, 0.0);
    for (int q = 0; q < 4; ++q) {
        CHECK(d.d_minus[q] == cplx{});
        CHECK(d.d_z[q] == 0.0);
    }
    const auto spin_vac = spin_moment_rhs(vacuum_moments(MomentKind::Spin, 8), 0.2, 0.0, 1.0, 0.01, -1.0);
    CHECK(spin_vac.d_z[2] == 0.0);

    // With mbar + 1 = 2 nbar the two closures coincide term by term.
    MomentState s = coherent_moments(MomentKind::Fermion, 8, 1.1, 0.4);
    s.s_z[1] = 0.3;
    const double nbar = pair_density(s);
    const double mbar = magnetization(s);
    CHECK(mbar + 1.0 == doctest::Approx(2.0 * nbar));
    const auto f = fermion_moment_rhs(s, 0.2, 0.3, 1.0, 0.01, nbar);
    const auto g = spin_moment_rhs(s, 0.2, 0.3, 1.0, 0.01, mbar);
    for (int q = 0; q < 4; ++q) {
        CHECK(std::abs(f.d_minus[q] - g.d_minus[q]) < 1e-15);
        CHECK(std::fabs(f.d_z[q] - g.d_z[q]) < 1e-15);
    }
}

TEST_CASE("integrator guard, convergence and invariants") {
    const ModelParams p{10, Boundary::Periodic, 0.2, 0.3, 1.0, 0.01};
    const auto t = grid(100.0, 11);
    const MomentState start = coherent_moments(MomentKind::Fermion, 10, 0.7, 0.2);
    CHECK_THROWS_AS(integrate_moments(start, p, t, 2.0 * max_moment_step(p)), Error);
    const auto coarse = integrate_moments(start, p, t, fine_moment_step(p));
    const auto fine = integrate_moments(start, p, t, 0.5 * fine_moment_step(p));
    CHECK(max_moment_difference(coarse, fine) < 1e-10);
    // At the largest allowed step RK4 is still converged to ~1e-9.
    CHECK(max_moment_difference(integrate_moments(start, p, t, max_moment_step(p)), fine) < 1e-8);
    for (const auto& s : coarse) {
        CHECK(bloch_excess(s) < 1e-9);
        for (double z : s.s_z) CHECK(std::fabs(z) <= 1.0);
    }
    // The undriven (0, pi) pair empties at rate kappa.
    CHECK(coarse.back().s_z[0] + 1.0 == doctest::Approx((start.s_z[0] + 1.0) * std::exp(-1.0)).epsilon(1e-9));
    const auto spin = integrate_moments(coherent_moments(MomentKind::Spin, 10, 0.7, 0.2), p, t, fine_moment_step(p));
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(magnetization(spin[i]) + 1.0 == doctest::Approx(2.0 * pair_density(coarse[i])).epsilon(1e-10));
}

TEST_CASE("long-time moments reproduce the momentum occupations") {
    for (double e_c : {0.0, 1.0}) {
        const ModelParams p{12, Boundary::Periodic, 0.3, 0.1, e_c, 0.5};
        const std::vector<double> t{200.0};
        const auto s = integrate_moments(vacuum_moments(MomentKind::Fermion, 12), p, t, max_moment_step(p)).back();
        const double nbar = pair_density(s);
        for (int q = 0; q < s.pairs(); ++q)
            CHECK(0.5 * (s.s_z[q] + 1.0) ==
                  doctest::Approx(nk_steady(pair_momentum(12, q), nbar, 0.3, 0.1, e_c, 0.5)).epsilon(1e-9));
    }
}

TEST_CASE("non-interacting moments agree with real-space exact diagonalization") {
    const int L = 6;
    const ModelParams p{L, Boundary::Periodic, 0.2, 0.3, 0.0, 0.01};
    const auto t = grid(60.0, 7);
    const auto mf = integrate_moments(vacuum_moments(MomentKind::Fermion, L), p, t, max_moment_step(p));

    const FockOps ops = build_operators(L);
    const SuperOperator liouv = chain_liouvillian(p);
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(64, 64);
    vac(0, 0) = 1.0;
    const auto states = evolve(liouv, vectorize(vac), t);
    const auto mode = [&](int k_index) {
        SparseMatrix ck(64, 64);
        for (int j = 0; j < L; ++j)
            ck += std::polar(1.0 / std::sqrt(double(L)), -2.0 * std::numbers::pi * k_index * j / L) * ops.c[j].matrix;
        return FockOperator(L, ck);
    };
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Eigen::MatrixXcd rho = unvectorize(states[i], 64);
        for (int q = 0; q < L / 2; ++q) {
            const int minus = q == 0 ? L / 2 : (L - q) % L;
            const FockOperator ck = mode(q), cmk = mode(minus);
            const double sz = expectation(rho, ck.adjoint() * ck).real() + expectation(rho, cmk.adjoint() * cmk).real() - 1.0;
            const cplx pair = cplx{0.0, -1.0} * expectation(rho, cmk * ck);
            CHECK(std::fabs(sz - mf[i].s_z[q]) < 1e-8);
            CHECK(std::abs(pair - mf[i].s_minus[q]) < 1e-8);
        }
    }
}

TEST_CASE("exact pair-sector models") {
    const ModelParams free{8, Boundary::Periodic, 0.2, 0.3, 0.0, 0.01};
    const PairSectorModel fermi(MomentKind::Fermion, free), spin(MomentKind::Spin, free);
    CHECK(fermi.dim() == 625);
    CHECK(spin.dim() == 256);
    const auto t = grid(200.0, 41);
    const MomentState f0 = coherent_moments(MomentKind::Fermion, 8, 0.9, 0.3);
    const MomentState s0 = coherent_moments(MomentKind::Spin, 8, 0.9, 0.3);
    const auto ft = fermi.evolve(f0, t);
    const auto st = spin.evolve(s0, t);
    CHECK(max_moment_difference(ft, st) < 1e-12);
    // Without interactions the exact first moments obey the closed equations.
    CHECK(max_moment_difference(ft, integrate_moments(f0, free, t, fine_moment_step(free))) < 1e-8);
    const auto v = fermi.product_state(f0);
    CHECK(fermi.trace(v) == doctest::Approx(1.0));
    CHECK(fermi.trace(expm_multiply(fermi.generator(), v, 50.0)) == doctest::Approx(1.0).epsilon(1e-12));

    const ModelParams inter{8, Boundary::Periodic, 0.2, 0.3, 1.0, 0.01};
    const auto fi = PairSectorModel(MomentKind::Fermion, inter).evolve(f0, t);
    const auto si = PairSectorModel(MomentKind::Spin, inter).evolve(s0, t);
    CHECK(max_moment_difference(fi, si) > 1e-3);
}

TEST_CASE("single-pair breakdown") {
    const auto r = interaction_breakdown(0.5, 0.0, 1.0, 0.01);
    CHECK(r.dH_fermi == doctest::Approx(-0.0075).epsilon(1e-12));
    CHECK(r.dH_spin == doctest::Approx(-0.005).epsilon(1e-12));
    CHECK(std::fabs(r.ratio - 1.5) < 1e-10);

    const cplx beta{0.12, -0.3};
    const auto c = interaction_breakdown(0.4, beta, 0.7, 0.05);
    CHECK(std::fabs(c.ratio - 1.5) < 1e-10);
    const cplx expected = cplx{-0.05, -0.7} * beta;
    CHECK(std::abs(c.d_pair_fermi - expected) < 1e-14);
    CHECK(std::abs(c.d_pair_spin - expected) < 1e-14);
    CHECK(c.d_sz_fermi == doctest::Approx(-2.0 * 0.05 * 0.4));
    CHECK(c.d_sz_spin == doctest::Approx(-2.0 * 0.05 * 0.4));

    const auto empty = interaction_breakdown(0.0, 0.0, 1.0, 0.01);
    CHECK(empty.dH_fermi == 0.0);
    CHECK(empty.dH_spin == 0.0);
    CHECK_FALSE(empty.ratio_defined);
    CHECK(std::isnan(empty.ratio));

    CHECK_THROWS_AS(interaction_breakdown(1.2, 0.0, 1.0, 0.01), Error);
    CHECK_THROWS_AS(interaction_breakdown(0.5, 0.6, 1.0, 0.01), Error);

    const auto trace = interaction_breakdown_trace(0.5, 0.2, 1.0, 0.01, grid(100.0, 11));
    CHECK(trace.energy_fermi.front() == doctest::Approx(trace.energy_spin.front()));
    CHECK(std::fabs(trace.energy_fermi.back() - trace.energy_spin.back()) > 1e-3);
}

}  // TEST_SUITE
