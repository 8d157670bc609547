// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cqa/combinatorics.hpp"
#include "cqa/focked.hpp"
#include "cqa/meanfield.hpp"
#include "cqa/pseudospin.hpp"
#include "cqa/steadystate.hpp"
#include "cqa/thermo.hpp"

using namespace cqa;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    v.back() = b;
    return v;
}

Outcome critical_weak() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const double d = critical_delta(0.2, 0.0, DissipationMode::Weak);
    const double s = seconds_since(t0);
    o.pass = std::fabs(d - 0.02122) <= 2e-4 && s < 5.0;
    o.detail = fmt("delta_crit=%.7f (target 0.02122 +- 2e-4), %.2fs (< 5s)", d, s);
    return o;
}

Outcome critical_full() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const double d = critical_delta(0.2, 1e-3, DissipationMode::Full);
    const double s = seconds_since(t0);
    o.pass = std::fabs(d - 0.02138) <= 2e-4 && s < 5.0;
    o.detail = fmt("delta_crit=%.7f (target 0.02138 +- 2e-4), %.2fs (< 5s)", d, s);
    return o;
}

Outcome thermodynamic_density() {
    Outcome o;
    double worst = 0.0, slowest = 0.0;
    for (double d : {0.020, 0.0224}) {
        const auto t0 = std::chrono::steady_clock::now();
        const double exact = mean_density(build_coefficients({100000, Boundary::Periodic, 0.2, d, 1.0, 1e-8}));
        slowest = std::max(slowest, seconds_since(t0));
        const double predicted = density_thermo(profile(0.2, 1e-8, d, DissipationMode::Full));
        worst = std::max(worst, std::fabs(exact - predicted));
    }
    o.pass = worst < 1e-3 && slowest < 30.0;
    o.detail = fmt("max |n_L - rho_min/2| = %.3g (< 1e-3), slowest point %.2fs (< 30s)", worst, slowest);
    return o;
}

Outcome steady_state_cross_oracle() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int points = 0;
    for (int L : {2, 3, 4})
        for (auto bc : {Boundary::Periodic, Boundary::Open})
            for (double e_c : {0.0, 1.0})
                for (double mu : {0.1, 0.25, 0.4})
                    for (double d : {0.05, 0.15, 0.3}) {
                        const ModelParams p{L, bc, mu, d, e_c, 0.1};
                        const Eigen::MatrixXcd reduced = partial_trace_absorber(build_cqa_state(p), L);
                        worst = std::max(worst, trace_distance(reduced, steady_state(chain_liouvillian(p))));
                        ++points;
                    }
    const double s = seconds_since(t0);
    o.pass = worst < 1e-8 && s < 120.0;
    o.detail = fmt("%g points, max trace distance %.3g (< 1e-8), %.1fs (< 120s)", points, worst, s);
    return o;
}

Outcome closed_forms() {
    Outcome o;
    double worst = 0.0;
    for (int L : {6, 8}) {
        const ModelParams p{L, Boundary::Periodic, 0.27, 0.18, 1.0, 0.07};
        const auto t = build_coefficients(p);
        const FockOps ops = build_operators(2 * L);
        const Eigen::VectorXcd psi = build_cqa_state(p);
        const auto of = [&](const SparseMatrix& m) { return psi.dot(m * psi); };
        const auto dim = ops.identity().dim();
        SparseMatrix b_dag(dim, dim);
        for (int j = 0; j < L; ++j) {
            const SparseMatrix dj = (ops.cdag[j].matrix + ops.cdag[L + j].matrix) * std::sqrt(0.5);
            const SparseMatrix dk = (ops.cdag[(j + 1) % L].matrix + ops.cdag[L + (j + 1) % L].matrix) * std::sqrt(0.5);
            b_dag += SparseMatrix(dj * dk);
        }
        worst = std::max(worst, std::fabs(of(ops.total_number(0, L).matrix).real() / L - mean_density(t)));
        worst = std::max(worst, std::abs(of(b_dag) - pair_expectation(t, 1)));
        for (int m = 1; m <= L / 2; ++m)
            worst = std::max(worst, std::abs(of((ops.cdag[0] * ops.cdag[2 * m - 1]).matrix) -
                                              physical_quadratic(anomalous_correlation(t, m))));
        for (int m = 0; m <= L / 2; ++m)
            worst = std::max(worst, std::abs(of((ops.cdag[0] * ops.c[(2 * m) % L]).matrix) -
                                              physical_quadratic(normal_correlation(t, m))));
    }
    double antipodal = 0.0, edges = 0.0;
    for (int L : {6, 10}) {
        const auto t = build_coefficients({L, Boundary::Periodic, 0.2, 0.1, 1.0, 0.01});
        antipodal = std::max(antipodal, std::abs(anomalous_correlation(t, (L / 2 + 1) / 2)));
        const cplx b = pair_expectation(t, 1);
        edges = std::max(edges, std::abs(anomalous_correlation(t, 1) - b / double(L)));
        edges = std::max(edges, std::abs(anomalous_correlation(t, L / 2) + b / double(L)));
    }
    o.pass = worst < 1e-9 && antipodal < 1e-12 && edges < 1e-12;
    o.detail = fmt("brute force %.3g (< 1e-9), antipodal %.3g (< 1e-12), B/L relations %.3g (< 1e-12)", worst, antipodal,
                   edges);
    return o;
}

Outcome combinatorics() {
    Outcome o;
    int mismatches = 0;
    for (int L = 2; L <= 14; ++L)
        for (int n = 0; n <= L / 2; ++n) {
            const auto obc = count_obc(L, n).value;
            if (obc != count_genfunc(L, n).value) ++mismatches;
            if (obc != BigInt(enumerate_dimers(L, n, Boundary::Open).size())) ++mismatches;
            if (count_pbc(L, n).value != BigInt(enumerate_dimers(L, n, Boundary::Periodic).size())) ++mismatches;
        }
    double norm_err = 0.0, half_norm = 0.0;
    for (int L : {4, 6, 8}) {
        const PairingMatrix pairing = nearest_neighbor_pairing(L, 1.0, Boundary::Periodic);
        for (int n = 0; n < L / 2; ++n) {
            const double count = std::exp(log_of(count_pbc(L, n).value));
            norm_err = std::max(norm_err, std::fabs(pair_component(pairing, n).squaredNorm() - count) / count);
        }
        half_norm = std::max(half_norm, pair_component(pairing, L / 2).norm());
    }
    o.pass = mismatches == 0 && norm_err < 1e-12 && half_norm < 1e-12;
    o.detail = fmt("count mismatches %g, Fock-norm rel. error %.3g, half-filling norm %.3g", mismatches, norm_err, half_norm);
    return o;
}

Outcome noninteracting() {
    Outcome o;
    const ModelParams p{6, Boundary::Periodic, 0.2, 0.3, 0.0, 0.01};
    const Eigen::MatrixXcd rho = steady_state(chain_liouvillian(p));
    const double ed = expectation(rho, build_operators(6).total_number()).real() / 6;
    const double free = free_finite_L_density(6, 0.2, 0.3, 0.01);
    const double closed = mean_density(build_coefficients(p));
    const double worst = std::max({std::fabs(ed - free), std::fabs(ed - closed), std::fabs(free - closed)});
    o.pass = worst < 1e-10;
    o.detail = fmt("density %.12f, max pairwise difference %.3g (< 1e-10)", ed, worst);
    return o;
}

Outcome mean_field() {
    Outcome o;
    const int roots = solve_roots({0.2, 0.0212, 1.0, 0.01}).count();

    std::vector<double> mus = linspace(-0.1, 0.7, 161), deltas = linspace(0.0025, 0.5, 200);
    const auto region = bistable_region(mus, deltas, 1.0, 0.01);
    int outside = 0, inside = 0;
    for (std::size_t j = 0; j < deltas.size(); ++j)
        for (std::size_t i = 0; i < mus.size(); ++i)
            if (region[j][i]) (mus[i] < 0.0 || mus[i] > 0.5 ? outside : inside)++;

    double smallest = 1e300;
    for (double d : {0.02, 0.05, 0.1})
        smallest = std::min(smallest, std::fabs(maxwell_transition(d, 1.0, 0.01) -
                                                critical_mu(d, 0.01, DissipationMode::Full)));
    o.pass = roots == 3 && outside == 0 && inside > 0 && smallest > 1e-3;
    o.detail = fmt("%g roots at delta = 0.0212, bistable points inside/outside 0 < mu < 1/2: %g/%g", roots, inside, outside) +
               fmt(", min |mu_maxwell - mu_exact| = %.4g (> 1e-3)", smallest);
    return o;
}

Outcome tfim() {
    Outcome o;
    const auto times = linspace(0.0, 500.0, 501);
    const ModelParams free{10, Boundary::Periodic, 0.2, 0.3, 0.0, 0.01};
    const ModelParams inter{10, Boundary::Periodic, 0.2, 0.3, 1.0, 0.01};

    const auto exact_free_f = PairSectorModel(MomentKind::Fermion, free).evolve(vacuum_moments(MomentKind::Fermion, 10), times);
    const auto exact_free_s = PairSectorModel(MomentKind::Spin, free).evolve(vacuum_moments(MomentKind::Spin, 10), times);
    const double dt = fine_moment_step(free);
    const auto mf_f = integrate_moments(vacuum_moments(MomentKind::Fermion, 10), free, times, dt);
    const auto mf_s = integrate_moments(vacuum_moments(MomentKind::Spin, 10), free, times, dt);
    const double free_gap = std::max(max_moment_difference(exact_free_f, exact_free_s), max_moment_difference(mf_f, mf_s));

    const auto exact_f = PairSectorModel(MomentKind::Fermion, inter).evolve(vacuum_moments(MomentKind::Fermion, 10), times);
    const auto exact_s = PairSectorModel(MomentKind::Spin, inter).evolve(vacuum_moments(MomentKind::Spin, 10), times);
    const double inter_gap = max_moment_difference(exact_f, exact_s);

    const auto br = interaction_breakdown(0.5, cplx{0.3, 0.1}, 1.0, 0.01);
    const double ratio_err = std::fabs(br.ratio - 1.5);
    o.pass = free_gap < 1e-8 && inter_gap > 1e-3 && ratio_err < 1e-10;
    o.detail = fmt("E_C=0 gap %.3g (< 1e-8), E_C=1 gap %.3g (> 1e-3), |ratio - 3/2| = %.3g (< 1e-10)", free_gap, inter_gap,
                   ratio_err);
    return o;
}

Outcome htrs() {
    Outcome o;
    const ModelParams p{6, Boundary::Periodic, 0.2, 0.15, 1.0, 0.01};
    const auto times = linspace(0.0, 200.0, 201);
    const std::vector<double> gammas{0.0, 0.1 * p.kappa};
    const auto sweep = htrs_sweep(p, gammas, times);
    const double clean = sweep.series[0].max_violation;
    const double pumped = sweep.series[1].max_violation;
    const double heff = effective_hamiltonian_symmetry(p, 0, times).max_difference;
    o.pass = clean < 1e-10 && pumped > 1e-6 && heff < 1e-9;
    o.detail = fmt("gamma_p=0: %.3g (< 1e-10), gamma_p=0.1 kappa: %.3g (> 1e-6), H_eff: %.3g (< 1e-9)", clean, pumped, heff);
    return o;
}

Outcome nonreciprocity() {
    Outcome o;
    const auto times = linspace(0.0, 50.0, 26);
    double system = 0.0, absorber = 1e300;
    // A two-site ring has its two bonds cancel in the antisymmetric pairing, so L = 2 runs open.
    for (const auto& [L, bc] : {std::pair{2, Boundary::Open}, {3, Boundary::Periodic}, {4, Boundary::Periodic}}) {
        const auto r = cascade_nonreciprocity_check({L, bc, 0.2, 0.15, 1.0, 0.1}, 0.5, times);
        system = std::max(system, r.max_system_difference);
        absorber = std::min(absorber, r.max_absorber_difference);
    }
    o.pass = system < 1e-10 && absorber > 1e-6;
    o.detail = fmt("2L <= 8: A-side change %.3g (< 1e-10), smallest B-side change %.3g (> 1e-6)", system, absorber);
    return o;
}

}  // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"critical pairing, weak dissipation", critical_weak},
        {"critical pairing, finite dissipation", critical_full},
        {"thermodynamic density at L = 1e5", thermodynamic_density},
        {"steady-state cross-oracle", steady_state_cross_oracle},
        {"closed-form observables vs Fock space", closed_forms},
        {"dimer counting", combinatorics},
        {"non-interacting exactness", noninteracting},
        {"mean-field bistability and Maxwell mismatch", mean_field},
        {"fermion pairs vs pseudospins", tfim},
        {"time-reversal antisymmetry", htrs},
        {"cascaded nonreciprocity", nonreciprocity},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                    seconds_since(t0));
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
