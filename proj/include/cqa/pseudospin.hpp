#pragma once

#include <span>
#include <vector>

#include "cqa/core.hpp"
#include "cqa/sparse.hpp"

// Momentum-pair (Anderson pseudospin) description of the ring. Pair p of an
// even-length ring holds k = 2 pi p / L and -k for 0 < p < L/2; p = 0 stands
// for the undriven (0, pi) pair. The drive of pair p is Delta sin k.
namespace cqa {

enum class MomentKind { Fermion, Spin };

const char* to_string(MomentKind k);

struct MomentState {
    MomentKind kind = MomentKind::Fermion;
    int L = 0;
    double time = 0.0;
    std::vector<cplx> s_minus;  // -i<c_-k c_k> with c_k = L^-1/2 sum_j e^{-ikj} c_j, or <sigma^-_k>
    std::vector<double> s_z;    // <n_k + n_-k - 1> or <sigma^z_k>

    int pairs() const { return static_cast<int>(s_z.size()); }
};

struct MomentDerivative {
    std::vector<cplx> d_minus;
    std::vector<double> d_z;
};

int pair_count(int L);  // L/2, L even
double pair_momentum(int L, int pair);
double pair_drive(int L, int pair, double delta);

MomentState vacuum_moments(MomentKind kind, int L);
// Every pair rotated to Bloch polar angle theta (0 = empty) and phase phi.
MomentState coherent_moments(MomentKind kind, int L, double theta, double phi);

double pair_density(const MomentState& s);   // (1/L) sum_p (s_z + 1)
double magnetization(const MomentState& s);  // mean of s_z over pairs

// Mean-field closures. nbar and mbar are taken as given so callers can
// check the identification mbar + 1 = 2 nbar term by term.
MomentDerivative fermion_moment_rhs(const MomentState& s, double mu, double delta, double e_c, double kappa, double nbar);
MomentDerivative spin_moment_rhs(const MomentState& s, double mu, double delta, double e_c, double kappa, double mbar);

double max_moment_step(const ModelParams& p);  // 0.01 / max(kappa, |mu|, 4 Delta, |E_C|)
// Default step, a quarter of the bound. At the bound itself halving dt still
// moves a t = 500 trajectory by a few 1e-9.
double fine_moment_step(const ModelParams& p);

// Fixed-step RK4 with the density recomputed at every stage. Each sample
// interval is split into equal steps no longer than dt.
std::vector<MomentState> integrate_moments(const MomentState& initial, const ModelParams& p,
                                           std::span<const double> sample_times, double dt);

// Exact dynamics restricted to the operator space reachable from pair
// populations and pair coherences. Fermion pairs carry five local entries
// (00, 0P, P0, PP and the broken-pair population), spins four.
class PairSectorModel {
public:
    PairSectorModel(MomentKind kind, const ModelParams& p);

    MomentKind kind() const { return kind_; }
    int pairs() const { return pairs_; }
    std::size_t dim() const { return dim_; }
    const CsrMatrix& generator() const { return generator_; }

    // Product operator with each pair set by the given moments.
    std::vector<cplx> product_state(const MomentState& moments) const;
    MomentState moments(std::span<const cplx> state, double time) const;
    double trace(std::span<const cplx> state) const;
    double energy(std::span<const cplx> state) const;  // <-mu N + E_C N^2 / 2L>

    std::vector<MomentState> evolve(const MomentState& initial, std::span<const double> times) const;

private:
    MomentKind kind_;
    ModelParams params_;
    int pairs_;
    int local_;
    std::size_t dim_;
    CsrMatrix generator_;
};

double max_moment_difference(std::span<const MomentState> a, std::span<const MomentState> b);

// One generator action on a single (k, -k) pair prepared in a pseudospin
// state, under charging energy and loss only.
struct BreakdownReport {
    double p = 0.0;
    cplx beta_coh;
    double dH_fermi = 0.0;
    double dH_spin = 0.0;
    double ratio = 0.0;  // NaN when dH_spin vanishes
    bool ratio_defined = false;
    cplx d_pair_fermi;  // change of the pair coherence
    cplx d_pair_spin;   // change of <sigma^->
    double d_sz_fermi = 0.0;
    double d_sz_spin = 0.0;
};

BreakdownReport interaction_breakdown(double p, cplx beta_coh, double e_c, double kappa);

// Same single pair evolved exactly over time.
struct BreakdownTrace {
    std::vector<double> times;
    std::vector<double> energy_fermi, energy_spin;
    std::vector<double> sz_fermi, sz_spin;
};

BreakdownTrace interaction_breakdown_trace(double p, cplx beta_coh, double e_c, double kappa, std::span<const double> times);

}  // namespace cqa
