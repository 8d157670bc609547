#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cqa/core.hpp"
#include "cqa/sparse.hpp"

// Brute-force Fock-space machinery. Basis state index bit j is the occupation
// of mode j; the Jordan-Wigner string runs over the lower bits.
namespace cqa {

enum class Parity { Even, Odd, Mixed };

struct FockOperator {
    int n_modes = 0;
    SparseMatrix matrix;
    Parity parity = Parity::Even;

    FockOperator() = default;
    FockOperator(int modes, SparseMatrix m);

    Eigen::Index dim() const { return matrix.rows(); }
    FockOperator adjoint() const;
};

FockOperator operator+(const FockOperator& a, const FockOperator& b);
FockOperator operator-(const FockOperator& a, const FockOperator& b);
FockOperator operator*(const FockOperator& a, const FockOperator& b);
FockOperator operator*(cplx s, const FockOperator& a);

struct FockOps {
    int n_modes = 0;
    std::vector<FockOperator> c, cdag, n;

    FockOperator identity() const;
    FockOperator total_number(int first = 0, int count = -1) const;
    FockOperator parity_operator() const;
};

constexpr int kMaxFockModes = 16;

FockOps build_operators(int n_modes);

// -mu N + (E_C / 2L) N^2 + sum_ij (Delta_ij c_i^+ c_j^+ + h.c.) on the block of
// L = pairing.size() modes starting at first_mode.
FockOperator build_hamiltonian(const PairingMatrix& pairing, double mu, double e_c, const FockOps& ops, int first_mode = 0);

class SuperOperator {
public:
    SuperOperator(int hilbert_dim, SparseMatrix generator);

    int hilbert_dim() const { return hilbert_dim_; }
    Eigen::Index dim() const { return generator_.rows(); }
    const SparseMatrix& generator() const { return generator_; }
    const CsrMatrix& csr() const { return csr_; }

private:
    int hilbert_dim_;
    SparseMatrix generator_;
    CsrMatrix csr_;
};

// Column-stacked vectorisation: vec(A X B) = (B^T (x) A) vec(X).
Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int dim);

SuperOperator build_liouvillian(const FockOperator& h, std::span<const FockOperator> jumps, std::span<const double> rates);

// Chain generator with loss kappa on every site.
SuperOperator chain_liouvillian(const ModelParams& p);

// Unique kernel of the generator as a density matrix. Throws DegenerateKernel
// if the kernel looks at least two-dimensional.
Eigen::MatrixXcd steady_state(const SuperOperator& liouv);

// Eigenvalues of the generator closest to zero, by shifted block inverse
// iteration; exposed for degeneracy diagnostics.
std::vector<cplx> near_zero_spectrum(const SuperOperator& liouv, int count = 3);

// System (modes 0..L-1) plus absorber (modes L..2L-1).
FockOperator build_cqa_hamiltonian(const PairingMatrix& pairing, double mu, double e_c, double kappa, const FockOps& ops,
                                   double absorber_mu_shift = 0.0);
std::vector<FockOperator> build_cqa_jumps(int L, double kappa, const FockOps& ops);

// Absorber construction in the doubled space; 2L <= 16.
Eigen::VectorXcd build_cqa_state(const PairingMatrix& pairing, double mu, double e_c, double kappa);
Eigen::VectorXcd build_cqa_state(const ModelParams& p);

// Same pure state restricted to the L dark modes.
Eigen::VectorXcd build_dark_state(const PairingMatrix& pairing, double mu, double e_c, double kappa);

// (sum_ij Delta_ij c_i^+ c_j^+)^n |0> / n!, the n-pair component without alpha_n.
Eigen::VectorXcd pair_component(const PairingMatrix& pairing, int n);

struct DarkReport {
    double hamiltonian_residual = 0.0;
    std::vector<double> jump_residuals;
    double max_residual() const;
};

DarkReport verify_dark_conditions(const Eigen::VectorXcd& state, const PairingMatrix& pairing, double mu, double e_c,
                                  double kappa);

// Reduced state of the first L modes of a parity-even pure state on 2L modes.
Eigen::MatrixXcd partial_trace_absorber(const Eigen::VectorXcd& state, int L);
// Same for a density matrix on 2L modes.
Eigen::MatrixXcd partial_trace_absorber(const Eigen::MatrixXcd& rho, int L);

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

cplx expectation(const Eigen::MatrixXcd& rho, const FockOperator& op);
cplx expectation(const Eigen::VectorXcd& psi, const FockOperator& op);  // psi normalised

// Tr[X exp(L t) (Y rho)] on an increasing time grid starting at t >= 0.
std::vector<cplx> two_time_correlation(const SuperOperator& liouv, const Eigen::MatrixXcd& rho, const FockOperator& x,
                                       const FockOperator& y, std::span<const double> times);

// Evolves vec(rho) to each requested time (non-decreasing).
std::vector<Eigen::VectorXcd> evolve(const SuperOperator& liouv, const Eigen::VectorXcd& vec_rho,
                                     std::span<const double> times);

struct PerturbationSpec {
    int site = 0;        // 0-based
    double gamma_p = 0;  // incoherent pump rate on that site
};

struct HtrsSeries {
    PerturbationSpec pert;
    std::vector<double> times;
    std::vector<cplx> forward;   // <c_1(t) c_2(0)>
    std::vector<cplx> reversed;  // <c_2(t) c_1(0)>
    double max_violation = 0.0;  // max_t |forward + reversed|
};

HtrsSeries htrs_breaking(const ModelParams& p, const PerturbationSpec& pert, std::span<const double> times);

struct HtrsSweep {
    std::vector<HtrsSeries> series;
    bool monotone = false;  // violation increases with gamma_p
};

HtrsSweep htrs_sweep(const ModelParams& p, std::span<const double> gammas, std::span<const double> times);

// <H_eff(t) c_j(0)> and <c_j(t) H_eff(0)> with H_eff = H - (i/2) sum L^+ L.
struct EffectiveHamiltonianCheck {
    std::vector<cplx> h_then_c;
    std::vector<cplx> c_then_h;
    double max_difference = 0.0;
};
EffectiveHamiltonianCheck effective_hamiltonian_symmetry(const ModelParams& p, int site, std::span<const double> times);

struct NonreciprocityReport {
    double max_system_difference = 0.0;    // even A-side block of the reduced state
    double max_absorber_difference = 0.0;  // n_{1,B}
};

// Two cascaded runs from the vacuum that differ only by a relative shift of
// the absorber chemical potential.
NonreciprocityReport cascade_nonreciprocity_check(const ModelParams& p, double absorber_tweak, std::span<const double> times);

}  // namespace cqa
