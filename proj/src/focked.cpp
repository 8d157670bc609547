#include "cqa/focked.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

namespace cqa {
namespace {

Parity detect_parity(const SparseMatrix& m) {
    bool even = false, odd = false;
    for (int col = 0; col < m.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
            if (it.value() == cplx{}) continue;
            const int flip = (std::popcount(static_cast<unsigned>(it.row())) + std::popcount(static_cast<unsigned>(col))) & 1;
            (flip ? odd : even) = true;
        }
    if (even && odd) return Parity::Mixed;
    return odd ? Parity::Odd : Parity::Even;
}

void require_same(const FockOperator& a, const FockOperator& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "operators act on different spaces");
}

SparseMatrix identity(Eigen::Index d) {
    SparseMatrix id(d, d);
    id.setIdentity();
    return id;
}

SparseMatrix diagonal(const std::vector<cplx>& d) {
    SparseMatrix m(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    std::vector<Eigen::Triplet<cplx>> t;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] != cplx{}) t.emplace_back(static_cast<int>(i), static_cast<int>(i), d[i]);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

constexpr double kShift = 1e-9;
constexpr double kDegenerateTol = 1e-10;

struct KernelSearch {
    std::vector<cplx> ritz;       // sorted by modulus
    Eigen::MatrixXcd vectors;     // matching Ritz vectors
};

KernelSearch block_inverse_iteration(const SuperOperator& liouv, int block) {
    const Eigen::Index dim = liouv.dim();
    block = static_cast<int>(std::min<Eigen::Index>(block, dim));
    SparseMatrix shifted = liouv.generator() - kShift * identity(dim);
    shifted.makeCompressed();
    Eigen::SparseLU<SparseMatrix> lu;
    lu.analyzePattern(shifted);
    lu.factorize(shifted);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::NotConverged, "sparse LU of the shifted generator failed");

    Eigen::MatrixXcd x(dim, block);
    std::mt19937_64 rng(20240229);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (int c = 1; c < block; ++c) x(r, c) = cplx{uni(rng), uni(rng)};
    x.col(0) = vectorize(Eigen::MatrixXcd::Identity(liouv.hilbert_dim(), liouv.hilbert_dim()));

    for (int it = 0; it < 8; ++it) {
        x = lu.solve(x).eval();
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(x);
        x = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, block);
    }
    Eigen::MatrixXcd lx(dim, block);
    for (int c = 0; c < block; ++c) lx.col(c) = liouv.generator() * x.col(c);
    const Eigen::MatrixXcd small = x.adjoint() * lx;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(small);
    std::vector<int> order(block);
    for (int i = 0; i < block; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(es.eigenvalues()[a]) < std::abs(es.eigenvalues()[b]); });
    KernelSearch out;
    out.vectors.resize(dim, block);
    for (int i = 0; i < block; ++i) {
        out.ritz.push_back(es.eigenvalues()[order[i]]);
        out.vectors.col(i) = x * es.eigenvectors().col(order[i]);
    }
    return out;
}

Eigen::MatrixXcd as_density(const Eigen::VectorXcd& v, int dim) {
    Eigen::MatrixXcd rho = unvectorize(v, dim);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const cplx tr = rho.trace();
    return rho / tr;
}

Eigen::MatrixXcd steady_state_by_evolution(const SuperOperator& liouv) {
    const int d = liouv.hilbert_dim();
    Eigen::VectorXcd v = vectorize(Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
    const double norm = std::max(liouv.csr().norm1(), 1e-12);
    const double chunk = 50.0 / norm;
    for (int round = 0; round < 20000; ++round) {
        std::vector<cplx> next = expm_multiply(liouv.csr(), {v.data(), static_cast<std::size_t>(v.size())}, chunk * (1 + round));
        const Eigen::Map<Eigen::VectorXcd> nv(next.data(), v.size());
        const double change = (nv - v).cwiseAbs().maxCoeff();
        v = nv;
        if (change < 1e-13) return as_density(v, d);
    }
    throw Error(ErrorCode::NotConverged, "long-time evolution did not settle");
}

}  // namespace

FockOperator::FockOperator(int modes, SparseMatrix m) : n_modes(modes), matrix(std::move(m)) {
    matrix.prune(cplx{});
    parity = detect_parity(matrix);
}

FockOperator FockOperator::adjoint() const { return FockOperator(n_modes, SparseMatrix(matrix.adjoint())); }

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
    require_same(a, b);
    return FockOperator(a.n_modes, SparseMatrix(a.matrix + b.matrix));
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
    require_same(a, b);
    return FockOperator(a.n_modes, SparseMatrix(a.matrix - b.matrix));
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
    require_same(a, b);
    return FockOperator(a.n_modes, SparseMatrix(a.matrix * b.matrix));
}

FockOperator operator*(cplx s, const FockOperator& a) { return FockOperator(a.n_modes, SparseMatrix(s * a.matrix)); }

FockOperator FockOps::identity() const { return FockOperator(n_modes, cqa::identity(Eigen::Index{1} << n_modes)); }

FockOperator FockOps::total_number(int first, int count) const {
    if (count < 0) count = n_modes - first;
    const std::size_t d = std::size_t{1} << n_modes;
    const unsigned mask = ((1u << count) - 1u) << first;
    std::vector<cplx> diag(d);
    for (std::size_t b = 0; b < d; ++b) diag[b] = static_cast<double>(std::popcount(static_cast<unsigned>(b) & mask));
    return FockOperator(n_modes, diagonal(diag));
}

FockOperator FockOps::parity_operator() const {
    const std::size_t d = std::size_t{1} << n_modes;
    std::vector<cplx> diag(d);
    for (std::size_t b = 0; b < d; ++b) diag[b] = (std::popcount(static_cast<unsigned>(b)) & 1) ? -1.0 : 1.0;
    return FockOperator(n_modes, diagonal(diag));
}

FockOps build_operators(int n_modes) {
    if (n_modes < 1 || n_modes > kMaxFockModes)
        throw Error(ErrorCode::TooManyModes, "Fock space limited to " + std::to_string(kMaxFockModes) + " modes");
    FockOps ops;
    ops.n_modes = n_modes;
    const int d = 1 << n_modes;
    for (int j = 0; j < n_modes; ++j) {
        std::vector<Eigen::Triplet<cplx>> t;
        std::vector<cplx> occ(static_cast<std::size_t>(d));
        const unsigned below = (1u << j) - 1u;
        for (int b = 0; b < d; ++b) {
            if (!((b >> j) & 1)) continue;
            const double sign = (std::popcount(static_cast<unsigned>(b) & below) & 1) ? -1.0 : 1.0;
            t.emplace_back(b ^ (1 << j), b, sign);
            occ[static_cast<std::size_t>(b)] = 1.0;
        }
        SparseMatrix c(d, d);
        c.setFromTriplets(t.begin(), t.end());
        ops.c.emplace_back(n_modes, c);
        ops.cdag.emplace_back(n_modes, SparseMatrix(c.adjoint()));
        ops.n.emplace_back(n_modes, diagonal(occ));
    }
    return ops;
}

FockOperator build_hamiltonian(const PairingMatrix& pairing, double mu, double e_c, const FockOps& ops, int first_mode) {
    const int L = pairing.size();
    if (first_mode < 0 || first_mode + L > ops.n_modes)
        throw Error(ErrorCode::DimensionMismatch, "pairing block does not fit the mode set");
    if (first_mode == 0 && L != ops.n_modes && ops.n_modes != 2 * L)
        throw Error(ErrorCode::DimensionMismatch, "pairing dimension does not match the mode count");
    const std::size_t d = std::size_t{1} << ops.n_modes;
    const unsigned mask = ((1u << L) - 1u) << first_mode;
    std::vector<cplx> diag(d);
    for (std::size_t b = 0; b < d; ++b) {
        const double n = std::popcount(static_cast<unsigned>(b) & mask);
        diag[b] = -mu * n + e_c / (2.0 * L) * n * n;
    }
    SparseMatrix h = diagonal(diag);
    SparseMatrix pair(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j)
            if (pairing(i, j) != cplx{})
                pair += pairing(i, j) * (ops.cdag[first_mode + i].matrix * ops.cdag[first_mode + j].matrix);
    h += pair;
    h += SparseMatrix(pair.adjoint());
    return FockOperator(ops.n_modes, std::move(h));
}

SuperOperator::SuperOperator(int hilbert_dim, SparseMatrix generator)
    : hilbert_dim_(hilbert_dim), generator_(std::move(generator)) {
    generator_.prune(cplx{});
    generator_.makeCompressed();
    csr_ = CsrMatrix(generator_);
}

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int dim) {
    if (v.size() != static_cast<Eigen::Index>(dim) * dim) throw Error(ErrorCode::DimensionMismatch, "vector length is not dim^2");
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

SuperOperator build_liouvillian(const FockOperator& h, std::span<const FockOperator> jumps, std::span<const double> rates) {
    if (jumps.size() != rates.size()) throw Error(ErrorCode::DimensionMismatch, "one rate per jump operator");
    const Eigen::Index d = h.dim();
    const SparseMatrix id = identity(d);
    const cplx minus_i{0.0, -1.0};
    SparseMatrix gen = minus_i * SparseMatrix(Eigen::kroneckerProduct(id, h.matrix)) -
                       minus_i * SparseMatrix(Eigen::kroneckerProduct(SparseMatrix(h.matrix.transpose()), id));
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        if (jumps[k].dim() != d) throw Error(ErrorCode::DimensionMismatch, "jump operator dimension differs from H");
        if (rates[k] == 0.0) continue;
        const SparseMatrix& j = jumps[k].matrix;
        const SparseMatrix jdj = j.adjoint() * j;
        gen += rates[k] * SparseMatrix(Eigen::kroneckerProduct(SparseMatrix(j.conjugate()), j));
        gen -= (0.5 * rates[k]) * SparseMatrix(Eigen::kroneckerProduct(id, jdj));
        gen -= (0.5 * rates[k]) * SparseMatrix(Eigen::kroneckerProduct(SparseMatrix(jdj.transpose()), id));
    }
    return SuperOperator(static_cast<int>(d), std::move(gen));
}

SuperOperator chain_liouvillian(const ModelParams& p) {
    validate_params(p);
    const FockOps ops = build_operators(p.L);
    const FockOperator h = build_hamiltonian(nearest_neighbor_pairing(p.L, p.delta, p.bc), p.mu, p.e_c, ops);
    const std::vector<double> rates(static_cast<std::size_t>(p.L), p.kappa);
    return build_liouvillian(h, ops.c, rates);
}

std::vector<cplx> near_zero_spectrum(const SuperOperator& liouv, int count) {
    return block_inverse_iteration(liouv, count).ritz;
}

Eigen::MatrixXcd steady_state(const SuperOperator& liouv) {
    KernelSearch ks;
    try {
        ks = block_inverse_iteration(liouv, 3);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotConverged) throw;
        return steady_state_by_evolution(liouv);
    }
    if (ks.ritz.size() > 1 && std::abs(ks.ritz[1]) < kDegenerateTol)
        throw Error(ErrorCode::DegenerateKernel, "at least two generator eigenvalues within 1e-10 of zero");
    if (std::abs(ks.ritz[0]) > 1e-8) return steady_state_by_evolution(liouv);
    Eigen::MatrixXcd rho = as_density(ks.vectors.col(0), liouv.hilbert_dim());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw Error(ErrorCode::NotConverged, "steady state is not positive semidefinite");
    return rho;
}

FockOperator build_cqa_hamiltonian(const PairingMatrix& pairing, double mu, double e_c, double kappa, const FockOps& ops,
                                   double absorber_mu_shift) {
    const int L = pairing.size();
    if (ops.n_modes != 2 * L) throw Error(ErrorCode::DimensionMismatch, "absorber construction needs 2L modes");
    const FockOperator ha = build_hamiltonian(pairing, mu, e_c, ops, 0);
    const FockOperator hb = build_hamiltonian(pairing, mu + absorber_mu_shift, e_c, ops, L);
    FockOperator h = ha - hb;
    SparseMatrix cascade(ha.dim(), ha.dim());
    for (int j = 0; j < L; ++j)
        cascade += ops.cdag[j].matrix * ops.c[L + j].matrix - ops.cdag[L + j].matrix * ops.c[j].matrix;
    return h - FockOperator(ops.n_modes, SparseMatrix(cplx{0.0, 0.5 * kappa} * cascade));
}

std::vector<FockOperator> build_cqa_jumps(int L, double kappa, const FockOps& ops) {
    std::vector<FockOperator> out;
    const double amp = std::sqrt(kappa);
    for (int j = 0; j < L; ++j) out.push_back(cplx{amp, 0.0} * (ops.c[j] - ops.c[L + j]));
    return out;
}

namespace {

// sum_n prod_m 1/(m (mu~ - m E_C / L)) P^n |0>, P = sum_ij Delta_ij d_i^+ d_j^+.
Eigen::VectorXcd pair_series(const SparseMatrix& pair_op, double mu, double e_c, double kappa, int L, Eigen::Index dim) {
    const cplx mu_t{mu, 0.5 * kappa};
    Eigen::VectorXcd term = Eigen::VectorXcd::Zero(dim);
    term(0) = 1.0;
    Eigen::VectorXcd psi = term;
    for (int n = 1; n <= L; ++n) {
        term = (pair_op * term).eval() / (static_cast<double>(n) * (mu_t - static_cast<double>(n) / L * e_c));
        if (term.norm() == 0.0) break;
        psi += term;
    }
    return psi / psi.norm();
}

SparseMatrix pair_creator(const PairingMatrix& pairing, const std::vector<SparseMatrix>& creators) {
    const Eigen::Index d = creators.front().rows();
    SparseMatrix p(d, d);
    for (int i = 0; i < pairing.size(); ++i)
        for (int j = 0; j < pairing.size(); ++j)
            if (pairing(i, j) != cplx{}) p += pairing(i, j) * SparseMatrix(creators[i] * creators[j]);
    return p;
}

}  // namespace

Eigen::VectorXcd build_cqa_state(const PairingMatrix& pairing, double mu, double e_c, double kappa) {
    const int L = pairing.size();
    if (2 * L > kMaxFockModes) throw Error(ErrorCode::TooManyModes, "doubled system limited to 2L <= 16");
    const FockOps ops = build_operators(2 * L);
    std::vector<SparseMatrix> dark;
    for (int j = 0; j < L; ++j) dark.push_back(SparseMatrix((ops.cdag[j].matrix + ops.cdag[L + j].matrix) * std::sqrt(0.5)));
    return pair_series(pair_creator(pairing, dark), mu, e_c, kappa, L, ops.identity().dim());
}

Eigen::VectorXcd build_cqa_state(const ModelParams& p) {
    validate_params(p);
    return build_cqa_state(nearest_neighbor_pairing(p.L, p.delta, p.bc), p.mu, p.e_c, p.kappa);
}

Eigen::VectorXcd build_dark_state(const PairingMatrix& pairing, double mu, double e_c, double kappa) {
    const int L = pairing.size();
    const FockOps ops = build_operators(L);
    std::vector<SparseMatrix> cr;
    for (int j = 0; j < L; ++j) cr.push_back(ops.cdag[j].matrix);
    return pair_series(pair_creator(pairing, cr), mu, e_c, kappa, L, ops.identity().dim());
}

Eigen::VectorXcd pair_component(const PairingMatrix& pairing, int n) {
    const int L = pairing.size();
    const FockOps ops = build_operators(L);
    std::vector<SparseMatrix> cr;
    for (int j = 0; j < L; ++j) cr.push_back(ops.cdag[j].matrix);
    const SparseMatrix p = pair_creator(pairing, cr);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(ops.identity().dim());
    v(0) = 1.0;
    for (int k = 1; k <= n; ++k) v = (p * v).eval() / static_cast<double>(k);
    return v;
}

double DarkReport::max_residual() const {
    double m = hamiltonian_residual;
    for (double r : jump_residuals) m = std::max(m, r);
    return m;
}

DarkReport verify_dark_conditions(const Eigen::VectorXcd& state, const PairingMatrix& pairing, double mu, double e_c,
                                  double kappa) {
    const int L = pairing.size();
    const FockOps ops = build_operators(2 * L);
    if (state.size() != ops.identity().dim()) throw Error(ErrorCode::DimensionMismatch, "state is not on 2L modes");
    DarkReport rep;
    rep.hamiltonian_residual = (build_cqa_hamiltonian(pairing, mu, e_c, kappa, ops).matrix * state).norm();
    for (const auto& j : build_cqa_jumps(L, kappa, ops)) rep.jump_residuals.push_back((j.matrix * state).norm());
    return rep;
}

Eigen::MatrixXcd partial_trace_absorber(const Eigen::VectorXcd& state, int L) {
    const Eigen::Index da = Eigen::Index{1} << L;
    if (state.size() != da * da) throw Error(ErrorCode::DimensionMismatch, "state is not on 2L modes");
    double odd = 0.0;
    for (Eigen::Index i = 0; i < state.size(); ++i)
        if (std::popcount(static_cast<unsigned long>(i)) & 1) odd += std::norm(state(i));
    if (odd > 1e-24 * std::max(1.0, state.squaredNorm()))
        throw Error(ErrorCode::OddParityState, "blocked partial trace needs a parity-even state");
    const Eigen::Map<const Eigen::MatrixXcd> psi(state.data(), da, da);
    return psi * psi.adjoint();
}

Eigen::MatrixXcd partial_trace_absorber(const Eigen::MatrixXcd& rho, int L) {
    const Eigen::Index da = Eigen::Index{1} << L;
    if (rho.rows() != da * da) throw Error(ErrorCode::DimensionMismatch, "density matrix is not on 2L modes");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(da, da);
    for (Eigen::Index b = 0; b < da; ++b) out += rho.block(b * da, b * da, da, da);
    return out;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    const Eigen::MatrixXcd diff = a - b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

cplx expectation(const Eigen::MatrixXcd& rho, const FockOperator& op) {
    return (op.matrix * rho).trace();
}

cplx expectation(const Eigen::VectorXcd& psi, const FockOperator& op) { return psi.dot(op.matrix * psi); }

std::vector<Eigen::VectorXcd> evolve(const SuperOperator& liouv, const Eigen::VectorXcd& vec_rho, std::span<const double> times) {
    std::vector<Eigen::VectorXcd> out;
    Eigen::VectorXcd v = vec_rho;
    double now = 0.0;
    for (double t : times) {
        if (t < now) throw Error(ErrorCode::DomainError, "time grid must be non-decreasing and start at t >= 0");
        if (t > now) {
            std::vector<cplx> next = expm_multiply(liouv.csr(), {v.data(), static_cast<std::size_t>(v.size())}, t - now);
            v = Eigen::Map<Eigen::VectorXcd>(next.data(), v.size());
            now = t;
        }
        out.push_back(v);
    }
    return out;
}

std::vector<cplx> two_time_correlation(const SuperOperator& liouv, const Eigen::MatrixXcd& rho, const FockOperator& x,
                                       const FockOperator& y, std::span<const double> times) {
    const Eigen::MatrixXcd start = y.matrix * rho;
    const Eigen::VectorXcd probe = vectorize(Eigen::MatrixXcd(x.matrix.transpose()));
    std::vector<cplx> out;
    for (const auto& v : evolve(liouv, vectorize(start), times)) out.push_back(probe.cwiseProduct(v).sum());
    return out;
}

HtrsSeries htrs_breaking(const ModelParams& p, const PerturbationSpec& pert, std::span<const double> times) {
    validate_params(p);
    if (pert.gamma_p < 0.0) throw Error(ErrorCode::DomainError, "pump rate must be non-negative");
    if (pert.site < 0 || pert.site >= p.L) throw Error(ErrorCode::OutOfRange, "pump site outside the chain");
    const FockOps ops = build_operators(p.L);
    const FockOperator h = build_hamiltonian(nearest_neighbor_pairing(p.L, p.delta, p.bc), p.mu, p.e_c, ops);
    std::vector<FockOperator> jumps = ops.c;
    std::vector<double> rates(static_cast<std::size_t>(p.L), p.kappa);
    if (pert.gamma_p > 0.0) {
        jumps.push_back(ops.cdag[pert.site]);
        rates.push_back(pert.gamma_p);
    }
    const SuperOperator liouv = build_liouvillian(h, jumps, rates);
    const Eigen::MatrixXcd rho = steady_state(liouv);
    HtrsSeries s;
    s.pert = pert;
    s.times.assign(times.begin(), times.end());
    s.forward = two_time_correlation(liouv, rho, ops.c[0], ops.c[1], times);
    s.reversed = two_time_correlation(liouv, rho, ops.c[1], ops.c[0], times);
    for (std::size_t i = 0; i < times.size(); ++i) s.max_violation = std::max(s.max_violation, std::abs(s.forward[i] + s.reversed[i]));
    return s;
}

HtrsSweep htrs_sweep(const ModelParams& p, std::span<const double> gammas, std::span<const double> times) {
    HtrsSweep sw;
    for (double g : gammas) sw.series.push_back(htrs_breaking(p, {0, g}, times));
    sw.monotone = true;
    for (std::size_t i = 1; i < sw.series.size(); ++i) {
        const bool up = sw.series[i].pert.gamma_p > sw.series[i - 1].pert.gamma_p;
        if (up && !(sw.series[i].max_violation > sw.series[i - 1].max_violation)) sw.monotone = false;
    }
    return sw;
}

EffectiveHamiltonianCheck effective_hamiltonian_symmetry(const ModelParams& p, int site, std::span<const double> times) {
    validate_params(p);
    const FockOps ops = build_operators(p.L);
    const FockOperator h = build_hamiltonian(nearest_neighbor_pairing(p.L, p.delta, p.bc), p.mu, p.e_c, ops);
    const std::vector<double> rates(static_cast<std::size_t>(p.L), p.kappa);
    const SuperOperator liouv = build_liouvillian(h, ops.c, rates);
    const Eigen::MatrixXcd rho = steady_state(liouv);
    const FockOperator h_eff = h - cplx{0.0, 0.5 * p.kappa} * ops.total_number();
    EffectiveHamiltonianCheck out;
    out.h_then_c = two_time_correlation(liouv, rho, h_eff, ops.c[site], times);
    out.c_then_h = two_time_correlation(liouv, rho, ops.c[site], h_eff, times);
    for (std::size_t i = 0; i < times.size(); ++i)
        out.max_difference = std::max(out.max_difference, std::abs(out.h_then_c[i] - out.c_then_h[i]));
    return out;
}

}  // namespace cqa
