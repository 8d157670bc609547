#include "cqa/pseudospin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "cqa/focked.hpp"

namespace cqa {
namespace {

void require_ring(const ModelParams& p) {
    validate_params(p);
    if (p.bc != Boundary::Periodic || p.L % 2 != 0)
        throw Error(ErrorCode::BoundaryUnsupported, "momentum pairs need an even periodic ring");
}

MomentDerivative pair_rhs(const MomentState& s, double mu_eff, double delta, double kappa) {
    MomentDerivative d;
    const int n = s.pairs();
    d.d_minus.resize(static_cast<std::size_t>(n));
    d.d_z.resize(static_cast<std::size_t>(n));
    const cplx rot{-kappa, 2.0 * mu_eff};
    for (int q = 0; q < n; ++q) {
        const double drive = pair_drive(s.L, q, delta);
        const cplx sm = s.s_minus[q];
        const double sz = s.s_z[q];
        d.d_minus[q] = rot * sm + cplx{0.0, 2.0 * drive * sz};
        d.d_z[q] = -8.0 * drive * sm.imag() - kappa * (sz + 1.0);
    }
    return d;
}

MomentDerivative closed_rhs(const MomentState& s, const ModelParams& p) {
    if (s.kind == MomentKind::Fermion) return fermion_moment_rhs(s, p.mu, p.delta, p.e_c, p.kappa, pair_density(s));
    return spin_moment_rhs(s, p.mu, p.delta, p.e_c, p.kappa, magnetization(s));
}

MomentState shifted(const MomentState& s, const MomentDerivative& d, double h) {
    MomentState out = s;
    for (int q = 0; q < s.pairs(); ++q) {
        out.s_minus[q] += h * d.d_minus[q];
        out.s_z[q] += h * d.d_z[q];
    }
    return out;
}

void rk4_moment_step(MomentState& s, const ModelParams& p, double h) {
    const MomentDerivative k1 = closed_rhs(s, p);
    const MomentDerivative k2 = closed_rhs(shifted(s, k1, 0.5 * h), p);
    const MomentDerivative k3 = closed_rhs(shifted(s, k2, 0.5 * h), p);
    const MomentDerivative k4 = closed_rhs(shifted(s, k3, h), p);
    for (int q = 0; q < s.pairs(); ++q) {
        s.s_minus[q] += h / 6.0 * (k1.d_minus[q] + 2.0 * k2.d_minus[q] + 2.0 * k3.d_minus[q] + k4.d_minus[q]);
        s.s_z[q] += h / 6.0 * (k1.d_z[q] + 2.0 * k2.d_z[q] + 2.0 * k3.d_z[q] + k4.d_z[q]);
    }
    s.time += h;
}

// Local operator-basis codes; (ket, bra) with 0 = empty, P = pair, B = broken.
enum Code : int { E00 = 0, E0P = 1, EP0 = 2, EPP = 3, EBB = 4 };
constexpr std::array<int, 5> kKetN{0, 0, 2, 2, 1};
constexpr std::array<int, 5> kBraN{0, 2, 0, 2, 1};
constexpr std::array<int, 4> kKetFlip{EP0, EPP, E00, E0P};
constexpr std::array<int, 4> kBraFlip{E0P, E00, EPP, EP0};

bool is_diagonal(int code) { return code == E00 || code == EPP || code == EBB; }

void check_pseudospin(double p, cplx beta) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidState, "pair population outside [0, 1]");
    if (std::norm(beta) > p * (1.0 - p) + 1e-15) throw Error(ErrorCode::InvalidState, "|beta| exceeds sqrt(p (1 - p))");
}

Eigen::MatrixXcd pair_density_matrix(int dim, int empty, int full, double p, cplx beta) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    rho(empty, empty) = 1.0 - p;
    rho(full, full) = p;
    rho(full, empty) = beta;
    rho(empty, full) = std::conj(beta);
    return rho;
}

struct SinglePair {
    FockOps ops;
    FockOperator h;
    SuperOperator liouv;
    Eigen::MatrixXcd rho0;
    FockOperator pair_lowering;
    FockOperator number;
};

SinglePair fermion_pair(double p, cplx beta, double e_c, double kappa) {
    FockOps ops = build_operators(2);
    const FockOperator n = ops.total_number();
    const FockOperator h = cplx{0.25 * e_c, 0.0} * (n * n);
    const std::array<double, 2> rates{kappa, kappa};
    SuperOperator liouv = build_liouvillian(h, ops.c, rates);
    // k on mode 0, -k on mode 1; c_0^+ c_1^+ |0> is +|11>, basis index 3.
    FockOperator lower = ops.c[1] * ops.c[0];
    return {ops, h, std::move(liouv), pair_density_matrix(4, 0, 3, p, beta), lower, n};
}

SinglePair spin_pair(double p, cplx beta, double e_c, double kappa) {
    FockOps ops = build_operators(1);
    const FockOperator h = cplx{e_c, 0.0} * ops.n[0];
    const FockOperator sz = cplx{2.0, 0.0} * ops.n[0] - ops.identity();
    const std::vector<FockOperator> jumps{ops.c[0], sz};
    const std::array<double, 2> rates{kappa, 0.25 * kappa};
    SuperOperator liouv = build_liouvillian(h, jumps, rates);
    FockOperator lower = ops.c[0];
    const FockOperator twice_up = cplx{2.0, 0.0} * ops.n[0];
    return {ops, h, std::move(liouv), pair_density_matrix(2, 0, 1, p, beta), lower, twice_up};
}

Eigen::MatrixXcd apply_generator(const SuperOperator& liouv, const Eigen::MatrixXcd& rho) {
    return unvectorize(liouv.generator() * vectorize(rho), liouv.hilbert_dim());
}

}  // namespace

const char* to_string(MomentKind k) { return k == MomentKind::Fermion ? "fermion" : "spin"; }

int pair_count(int L) {
    if (L < 2 || L % 2 != 0) throw Error(ErrorCode::BadLength, "momentum pairs need an even ring length");
    return L / 2;
}

double pair_momentum(int L, int pair) { return 2.0 * std::numbers::pi * pair / L; }

double pair_drive(int L, int pair, double delta) { return pair == 0 ? 0.0 : delta * std::sin(pair_momentum(L, pair)); }

MomentState vacuum_moments(MomentKind kind, int L) { return coherent_moments(kind, L, 0.0, 0.0); }

MomentState coherent_moments(MomentKind kind, int L, double theta, double phi) {
    MomentState s;
    s.kind = kind;
    s.L = L;
    const int n = pair_count(L);
    s.s_minus.assign(static_cast<std::size_t>(n), 0.5 * std::sin(theta) * std::polar(1.0, phi));
    s.s_z.assign(static_cast<std::size_t>(n), -std::cos(theta));
    return s;
}

double pair_density(const MomentState& s) {
    double sum = 0.0;
    for (double z : s.s_z) sum += z + 1.0;
    return sum / s.L;
}

double magnetization(const MomentState& s) {
    double sum = 0.0;
    for (double z : s.s_z) sum += z;
    return s.s_z.empty() ? 0.0 : sum / static_cast<double>(s.s_z.size());
}

MomentDerivative fermion_moment_rhs(const MomentState& s, double mu, double delta, double e_c, double kappa, double nbar) {
    return pair_rhs(s, mu - e_c * nbar, delta, kappa);
}

MomentDerivative spin_moment_rhs(const MomentState& s, double mu, double delta, double e_c, double kappa, double mbar) {
    return pair_rhs(s, mu - 0.5 * e_c * (mbar + 1.0), delta, kappa);
}

double max_moment_step(const ModelParams& p) {
    return 0.01 / std::max({p.kappa, std::fabs(p.mu), 4.0 * p.delta, std::fabs(p.e_c)});
}

double fine_moment_step(const ModelParams& p) { return 0.25 * max_moment_step(p); }

std::vector<MomentState> integrate_moments(const MomentState& initial, const ModelParams& p,
                                           std::span<const double> sample_times, double dt) {
    require_ring(p);
    if (initial.L != p.L || initial.pairs() != pair_count(p.L))
        throw Error(ErrorCode::DimensionMismatch, "initial moments do not match the ring length");
    if (!(dt > 0.0) || dt > max_moment_step(p) * (1.0 + 1e-12))
        throw Error(ErrorCode::StepTooLarge, "dt exceeds 0.01 / max(kappa, |mu|, 4 Delta, |E_C|)");
    std::vector<MomentState> out;
    MomentState s = initial;
    for (double t : sample_times) {
        if (t < s.time) throw Error(ErrorCode::DomainError, "sample times must be non-decreasing");
        const double span = t - s.time;
        const long steps = static_cast<long>(std::ceil(span / dt - 1e-9));
        const double start = s.time;
        for (long i = 0; i < steps; ++i) rk4_moment_step(s, p, span / steps);
        s.time = steps > 0 ? t : start;
        out.push_back(s);
    }
    return out;
}

PairSectorModel::PairSectorModel(MomentKind kind, const ModelParams& p)
    : kind_(kind), params_(p), pairs_(0), local_(kind == MomentKind::Fermion ? 5 : 4), dim_(1) {
    require_ring(p);
    pairs_ = pair_count(p.L);
    for (int q = 0; q < pairs_; ++q) {
        dim_ *= static_cast<std::size_t>(local_);
        if (dim_ > (std::size_t{1} << 24)) throw Error(ErrorCode::TooLarge, "pair-sector model too large");
    }
    const double kappa = p.kappa;
    auto energy = [&](int n) { return -p.mu * n + p.e_c / (2.0 * p.L) * n * n; };

    std::vector<Eigen::Triplet<cplx>> trip;
    std::vector<int> code(static_cast<std::size_t>(pairs_));
    std::vector<std::size_t> stride(static_cast<std::size_t>(pairs_));
    for (int q = 0; q < pairs_; ++q) stride[q] = q == 0 ? 1 : stride[q - 1] * static_cast<std::size_t>(local_);
    for (std::size_t idx = 0; idx < dim_; ++idx) {
        std::size_t rest = idx;
        int n_ket = 0, n_bra = 0;
        for (int q = 0; q < pairs_; ++q) {
            code[q] = static_cast<int>(rest % static_cast<std::size_t>(local_));
            rest /= static_cast<std::size_t>(local_);
            n_ket += kKetN[code[q]];
            n_bra += kBraN[code[q]];
        }
        cplx diag{0.0, -(energy(n_ket) - energy(n_bra))};
        const int col = static_cast<int>(idx);
        for (int q = 0; q < pairs_; ++q) {
            const int c = code[q];
            if (kind_ == MomentKind::Fermion) {
                diag -= 0.5 * kappa * (kKetN[c] + kBraN[c]);
            } else {
                diag -= 0.25 * kappa * (kKetN[c] + kBraN[c]);
                if (c == E0P || c == EP0) diag -= 0.5 * kappa;
            }
            if (c != EBB) {
                const double drive = 2.0 * pair_drive(p.L, q, p.delta);
                if (drive != 0.0) {
                    const auto base = static_cast<long long>(idx) - static_cast<long long>(c * stride[q]);
                    trip.emplace_back(static_cast<int>(base + kKetFlip[c] * static_cast<long long>(stride[q])), col,
                                      cplx{0.0, -drive});
                    trip.emplace_back(static_cast<int>(base + kBraFlip[c] * static_cast<long long>(stride[q])), col,
                                      cplx{0.0, drive});
                }
            }
            const auto base = static_cast<long long>(idx) - static_cast<long long>(c * stride[q]);
            if (kind_ == MomentKind::Fermion) {
                if (c == EPP) trip.emplace_back(static_cast<int>(base + EBB * static_cast<long long>(stride[q])), col, 2.0 * kappa);
                if (c == EBB) trip.emplace_back(static_cast<int>(base), col, kappa);
            } else if (c == EPP) {
                trip.emplace_back(static_cast<int>(base), col, kappa);
            }
        }
        trip.emplace_back(col, col, diag);
    }
    SparseMatrix gen(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    gen.setFromTriplets(trip.begin(), trip.end());
    generator_ = CsrMatrix(gen);
}

std::vector<cplx> PairSectorModel::product_state(const MomentState& m) const {
    if (m.pairs() != pairs_) throw Error(ErrorCode::DimensionMismatch, "moment record has the wrong pair count");
    std::vector<std::array<cplx, 5>> local(static_cast<std::size_t>(pairs_));
    for (int q = 0; q < pairs_; ++q)
        local[q] = {0.5 * (1.0 - m.s_z[q]), std::conj(m.s_minus[q]), m.s_minus[q], 0.5 * (1.0 + m.s_z[q]), 0.0};
    std::vector<cplx> v(dim_);
    for (std::size_t idx = 0; idx < dim_; ++idx) {
        std::size_t rest = idx;
        cplx val = 1.0;
        for (int q = 0; q < pairs_ && val != cplx{}; ++q) {
            val *= local[q][rest % static_cast<std::size_t>(local_)];
            rest /= static_cast<std::size_t>(local_);
        }
        v[idx] = val;
    }
    return v;
}

MomentState PairSectorModel::moments(std::span<const cplx> state, double time) const {
    MomentState m;
    m.kind = kind_;
    m.L = params_.L;
    m.time = time;
    m.s_minus.assign(static_cast<std::size_t>(pairs_), cplx{});
    m.s_z.assign(static_cast<std::size_t>(pairs_), 0.0);
    std::vector<int> code(static_cast<std::size_t>(pairs_));
    for (std::size_t idx = 0; idx < dim_; ++idx) {
        if (state[idx] == cplx{}) continue;
        std::size_t rest = idx;
        int off = 0, off_pair = -1;
        for (int q = 0; q < pairs_; ++q) {
            code[q] = static_cast<int>(rest % static_cast<std::size_t>(local_));
            rest /= static_cast<std::size_t>(local_);
            if (!is_diagonal(code[q])) {
                ++off;
                off_pair = q;
            }
        }
        if (off == 0) {
            for (int q = 0; q < pairs_; ++q) m.s_z[q] += (kKetN[code[q]] - 1) * state[idx].real();
        } else if (off == 1 && code[off_pair] == EP0) {
            m.s_minus[off_pair] += state[idx];
        }
    }
    return m;
}

double PairSectorModel::trace(std::span<const cplx> state) const {
    double tr = 0.0;
    for (std::size_t idx = 0; idx < dim_; ++idx) {
        std::size_t rest = idx;
        bool diag = true;
        for (int q = 0; q < pairs_ && diag; ++q) {
            diag = is_diagonal(static_cast<int>(rest % static_cast<std::size_t>(local_)));
            rest /= static_cast<std::size_t>(local_);
        }
        if (diag) tr += state[idx].real();
    }
    return tr;
}

double PairSectorModel::energy(std::span<const cplx> state) const {
    double e = 0.0;
    for (std::size_t idx = 0; idx < dim_; ++idx) {
        std::size_t rest = idx;
        bool diag = true;
        int n = 0;
        for (int q = 0; q < pairs_ && diag; ++q) {
            const int c = static_cast<int>(rest % static_cast<std::size_t>(local_));
            rest /= static_cast<std::size_t>(local_);
            diag = is_diagonal(c);
            n += kKetN[c];
        }
        if (diag) e += (-params_.mu * n + params_.e_c / (2.0 * params_.L) * n * n) * state[idx].real();
    }
    return e;
}

std::vector<MomentState> PairSectorModel::evolve(const MomentState& initial, std::span<const double> times) const {
    std::vector<cplx> v = product_state(initial);
    std::vector<MomentState> out;
    double now = initial.time;
    for (double t : times) {
        if (t < now) throw Error(ErrorCode::DomainError, "sample times must be non-decreasing");
        if (t > now) v = expm_multiply(generator_, v, t - now);
        now = t;
        out.push_back(moments(v, t));
    }
    return out;
}

double max_moment_difference(std::span<const MomentState> a, std::span<const MomentState> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "trajectories differ in length");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].pairs() != b[i].pairs()) throw Error(ErrorCode::DimensionMismatch, "moment records differ in size");
        for (int q = 0; q < a[i].pairs(); ++q) {
            worst = std::max(worst, std::abs(a[i].s_minus[q] - b[i].s_minus[q]));
            worst = std::max(worst, std::fabs(a[i].s_z[q] - b[i].s_z[q]));
        }
    }
    return worst;
}

BreakdownReport interaction_breakdown(double p, cplx beta_coh, double e_c, double kappa) {
    check_pseudospin(p, beta_coh);
    if (!(kappa > 0.0)) throw Error(ErrorCode::NonPositiveKappa, "kappa must be positive");
    const SinglePair f = fermion_pair(p, beta_coh, e_c, kappa);
    const SinglePair s = spin_pair(p, beta_coh, e_c, kappa);
    const Eigen::MatrixXcd df = apply_generator(f.liouv, f.rho0);
    const Eigen::MatrixXcd ds = apply_generator(s.liouv, s.rho0);

    BreakdownReport r;
    r.p = p;
    r.beta_coh = beta_coh;
    r.dH_fermi = expectation(df, f.h).real();
    r.dH_spin = expectation(ds, s.h).real();
    r.d_pair_fermi = expectation(df, f.pair_lowering);
    r.d_pair_spin = expectation(ds, s.pair_lowering);
    r.d_sz_fermi = expectation(df, f.number).real();
    r.d_sz_spin = expectation(ds, s.number).real();
    r.ratio_defined = r.dH_spin != 0.0;
    r.ratio = r.ratio_defined ? r.dH_fermi / r.dH_spin : std::numeric_limits<double>::quiet_NaN();
    return r;
}

BreakdownTrace interaction_breakdown_trace(double p, cplx beta_coh, double e_c, double kappa, std::span<const double> times) {
    check_pseudospin(p, beta_coh);
    if (!(kappa > 0.0)) throw Error(ErrorCode::NonPositiveKappa, "kappa must be positive");
    const SinglePair f = fermion_pair(p, beta_coh, e_c, kappa);
    const SinglePair s = spin_pair(p, beta_coh, e_c, kappa);
    BreakdownTrace tr;
    tr.times.assign(times.begin(), times.end());
    for (const auto& v : evolve(f.liouv, vectorize(f.rho0), times)) {
        const Eigen::MatrixXcd rho = unvectorize(v, f.liouv.hilbert_dim());
        tr.energy_fermi.push_back(expectation(rho, f.h).real());
        tr.sz_fermi.push_back(expectation(rho, f.number).real() - 1.0);
    }
    for (const auto& v : evolve(s.liouv, vectorize(s.rho0), times)) {
        const Eigen::MatrixXcd rho = unvectorize(v, s.liouv.hilbert_dim());
        tr.energy_spin.push_back(expectation(rho, s.h).real());
        tr.sz_spin.push_back(expectation(rho, s.number).real() - 1.0);
    }
    return tr;
}

}  // namespace cqa
