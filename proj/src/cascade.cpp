#include <algorithm>
#include <bit>
#include <cmath>

#include "cqa/focked.hpp"

namespace cqa {
namespace {

struct CascadeRun {
    std::vector<Eigen::MatrixXcd> system;
    std::vector<double> absorber_first_density;
};

CascadeRun run_cascade(const ModelParams& p, double absorber_shift, std::span<const double> times) {
    const FockOps ops = build_operators(2 * p.L);
    const PairingMatrix pairing = nearest_neighbor_pairing(p.L, p.delta, p.bc);
    const FockOperator h = build_cqa_hamiltonian(pairing, p.mu, p.e_c, p.kappa, ops, absorber_shift);
    const std::vector<FockOperator> jumps = build_cqa_jumps(p.L, 1.0, ops);
    const std::vector<double> rates(jumps.size(), p.kappa);
    const SuperOperator liouv = build_liouvillian(h, jumps, rates);

    const int d = static_cast<int>(h.dim());
    Eigen::MatrixXcd vacuum = Eigen::MatrixXcd::Zero(d, d);
    vacuum(0, 0) = 1.0;
    CascadeRun run;
    for (const auto& v : evolve(liouv, vectorize(vacuum), times)) {
        const Eigen::MatrixXcd rho = unvectorize(v, d);
        run.system.push_back(partial_trace_absorber(rho, p.L));
        run.absorber_first_density.push_back(expectation(rho, ops.n[p.L]).real());
    }
    return run;
}

}  // namespace

NonreciprocityReport cascade_nonreciprocity_check(const ModelParams& p, double absorber_tweak, std::span<const double> times) {
    validate_params(p);
    if (2 * p.L > kMaxFockModes) throw Error(ErrorCode::TooManyModes, "doubled system limited to 2L <= 16");
    const CascadeRun base = run_cascade(p, 0.0, times);
    const CascadeRun tweaked = run_cascade(p, absorber_tweak * p.mu, times);

    NonreciprocityReport rep;
    for (std::size_t t = 0; t < times.size(); ++t) {
        const Eigen::MatrixXcd& a = base.system[t];
        const Eigen::MatrixXcd& b = tweaked.system[t];
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            for (Eigen::Index r = 0; r < a.rows(); ++r) {
                if ((std::popcount(static_cast<unsigned>(r)) ^ std::popcount(static_cast<unsigned>(c))) & 1) continue;
                rep.max_system_difference = std::max(rep.max_system_difference, std::abs(a(r, c) - b(r, c)));
            }
        rep.max_absorber_difference = std::max(
            rep.max_absorber_difference, std::abs(base.absorber_first_density[t] - tweaked.absorber_first_density[t]));
    }
    return rep;
}

}  // namespace cqa
