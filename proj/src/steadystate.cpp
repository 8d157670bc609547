#include "cqa/steadystate.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "cqa/combinatorics.hpp"

namespace cqa {
namespace {

void require_even_ring(const CoefficientTable& tbl) {
    if (tbl.params.bc != Boundary::Periodic || tbl.params.L % 2 != 0)
        throw Error(ErrorCode::BoundaryUnsupported, "closed-form correlations need an even-length ring");
}

// conj(alpha_n) alpha_{n-shift} * exp(log_comb) / N_cqa, kept in log form.
LogComplex weighted(const CoefficientTable& tbl, int n, int shift_pair, double log_comb) {
    LogComplex t = tbl.alpha[n].conj() * tbl.alpha[n - shift_pair];
    return LogComplex{t.log_mag() + log_comb - tbl.log_norm, t.phase()};
}

}  // namespace

int max_pairs(int L, Boundary bc) {
    if (bc == Boundary::Periodic && L % 2 == 0) return L / 2 - 1;
    return L / 2;
}

CoefficientTable build_coefficients(const ModelParams& params) {
    validate_params(params);
    CoefficientTable tbl;
    tbl.params = params;
    tbl.n_max = max_pairs(params.L, params.bc);
    const int count = tbl.n_max + 1;
    tbl.alpha.reserve(count);
    tbl.log_count.reserve(count);

    const LogComplex pairing = LogComplex::from_real(params.delta);
    const cplx mu_t = params.mu_tilde();
    tbl.alpha.push_back(LogComplex::one());
    for (int n = 1; n <= tbl.n_max; ++n) {
        const cplx denom = mu_t - (static_cast<double>(n) / params.L) * params.e_c;
        tbl.alpha.push_back(tbl.alpha.back() * pairing / LogComplex::from(denom));
    }

    std::vector<double> log_w(count);
    for (int n = 0; n < count; ++n) {
        tbl.log_count.push_back(log_count(params.L, n, params.bc));
        log_w[n] = 2.0 * tbl.alpha[n].log_mag() + tbl.log_count[n];
    }
    tbl.log_norm = log_sum_exp(log_w);
    tbl.p.resize(count);
    for (int n = 0; n < count; ++n) tbl.p[n] = std::exp(log_w[n] - tbl.log_norm);
    return tbl;
}

std::vector<cplx> alpha_native(const ModelParams& params) {
    validate_params(params);
    const int n_max = max_pairs(params.L, params.bc);
    std::vector<cplx> out{cplx{1.0, 0.0}};
    for (int n = 1; n <= n_max; ++n)
        out.push_back(out.back() * params.delta / (params.mu_tilde() - (static_cast<double>(n) / params.L) * params.e_c));
    return out;
}

double mean_density(const CoefficientTable& tbl) {
    double acc = 0.0;
    for (int n = 1; n <= tbl.n_max; ++n) acc += n * tbl.p[n];
    return acc / tbl.params.L;
}

double number_moment(const CoefficientTable& tbl, int m) {
    if (m < 1) throw Error(ErrorCode::OutOfRange, "moment order must be at least 1");
    double acc = 0.0;
    for (int n = 1; n <= tbl.n_max; ++n) acc += std::pow(2.0 * n, m) * tbl.p[n];
    return acc;
}

cplx pair_expectation(const CoefficientTable& tbl, int m) {
    if (m < 1) throw Error(ErrorCode::OutOfRange, "power must be at least 1");
    using boost::math::lgamma;
    std::vector<LogComplex> terms;
    for (int n = m; n <= tbl.n_max; ++n) {
        const double falling = lgamma(n + 1.0) - lgamma(n - m + 1.0);
        terms.push_back(weighted(tbl, n, m, falling + tbl.log_count[n]));
    }
    return log_sum(terms).value();
}

cplx anomalous_correlation(const CoefficientTable& tbl, int m) {
    require_even_ring(tbl);
    const int L = tbl.params.L;
    const int half = L / 2;
    if (m < 1 || m > half) throw Error(ErrorCode::OutOfRange, "m must lie in [1, L/2], got " + std::to_string(m));
    std::vector<LogComplex> terms;
    for (int n = m; n <= tbl.n_max; ++n) terms.push_back(weighted(tbl, n, 1, log_binomial(L - n - m, n - m)));
    for (int n = std::max(1, half - m + 1); n <= tbl.n_max; ++n)
        terms.push_back(-weighted(tbl, n, 1, log_binomial(half - n + m - 1, n - half + m - 1)));
    return log_sum(terms).value();
}

double normal_correlation(const CoefficientTable& tbl, int m) {
    require_even_ring(tbl);
    const int L = tbl.params.L;
    const int half = L / 2;
    if (m < 0 || m > half) throw Error(ErrorCode::OutOfRange, "m must lie in [0, L/2], got " + std::to_string(m));
    double removed = 0.0;
    for (int n = std::max(m, 0); n <= tbl.n_max; ++n)
        removed += tbl.p[n] * std::exp(log_binomial(L - n - m - 1, n - m) - tbl.log_count[n]);
    for (int n = std::max(half - m, 0); n <= tbl.n_max; ++n)
        removed += tbl.p[n] * std::exp(log_binomial(half - n + m - 1, n - half + m) - tbl.log_count[n]);
    // m = L/2 wraps back onto site 1.
    return (m == 0 || m == half ? 1.0 : 0.0) - removed;
}

}  // namespace cqa
