#pragma once

#include <vector>

#include "cqa/core.hpp"

namespace cqa {

// Pure-state coefficients of the absorber construction, restricted to the
// dark modes. Everything here is a dark-mode quantity unless the name says
// otherwise; see physical_quadratic() for the conversion.
struct CoefficientTable {
    ModelParams params;
    int n_max = 0;
    std::vector<LogComplex> alpha;   // alpha[0] == 1
    std::vector<double> log_count;   // ln N(L, n)
    double log_norm = 0.0;           // ln sum |alpha_n|^2 N(L, n)
    std::vector<double> p;           // pair-number distribution, sums to 1
};

int max_pairs(int L, Boundary bc);

CoefficientTable build_coefficients(const ModelParams& params);

// Direct complex products without the log representation; only sensible for
// small L and used to cross-check the log path.
std::vector<cplx> alpha_native(const ModelParams& params);

// Physical per-site density of the chain, (1/L) sum n p_n.
double mean_density(const CoefficientTable& tbl);

// <N^m> over dark modes.
double number_moment(const CoefficientTable& tbl, int m);

// <(B^dagger)^m> with B^dagger = sum_j c_j^dagger c_{j+1}^dagger.
cplx pair_expectation(const CoefficientTable& tbl, int m);

// <c_1^dagger c_{2m}^dagger>, 1 <= m <= L/2. Even-length rings only.
cplx anomalous_correlation(const CoefficientTable& tbl, int m);

// <c_1^dagger c_{2m+1}>, 0 <= m <= L/2. Even-length rings only.
double normal_correlation(const CoefficientTable& tbl, int m);

// Dark-mode quadratic correlators are twice the physical ones.
inline double physical_quadratic(double dark) { return 0.5 * dark; }
inline cplx physical_quadratic(cplx dark) { return 0.5 * dark; }

}  // namespace cqa
