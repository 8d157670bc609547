#include "cqa/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace cqa::kernels::avx2 {
namespace {

// Cephes-style exp: range reduction by ln 2 and a (2,3) Pade form on the
// remainder. Inputs below -708 flush to zero, which is what the log-sum-exp
// caller wants after shifting by the maximum.
inline __m256d exp_pd(__m256d x) {
    const __m256d hi = _mm256_set1_pd(709.0);
    const __m256d lo = _mm256_set1_pd(-708.0);
    const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
    x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125E-1), x);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212E-6), r);
    const __m256d rr = _mm256_mul_pd(r, r);

    __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
    p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(3.02994407707441961300E-2));
    p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(9.99999999999999999910E-1));
    p = _mm256_mul_pd(p, r);

    __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.52448340349684104192E-3));
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.27265548208155028766E-1));
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.00000000000000000009E0));

    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_fmadd_pd(e, _mm256_set1_pd(2.0), _mm256_set1_pd(1.0));

    // 2^n through the exponent field; n is within [-1022, 1023] after clamping.
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i bits = _mm256_cvtepi32_epi64(n32);
    bits = _mm256_slli_epi64(_mm256_add_epi64(bits, _mm256_set1_epi64x(1023)), 52);
    e = _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
    return _mm256_andnot_pd(underflow, e);
}

inline double hsum(__m256d v) {
    const __m128d s = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Two complex products at once: lanes hold (re0, im0, re1, im1).
inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d a_re = _mm256_movedup_pd(a);
    const __m256d a_im = _mm256_permute_pd(a, 0xF);
    const __m256d b_swap = _mm256_permute_pd(b, 0x5);
    return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_swap));
}

}  // namespace

double sum_exp_shifted(std::span<const double> x, double shift) {
    const __m256d s = _mm256_set1_pd(shift);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= x.size(); i += 4) acc = _mm256_add_pd(acc, exp_pd(_mm256_sub_pd(_mm256_loadu_pd(&x[i]), s)));
    double total = hsum(acc);
    for (; i < x.size(); ++i) total += std::exp(x[i] - shift);
    return total;
}

void csr_matvec(const CsrView& a, std::span<const cplx> x, std::span<cplx> y) {
    const double* xd = reinterpret_cast<const double*>(x.data());
    const double* vd = reinterpret_cast<const double*>(a.vals.data());
    for (std::int32_t r = 0; r < a.rows; ++r) {
        std::int32_t k = a.row_ptr[r];
        const std::int32_t end = a.row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        for (; k + 2 <= end; k += 2) {
            const __m256d v = _mm256_loadu_pd(vd + 2 * k);
            const __m256d u = _mm256_set_m128d(_mm_loadu_pd(xd + 2 * a.cols[k + 1]), _mm_loadu_pd(xd + 2 * a.cols[k]));
            acc = _mm256_add_pd(acc, cmul(v, u));
        }
        __m128d s = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
        if (k < end) {
            const __m128d v = _mm_loadu_pd(vd + 2 * k);
            const __m128d u = _mm_loadu_pd(xd + 2 * a.cols[k]);
            const __m128d prod = _mm_fmaddsub_pd(_mm_movedup_pd(v), u, _mm_mul_pd(_mm_permute_pd(v, 0x3), _mm_permute_pd(u, 0x1)));
            s = _mm_add_pd(s, prod);
        }
        _mm_storeu_pd(reinterpret_cast<double*>(&y[r]), s);
    }
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    const __m256d al = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
    const double* xd = reinterpret_cast<const double*>(x.data());
    double* yd = reinterpret_cast<double*>(y.data());
    std::size_t i = 0;
    for (; i + 2 <= x.size(); i += 2) {
        const __m256d prod = cmul(al, _mm256_loadu_pd(xd + 2 * i));
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), prod));
    }
    if (i < x.size()) y[i] += alpha * x[i];
}

double max_abs_component(std::span<const cplx> x) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const double* xd = reinterpret_cast<const double*>(x.data());
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= x.size(); i += 2) m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(xd + 2 * i)));
    const __m128d h = _mm_max_pd(_mm256_castpd256_pd128(m), _mm256_extractf128_pd(m, 1));
    double out = std::fmax(_mm_cvtsd_f64(h), _mm_cvtsd_f64(_mm_unpackhi_pd(h, h)));
    if (i < x.size()) out = std::fmax(out, std::fmax(std::fabs(x[i].real()), std::fabs(x[i].imag())));
    return out;
}

}  // namespace cqa::kernels::avx2
