#include "cqa/kernels.hpp"

#include <cmath>

namespace cqa::kernels::scalar {

double sum_exp_shifted(std::span<const double> x, double shift) {
    double acc = 0.0;
    for (double v : x) acc += std::exp(v - shift);
    return acc;
}

void csr_matvec(const CsrView& a, std::span<const cplx> x, std::span<cplx> y) {
    for (std::int32_t r = 0; r < a.rows; ++r) {
        double re = 0.0, im = 0.0;
        for (std::int32_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
            const cplx v = a.vals[k];
            const cplx u = x[a.cols[k]];
            re += v.real() * u.real() - v.imag() * u.imag();
            im += v.real() * u.imag() + v.imag() * u.real();
        }
        y[r] = {re, im};
    }
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    const double ar = alpha.real(), ai = alpha.imag();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = {y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr};
    }
}

double max_abs_component(std::span<const cplx> x) {
    double m = 0.0;
    for (const cplx& v : x) m = std::fmax(m, std::fmax(std::fabs(v.real()), std::fabs(v.imag())));
    return m;
}

}  // namespace cqa::kernels::scalar
