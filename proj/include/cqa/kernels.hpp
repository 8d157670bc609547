#pragma once

#include <complex>
#include <cstdint>
#include <span>

// Hot inner loops with a scalar reference implementation and an AVX2 variant.
// The variant is picked once at startup from CPUID; CQA_FERMI_ISA=scalar in the
// environment pins the reference path.
namespace cqa::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
void force_isa(Isa isa);  // throws if unavailable on this CPU

// Compressed sparse rows; indices are 32-bit because the largest operator
// (4^8 rows) is far below the limit.
struct CsrView {
    std::int32_t rows = 0;
    std::span<const std::int32_t> row_ptr;
    std::span<const std::int32_t> cols;
    std::span<const cplx> vals;
};

// Σ exp(x_i - shift). Entries equal to -inf contribute zero.
double sum_exp_shifted(std::span<const double> x, double shift);

// y = A x
void csr_matvec(const CsrView& a, std::span<const cplx> x, std::span<cplx> y);

// y += alpha x
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);

// max_i |x_i|_1 style cheap norm: max(|re|, |im|) over entries
double max_abs_component(std::span<const cplx> x);

namespace scalar {
double sum_exp_shifted(std::span<const double> x, double shift);
void csr_matvec(const CsrView& a, std::span<const cplx> x, std::span<cplx> y);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
double max_abs_component(std::span<const cplx> x);
}  // namespace scalar

namespace avx2 {
double sum_exp_shifted(std::span<const double> x, double shift);
void csr_matvec(const CsrView& a, std::span<const cplx> x, std::span<cplx> y);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
double max_abs_component(std::span<const cplx> x);
}  // namespace avx2

}  // namespace cqa::kernels
