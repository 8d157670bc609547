#include "cqa/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace cqa::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(CQA_FERMI_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() {
    if (const char* env = std::getenv("CQA_FERMI_ISA"); env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (!isa_available(isa)) throw std::runtime_error(std::string("ISA not available: ") + to_string(isa));
    current().store(isa, std::memory_order_relaxed);
}

#if defined(CQA_FERMI_HAVE_AVX2)
#define CQA_DISPATCH(fn, ...) \
    (active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define CQA_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double sum_exp_shifted(std::span<const double> x, double shift) { return CQA_DISPATCH(sum_exp_shifted, x, shift); }

void csr_matvec(const CsrView& a, std::span<const cplx> x, std::span<cplx> y) { CQA_DISPATCH(csr_matvec, a, x, y); }

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) { CQA_DISPATCH(axpy, alpha, x, y); }

double max_abs_component(std::span<const cplx> x) { return CQA_DISPATCH(max_abs_component, x); }

#undef CQA_DISPATCH

#if !defined(CQA_FERMI_HAVE_AVX2)
// Non-x86 builds keep the symbols so equivalence tests link; they forward to
// the reference path.
namespace avx2 {
double sum_exp_shifted(std::span<const double> x, double shift) { return scalar::sum_exp_shifted(x, shift); }
void csr_matvec(const CsrView& a, std::span<const cplx> x, std::span<cplx> y) { scalar::csr_matvec(a, x, y); }
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) { scalar::axpy(alpha, x, y); }
double max_abs_component(std::span<const cplx> x) { return scalar::max_abs_component(x); }
}  // namespace avx2
#endif

}  // namespace cqa::kernels
