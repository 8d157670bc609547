#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "cqa/kernels.hpp"

namespace cqa {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;

// Row-compressed copy of a sparse operator for the SIMD mat-vec kernel.
class CsrMatrix {
public:
    CsrMatrix() = default;
    explicit CsrMatrix(const SparseMatrix& m);

    std::int32_t rows() const { return rows_; }
    std::size_t nnz() const { return vals_.size(); }
    kernels::CsrView view() const;

    void multiply(std::span<const cplx> x, std::span<cplx> y) const;
    double norm1() const;  // max column sum of |a_ij|

private:
    std::int32_t rows_ = 0;
    std::vector<std::int32_t> row_ptr_;
    std::vector<std::int32_t> cols_;
    std::vector<cplx> vals_;
};

// Classical RK4 for y' = A y, in place. `work` must hold 4 * y.size().
void rk4_step(const CsrMatrix& a, std::span<cplx> y, double h, std::vector<cplx>& work);

// exp(t A) v by norm-scaled Taylor sums. Each substep keeps h |A|_1 <= theta
// and truncates once a term drops below tol relative to the partial sum.
std::vector<cplx> expm_multiply(const CsrMatrix& a, std::span<const cplx> v, double t, double tol = 1e-15,
                                double theta = 4.0);

}  // namespace cqa
