#include "cqa/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace cqa {

CsrMatrix::CsrMatrix(const SparseMatrix& m) {
    const Eigen::SparseMatrix<cplx, Eigen::RowMajor, int> r(m);
    rows_ = static_cast<std::int32_t>(r.rows());
    row_ptr_.assign(r.outerIndexPtr(), r.outerIndexPtr() + r.rows() + 1);
    const auto nnz = static_cast<std::size_t>(r.nonZeros());
    cols_.assign(r.innerIndexPtr(), r.innerIndexPtr() + nnz);
    vals_.assign(r.valuePtr(), r.valuePtr() + nnz);
}

kernels::CsrView CsrMatrix::view() const { return {rows_, row_ptr_, cols_, vals_}; }

void CsrMatrix::multiply(std::span<const cplx> x, std::span<cplx> y) const { kernels::csr_matvec(view(), x, y); }

double CsrMatrix::norm1() const {
    std::vector<double> col(static_cast<std::size_t>(rows_), 0.0);
    for (std::size_t k = 0; k < vals_.size(); ++k) col[static_cast<std::size_t>(cols_[k])] += std::abs(vals_[k]);
    return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
}

void rk4_step(const CsrMatrix& a, std::span<cplx> y, double h, std::vector<cplx>& work) {
    const std::size_t n = y.size();
    work.resize(4 * n);
    std::span<cplx> k(work.data(), n), tmp(work.data() + n, n), acc(work.data() + 2 * n, n);
    std::copy(y.begin(), y.end(), acc.begin());

    a.multiply(y, k);  // k1
    kernels::axpy(h / 6.0, k, acc);
    std::copy(y.begin(), y.end(), tmp.begin());
    kernels::axpy(h / 2.0, k, tmp);

    a.multiply(tmp, k);  // k2
    kernels::axpy(h / 3.0, k, acc);
    std::copy(y.begin(), y.end(), tmp.begin());
    kernels::axpy(h / 2.0, k, tmp);

    a.multiply(tmp, k);  // k3
    kernels::axpy(h / 3.0, k, acc);
    std::copy(y.begin(), y.end(), tmp.begin());
    kernels::axpy(h, k, tmp);

    a.multiply(tmp, k);  // k4
    kernels::axpy(h / 6.0, k, acc);
    std::copy(acc.begin(), acc.end(), y.begin());
}

std::vector<cplx> expm_multiply(const CsrMatrix& a, std::span<const cplx> v, double t, double tol, double theta) {
    std::vector<cplx> out(v.begin(), v.end());
    if (t == 0.0) return out;
    const double norm = a.norm1() * std::fabs(t);
    const int steps = std::max(1, static_cast<int>(std::ceil(norm / theta)));
    const double h = t / steps;
    std::vector<cplx> term(v.size()), next(v.size());
    for (int s = 0; s < steps; ++s) {
        std::copy(out.begin(), out.end(), term.begin());
        for (int k = 1; k < 200; ++k) {
            a.multiply(term, next);
            const double scale = h / k;
            for (std::size_t i = 0; i < next.size(); ++i) next[i] *= scale;
            kernels::axpy(1.0, next, out);
            std::swap(term, next);
            const double size = kernels::max_abs_component(term);
            if (k > theta && size <= tol * kernels::max_abs_component(out)) break;
        }
    }
    return out;
}

}  // namespace cqa
