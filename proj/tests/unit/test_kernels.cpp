#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cqa/kernels.hpp"
#include "cqa/sparse.hpp"
#include "doctest.h"

using namespace cqa;
using namespace cqa::kernels;

namespace {

std::vector<cplx> random_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& x : v) x = {g(rng), g(rng)};
    return v;
}

SparseMatrix random_sparse(int n, double density, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;
    std::vector<Eigen::Triplet<cplx>> t;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (u(rng) < density) t.emplace_back(r, c, cplx{g(rng), g(rng)});
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("active ISA is available") {
    CHECK(isa_available(Isa::Scalar));
    CHECK(isa_available(active_isa()));
}

TEST_CASE("sum_exp_shifted: vector variant matches scalar reference") {
    if (!isa_available(Isa::Avx2)) return;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-700.0, 0.0);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u, 1003u}) {
        std::vector<double> x(n);
        for (auto& v : x) v = u(rng);
        if (n > 2) x[1] = -std::numeric_limits<double>::infinity();
        const double ref = scalar::sum_exp_shifted(x, 0.0);
        const double vec = avx2::sum_exp_shifted(x, 0.0);
        CHECK(vec == doctest::Approx(ref).epsilon(1e-13));
    }
    // Subnormal and deep underflow region.
    std::vector<double> deep{-744.0, -745.5, -800.0, -708.0, -1.0};
    CHECK(avx2::sum_exp_shifted(deep, 0.0) == doctest::Approx(scalar::sum_exp_shifted(deep, 0.0)).epsilon(1e-13));
}

TEST_CASE("csr_matvec, axpy and max_abs agree across ISAs") {
    if (!isa_available(Isa::Avx2)) return;
    std::mt19937_64 rng(11);
    for (int n : {1, 2, 5, 64, 301}) {
        const SparseMatrix m = random_sparse(n, 0.1, rng);
        const CsrMatrix csr(m);
        const auto x = random_vector(static_cast<std::size_t>(n), rng);
        std::vector<cplx> ys(static_cast<std::size_t>(n)), yv(static_cast<std::size_t>(n));
        scalar::csr_matvec(csr.view(), x, ys);
        avx2::csr_matvec(csr.view(), x, yv);
        for (int i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) <= 1e-13 * (1.0 + std::abs(ys[i])));

        auto as = ys, av = ys;
        scalar::axpy({0.3, -1.1}, x, as);
        avx2::axpy({0.3, -1.1}, x, av);
        for (int i = 0; i < n; ++i) CHECK(std::abs(as[i] - av[i]) <= 1e-14 * (1.0 + std::abs(as[i])));
        CHECK(scalar::max_abs_component(x) == avx2::max_abs_component(x));
    }
}

TEST_CASE("dispatcher follows force_isa") {
    const Isa before = active_isa();
    force_isa(Isa::Scalar);
    CHECK(active_isa() == Isa::Scalar);
    std::mt19937_64 rng(3);
    const SparseMatrix m = random_sparse(40, 0.2, rng);
    const auto x = random_vector(40, rng);
    std::vector<cplx> y(40);
    CsrMatrix(m).multiply(x, y);
    const Eigen::VectorXcd ref = m * Eigen::Map<const Eigen::VectorXcd>(x.data(), 40);
    for (int i = 0; i < 40; ++i) CHECK(std::abs(y[i] - ref(i)) < 1e-12);
    force_isa(before);
    CHECK(active_isa() == before);
}

TEST_CASE("expm_multiply against step-doubled RK4 and a dense exponential") {
    std::mt19937_64 rng(5);
    const int n = 12;
    SparseMatrix m = random_sparse(n, 0.4, rng);
    m *= 0.3;
    const CsrMatrix csr(m);
    const auto v = random_vector(n, rng);
    const double t = 3.0;
    const auto taylor = expm_multiply(csr, v, t);

    const Eigen::MatrixXcd dense = Eigen::MatrixXcd(m);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(dense);
    const Eigen::MatrixXcd expm = es.eigenvectors() * (es.eigenvalues() * t).array().exp().matrix().asDiagonal() *
                                  es.eigenvectors().inverse();
    const Eigen::VectorXcd ref = expm * Eigen::Map<const Eigen::VectorXcd>(v.data(), n);
    for (int i = 0; i < n; ++i) CHECK(std::abs(taylor[i] - ref(i)) < 1e-10 * (1.0 + ref.norm()));

    // RK4 at h and h/2 bracket the Taylor result with fourth-order error ratio.
    auto rk = [&](int steps) {
        std::vector<cplx> y = v, work;
        for (int s = 0; s < steps; ++s) rk4_step(csr, y, t / steps, work);
        double err = 0.0;
        for (int i = 0; i < n; ++i) err = std::max(err, std::abs(y[i] - taylor[i]));
        return err;
    };
    const double e1 = rk(50), e2 = rk(100);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
}

}  // TEST_SUITE
