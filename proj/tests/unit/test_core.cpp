#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cqa/core.hpp"
#include "doctest.h"

using namespace cqa;

TEST_SUITE("core") {

TEST_CASE("LogComplex round trip and arithmetic") {
    const cplx a{0.3, -1.7}, b{-2.5, 0.25};
    CHECK(std::abs(LogComplex::from(a).value() - a) < 1e-15);
    CHECK(std::abs((LogComplex::from(a) * LogComplex::from(b)).value() - a * b) < 1e-14);
    CHECK(std::abs((LogComplex::from(a) / LogComplex::from(b)).value() - a / b) < 1e-14);
    CHECK(std::abs(LogComplex::from(a).conj().value() - std::conj(a)) < 1e-15);
    CHECK(std::abs((-LogComplex::from(a)).value() + a) < 1e-15);
    CHECK(LogComplex::from(0.0).is_zero());
    CHECK(LogComplex::from_real(-2.0).value().real() == doctest::Approx(-2.0));
    CHECK_THROWS_AS(LogComplex::one() / LogComplex::zero(), Error);
}

TEST_CASE("LogComplex survives magnitudes far outside double range") {
    LogComplex big = LogComplex::one();
    const LogComplex step = LogComplex::from({1e200, 1e200});
    for (int i = 0; i < 10; ++i) big *= step;
    CHECK(std::isfinite(big.log_mag()));
    CHECK(big.log_mag() == doctest::Approx(10 * std::log(std::sqrt(2.0) * 1e200)));
    CHECK(wrap_phase(big.phase()) == doctest::Approx(wrap_phase(10 * std::numbers::pi / 4)).epsilon(1e-12));
}

TEST_CASE("log_sum matches direct sum with cancellation") {
    const std::vector<cplx> zs{{1.0, 2.0}, {-0.5, 0.1}, {3.0, -4.0}, {-3.5, 1.9}};
    std::vector<LogComplex> logs;
    cplx direct = 0.0;
    for (auto z : zs) {
        logs.push_back(LogComplex::from(z));
        direct += z;
    }
    CHECK(std::abs(log_sum(logs).value() - direct) < 1e-14);

    std::vector<LogComplex> scaled;
    for (auto z : zs) scaled.push_back(LogComplex::from(z) * LogComplex(800.0, 0.0));
    // The terms cancel exactly; what is left is the ulp of a log-magnitude near 800 times |z|.
    CHECK(std::abs(log_sum(scaled).value_scaled(800.0) - direct) < 5.0 * 800.0 * 1e-15);
    CHECK(log_sum(std::vector<LogComplex>{}).is_zero());
}

TEST_CASE("log_sum_exp") {
    const std::vector<double> xs{1000.0, 1000.0, -std::numeric_limits<double>::infinity()};
    CHECK(log_sum_exp(xs) == doctest::Approx(1000.0 + std::log(2.0)));
    CHECK(std::isinf(log_sum_exp(std::vector<double>{})));
    const std::vector<double> small{std::log(0.25), std::log(0.5)};
    CHECK(log_sum_exp(small) == doctest::Approx(std::log(0.75)));
}

TEST_CASE("parameter validation") {
    ModelParams p{6, Boundary::Periodic, 0.2, 0.1, 1.0, 0.01};
    CHECK_NOTHROW(validate_params(p));
    p.kappa = 0.0;
    CHECK_THROWS_AS(validate_params(p), Error);
    try {
        validate_params(p);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPositiveKappa);
        CHECK_FALSE(e.is_numerical_guard());
    }
    p.kappa = 0.01;
    p.L = 1;
    CHECK_THROWS_AS(validate_params(p), Error);
    p.L = 5;
    std::vector<std::string> warnings;
    validate_params(p, &warnings);
    CHECK(warnings.size() == 1);
    p.delta = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate_params(p), Error);
    CHECK(parse_boundary("obc") == Boundary::Open);
    CHECK_THROWS_AS(parse_boundary("ring"), Error);
    CHECK(Error(ErrorCode::DegenerateKernel, "x").is_numerical_guard());
}

TEST_CASE("pairing matrices") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(PairingMatrix{m}, Error);
    m(1, 0) = -1.0;
    const PairingMatrix pm(m);
    CHECK(pm.norm() == doctest::Approx(std::sqrt(2.0)));
    CHECK(pm.normalized().norm() == doctest::Approx(1.0));

    const PairingMatrix ring = nearest_neighbor_pairing(6, 0.4, Boundary::Periodic);
    CHECK(ring(5, 0) == cplx{0.2});
    CHECK(ring(0, 5) == cplx{-0.2});
    const PairingMatrix open = nearest_neighbor_pairing(6, 0.4, Boundary::Open);
    CHECK(open(5, 0) == cplx{0.0});
    CHECK((ring.entries() + ring.entries().transpose()).norm() == 0.0);
}

}  // TEST_SUITE
