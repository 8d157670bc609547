#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cqa {

using cplx = std::complex<double>;

enum class ErrorCode {
    NonPositiveKappa,
    BadLength,
    OutOfRange,
    TooLarge,
    DomainError,
    BoundaryUnsupported,
    NoBistableWindow,
    StepTooLarge,
    InvalidState,
    TooManyModes,
    DimensionMismatch,
    DegenerateKernel,
    OddParityState,
    NotConverged,
};

const char* to_string(ErrorCode code);

// Validation failures and numerical guard trips share one exception type;
// callers that care (the CLI) switch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }
    bool is_numerical_guard() const noexcept;

private:
    ErrorCode code_;
};

enum class Boundary { Periodic, Open };

const char* to_string(Boundary bc);
Boundary parse_boundary(const std::string& text);

struct ModelParams {
    int L = 2;
    Boundary bc = Boundary::Periodic;
    double mu = 0.0;
    double delta = 0.0;
    double e_c = 1.0;
    double kappa = 0.01;

    cplx mu_tilde() const { return {mu, 0.5 * kappa}; }
};

// Throws on hard violations. Soft issues (odd-length rings) are appended to
// `warnings` when provided.
const ModelParams& validate_params(const ModelParams& p, std::vector<std::string>* warnings = nullptr);

// Complex number as (ln|z|, arg z). log_mag == -inf encodes exact zero.
class LogComplex {
public:
    constexpr LogComplex() = default;
    LogComplex(double log_mag, double phase);

    static LogComplex zero();
    static LogComplex one() { return {}; }
    static LogComplex from(cplx z);
    static LogComplex from_real(double x);

    double log_mag() const { return log_mag_; }
    double phase() const { return phase_; }
    bool is_zero() const;
    cplx value() const;
    cplx value_scaled(double log_shift) const;  // value() * exp(-log_shift)

    LogComplex conj() const;
    LogComplex operator-() const;
    LogComplex& operator*=(const LogComplex& o);
    LogComplex& operator/=(const LogComplex& o);
    friend LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }
    friend LogComplex operator/(LogComplex a, const LogComplex& b) { return a /= b; }

private:
    double log_mag_ = 0.0;
    double phase_ = 0.0;
};

double wrap_phase(double phase);

LogComplex log_product(std::span<const LogComplex> terms);
LogComplex log_sum(std::span<const LogComplex> terms);

// ln Σ exp(x_i); -inf for an empty list or all -inf entries.
double log_sum_exp(std::span<const double> xs);

class PairingMatrix {
public:
    explicit PairingMatrix(Eigen::MatrixXcd entries);

    int size() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    double norm() const { return norm_; }
    Eigen::MatrixXcd normalized() const;
    cplx operator()(int i, int j) const { return entries_(i, j); }

private:
    Eigen::MatrixXcd entries_;
    double norm_;
};

PairingMatrix nearest_neighbor_pairing(int L, double delta, Boundary bc);

}  // namespace cqa
