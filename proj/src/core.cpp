#include "cqa/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cqa/kernels.hpp"

namespace cqa {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveKappa: return "NonPositiveKappa";
        case ErrorCode::BadLength: return "BadLength";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::BoundaryUnsupported: return "BoundaryUnsupported";
        case ErrorCode::NoBistableWindow: return "NoBistableWindow";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::InvalidState: return "InvalidState";
        case ErrorCode::TooManyModes: return "TooManyModes";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DegenerateKernel: return "DegenerateKernel";
        case ErrorCode::OddParityState: return "OddParityState";
        case ErrorCode::NotConverged: return "NotConverged";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

bool Error::is_numerical_guard() const noexcept {
    switch (code_) {
        case ErrorCode::NoBistableWindow:
        case ErrorCode::DegenerateKernel:
        case ErrorCode::NotConverged:
        case ErrorCode::OddParityState:
            return true;
        default:
            return false;
    }
}

const char* to_string(Boundary bc) { return bc == Boundary::Periodic ? "pbc" : "obc"; }

Boundary parse_boundary(const std::string& text) {
    if (text == "pbc" || text == "PBC") return Boundary::Periodic;
    if (text == "obc" || text == "OBC") return Boundary::Open;
    throw Error(ErrorCode::DomainError, "unknown boundary condition '" + text + "'");
}

const ModelParams& validate_params(const ModelParams& p, std::vector<std::string>* warnings) {
    if (p.L < 2) throw Error(ErrorCode::BadLength, "L must be at least 2, got " + std::to_string(p.L));
    if (!(p.kappa > 0.0)) throw Error(ErrorCode::NonPositiveKappa, "kappa must be positive");
    if (!std::isfinite(p.mu) || !std::isfinite(p.e_c) || !std::isfinite(p.kappa) || !std::isfinite(p.delta))
        throw Error(ErrorCode::DomainError, "parameters must be finite");
    if (p.delta < 0.0) throw Error(ErrorCode::DomainError, "delta must be non-negative");
    if (warnings && p.bc == Boundary::Periodic && p.L % 2 != 0)
        warnings->push_back("odd-length ring: closed-form correlations are unavailable");
    return p;
}

double wrap_phase(double phase) {
    constexpr double pi = std::numbers::pi;
    if (phase > -pi && phase <= pi) return phase;
    double w = std::remainder(phase, 2.0 * pi);  // in [-pi, pi]
    if (w <= -pi) w += 2.0 * pi;
    return w;
}

LogComplex::LogComplex(double log_mag, double phase)
    : log_mag_(log_mag), phase_(std::isinf(log_mag) && log_mag < 0 ? 0.0 : wrap_phase(phase)) {}

LogComplex LogComplex::zero() { return {-std::numeric_limits<double>::infinity(), 0.0}; }

LogComplex LogComplex::from(cplx z) {
    if (z == cplx{}) return zero();
    return {std::log(std::abs(z)), std::arg(z)};
}

LogComplex LogComplex::from_real(double x) { return from(cplx{x, 0.0}); }

bool LogComplex::is_zero() const { return std::isinf(log_mag_) && log_mag_ < 0; }

cplx LogComplex::value() const { return value_scaled(0.0); }

cplx LogComplex::value_scaled(double log_shift) const {
    if (is_zero()) return {};
    return std::polar(std::exp(log_mag_ - log_shift), phase_);
}

LogComplex LogComplex::conj() const { return is_zero() ? zero() : LogComplex{log_mag_, -phase_}; }

LogComplex LogComplex::operator-() const {
    return is_zero() ? zero() : LogComplex{log_mag_, phase_ + std::numbers::pi};
}

LogComplex& LogComplex::operator*=(const LogComplex& o) {
    if (is_zero() || o.is_zero()) return *this = zero();
    *this = LogComplex{log_mag_ + o.log_mag_, phase_ + o.phase_};
    return *this;
}

LogComplex& LogComplex::operator/=(const LogComplex& o) {
    if (o.is_zero()) throw Error(ErrorCode::DomainError, "division by exact zero");
    if (is_zero()) return *this;
    *this = LogComplex{log_mag_ - o.log_mag_, phase_ - o.phase_};
    return *this;
}

LogComplex log_product(std::span<const LogComplex> terms) {
    double mag = 0.0, phase = 0.0;
    for (const auto& t : terms) {
        if (t.is_zero()) return LogComplex::zero();
        mag += t.log_mag();
        phase = wrap_phase(phase + t.phase());
    }
    return {mag, phase};
}

LogComplex log_sum(std::span<const LogComplex> terms) {
    double shift = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) shift = std::max(shift, t.log_mag());
    if (std::isinf(shift)) return LogComplex::zero();
    cplx acc{};
    for (const auto& t : terms) acc += t.value_scaled(shift);
    if (acc == cplx{}) return LogComplex::zero();
    return {shift + std::log(std::abs(acc)), std::arg(acc)};
}

double log_sum_exp(std::span<const double> xs) {
    if (xs.empty()) return -std::numeric_limits<double>::infinity();
    const double shift = *std::max_element(xs.begin(), xs.end());
    if (std::isinf(shift)) return shift;
    return shift + std::log(kernels::sum_exp_shifted(xs, shift));
}

PairingMatrix::PairingMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols())
        throw Error(ErrorCode::DimensionMismatch, "pairing matrix must be square");
    for (Eigen::Index i = 0; i < entries_.rows(); ++i)
        for (Eigen::Index j = 0; j < entries_.cols(); ++j)
            if (entries_(i, j) != -entries_(j, i))
                throw Error(ErrorCode::DomainError, "pairing matrix must be exactly antisymmetric");
    norm_ = entries_.norm();
}

Eigen::MatrixXcd PairingMatrix::normalized() const {
    if (norm_ == 0.0) return Eigen::MatrixXcd::Zero(entries_.rows(), entries_.cols());
    return entries_ / norm_;
}

PairingMatrix nearest_neighbor_pairing(int L, double delta, Boundary bc) {
    if (L < 2) throw Error(ErrorCode::BadLength, "L must be at least 2");
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(L, L);
    const int bonds = bc == Boundary::Periodic ? L : L - 1;
    for (int j = 0; j < bonds; ++j) {
        const int k = (j + 1) % L;
        d(j, k) += 0.5 * delta;
        d(k, j) -= 0.5 * delta;
    }
    return PairingMatrix(std::move(d));
}

}  // namespace cqa
