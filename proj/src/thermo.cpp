#include "cqa/thermo.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "cqa/core.hpp"

namespace cqa {
namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Entropy of dimer placements per site at density coordinate rho.
double placement_entropy(double rho) { return xlogx(1.0 - 0.5 * rho) - xlogx(0.5 * rho) - xlogx(1.0 - rho); }

// Q on the closed interval, endpoints by continuous extension.
double q_value(double rho, double mu, double kappa, double delta, DissipationMode mode) {
    if (delta <= 0.0) return rho == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    const double pairing = -(1.0 + std::log(delta)) * rho;
    const double u = mu - 0.5 * rho;
    if (mode == DissipationMode::Weak || kappa == 0.0)
        return pairing - 2.0 * xlogx(std::fabs(u)) * (u < 0 ? -1.0 : 1.0) + 2.0 * xlogx(std::fabs(mu)) * (mu < 0 ? -1.0 : 1.0) -
               placement_entropy(rho);
    const double k2 = 0.25 * kappa * kappa;
    const double mod2 = mu * mu + k2;
    return pairing - u * std::log(u * u + k2) + mu * std::log(mod2) +
           kappa * std::atan2(0.5 * rho * kappa, 2.0 * mod2 - mu * rho) - placement_entropy(rho);
}

template <class F>
double golden_section(F&& f, double a, double b, double tol) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

constexpr double kWellResolution = 1e-10;
constexpr double kBarrierThreshold = 1e-12;

struct Well {
    std::size_t index;
    double rho;
    double q;
};

// +1 when the low-density well wins, -1 when the high one does.
int winner(const FreeEnergyProfile& p) {
    if (p.delta_q_min) return *p.delta_q_min > 0.0 ? +1 : -1;
    return p.rho_low ? +1 : -1;
}

double bisect_boundary(double lo, double hi, double tol, const auto& sign_at) {
    const int s_lo = sign_at(lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (sign_at(mid) == s_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

const char* to_string(DissipationMode mode) { return mode == DissipationMode::Weak ? "weak" : "full"; }

DissipationMode parse_mode(const std::string& text) {
    if (text == "weak") return DissipationMode::Weak;
    if (text == "full") return DissipationMode::Full;
    throw Error(ErrorCode::DomainError, "unknown dissipation mode '" + text + "'");
}

double free_energy(double rho, double mu, double kappa, double delta, DissipationMode mode) {
    if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorCode::DomainError, "rho must lie strictly inside (0, 1)");
    return q_value(rho, mu, kappa, delta, mode);
}

FreeEnergyProfile profile(double mu, double kappa, double delta, DissipationMode mode, int grid_size) {
    if (grid_size < 1000) throw Error(ErrorCode::OutOfRange, "grid_size must be at least 1000");
    FreeEnergyProfile out;
    out.mu = mu;
    out.kappa = kappa;
    out.delta = delta;
    out.mode = mode;
    const auto n = static_cast<std::size_t>(grid_size);
    out.rho.resize(n);
    out.q.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.rho[i] = static_cast<double>(i) / static_cast<double>(n - 1);
        out.q[i] = q_value(out.rho[i], mu, kappa, delta, mode);
    }
    if (delta <= 0.0) {
        out.rho_min = 0.0;
        out.q_min = 0.0;
        out.rho_low = 0.0;
        return out;
    }

    const auto f = [&](double r) { return q_value(r, mu, kappa, delta, mode); };
    std::vector<Well> wells;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const bool left_ok = i == 0 || out.q[i] < out.q[i - 1];
        if (!left_ok || !(out.q[i] <= out.q[i + 1])) continue;
        const double a = out.rho[i == 0 ? 0 : i - 1];
        const double b = out.rho[i + 1];
        const double r = golden_section(f, a, b, kWellResolution);
        wells.push_back({i, r, f(r)});
    }
    if (wells.empty()) throw Error(ErrorCode::NotConverged, "no minimum found on the free-energy grid");

    const Well* low = nullptr;
    const Well* high = nullptr;
    const Well* best = &wells.front();
    for (const auto& w : wells) {
        if (w.q < best->q) best = &w;
        if (w.rho <= 2.0 * mu) {
            if (!low || w.q < low->q) low = &w;
        } else if (!high || w.q < high->q) {
            high = &w;
        }
    }
    out.rho_min = best->rho;
    out.q_min = best->q;

    if (low && high) {
        double barrier = -std::numeric_limits<double>::infinity();
        for (std::size_t i = low->index; i <= high->index; ++i) barrier = std::max(barrier, out.q[i]);
        if (barrier - std::max(low->q, high->q) <= kBarrierThreshold) (best == low ? high : low) = nullptr;
    }
    if (low) out.rho_low = low->rho;
    if (high) out.rho_high = high->rho;
    if (low && high) out.delta_q_min = high->q - low->q;
    return out;
}

double critical_delta(double mu, double kappa, DissipationMode mode, double tol) {
    const auto sign_at = [&](double d) { return winner(profile(mu, kappa, d, mode)); };
    constexpr int scan = 120;
    const double log_lo = std::log(1e-5), log_hi = std::log(1.0);
    double prev_d = std::exp(log_lo);
    int prev_s = sign_at(prev_d);
    for (int i = 1; i <= scan; ++i) {
        const double d = std::exp(log_lo + (log_hi - log_lo) * i / scan);
        const int s = sign_at(d);
        if (prev_s > 0 && s < 0) {
            const double dc = bisect_boundary(prev_d, d, tol, sign_at);
            if (profile(mu, kappa, dc - tol, mode).bistable() && profile(mu, kappa, dc + tol, mode).bistable()) return dc;
            break;
        }
        prev_d = d;
        prev_s = s;
    }
    throw Error(ErrorCode::NoBistableWindow, "no first-order crossing in pairing at mu=" + std::to_string(mu));
}

double critical_mu(double delta, double kappa, DissipationMode mode, double tol) {
    const auto sign_at = [&](double m) { return winner(profile(m, kappa, delta, mode)); };
    constexpr int scan = 100;
    const double lo = 1e-3, hi = 0.5 - 1e-3;
    double prev_m = lo;
    int prev_s = sign_at(prev_m);
    for (int i = 1; i <= scan; ++i) {
        const double m = lo + (hi - lo) * i / scan;
        const int s = sign_at(m);
        if (prev_s < 0 && s > 0) {
            const double mc = bisect_boundary(prev_m, m, tol, sign_at);
            if (profile(mc - tol, kappa, delta, mode).bistable() && profile(mc + tol, kappa, delta, mode).bistable()) return mc;
            break;
        }
        prev_m = m;
        prev_s = s;
    }
    throw Error(ErrorCode::NoBistableWindow, "no first-order crossing in mu at delta=" + std::to_string(delta));
}

double log_bracket(double rho, double mu, double kappa, double delta) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorCode::DomainError, "rho must lie in [0, 1]");
    if (rho == 0.0) return 0.0;
    if (delta <= 0.0) return -std::numeric_limits<double>::infinity();
    const cplx mu_t{mu, 0.5 * kappa};
    const cplx shrink = 1.0 - rho / (2.0 * mu_t);
    const double amplitude = 0.5 * rho * (1.0 + std::log(delta) - std::log(std::abs(mu_t - 0.5 * rho))) +
                             (mu_t * std::log(shrink)).real();
    return amplitude + 0.5 * placement_entropy(rho);
}

double log_beta_asymptotic(double rho, double mu, double kappa, double delta, int L) {
    if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorCode::DomainError, "rho must lie strictly inside (0, 1)");
    if (L < 1000) throw Error(ErrorCode::OutOfRange, "the Stirling form needs L >= 1000");
    const cplx mu_t{mu, 0.5 * kappa};
    const double gamma_ratio = -0.5 * std::log(std::abs(1.0 - rho / (2.0 * mu_t)));
    const double ring_count = 0.25 * std::log(4.0 / (2.0 * std::numbers::pi * L * rho * (1.0 - rho) * (2.0 - rho)));
    return L * log_bracket(rho, mu, kappa, delta) + gamma_ratio + ring_count;
}

}  // namespace cqa
