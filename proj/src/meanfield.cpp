#include "cqa/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <unsupported/Eigen/Polynomials>

#include "cqa/core.hpp"

namespace cqa {
namespace {

constexpr double kResidualTol = 1e-12;

double detuning_sq(double nbar, const MeanFieldParams& p) {
    const double d = p.e_c * nbar - p.mu;
    return d * d + 0.25 * p.kappa * p.kappa;
}

double residual_slope(double nbar, const MeanFieldParams& p) {
    const double x = detuning_sq(nbar, p);
    const double g = 4.0 * p.delta * p.delta;
    if (g == 0.0) return 1.0;
    const double ratio = x / (x + g);
    const double dx = 2.0 * p.e_c * (p.e_c * nbar - p.mu);
    const double dratio = g * dx / ((x + g) * (x + g));
    return 1.0 + 0.25 * dratio / std::sqrt(ratio);
}

// Newton on the un-squared equation, kept inside [0, 1/2].
std::optional<double> polish(double n, const MeanFieldParams& p) {
    n = std::clamp(n, 0.0, 0.5);
    for (int it = 0; it < 100; ++it) {
        const double r = self_consistency_residual(n, p);
        if (std::fabs(r) < 0.1 * kResidualTol) break;
        const double s = residual_slope(n, p);
        if (s == 0.0 || !std::isfinite(s)) break;
        const double next = std::clamp(n - r / s, 0.0, 0.5);
        if (next == n) break;
        n = next;
    }
    if (std::fabs(self_consistency_residual(n, p)) < kResidualTol) return n;
    return std::nullopt;
}

double branch_slope(double n, double delta, double e_c, double kappa, int branch) {
    const double y = n * (1.0 - n);
    const double g = delta * delta * (1.0 - 2.0 * n) * (1.0 - 2.0 * n) / y - 0.25 * kappa * kappa;
    const double dg = -delta * delta * (1.0 - 2.0 * n) / (y * y);
    return e_c + branch * dg / (2.0 * std::sqrt(std::max(g, 0.0)));
}

template <class F>
double bisect_sign(F&& f, double a, double b, double tol) {
    double fa = f(a);
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double self_consistency_residual(double nbar, const MeanFieldParams& p) {
    const double x = detuning_sq(nbar, p);
    return nbar - 0.5 * (1.0 - std::sqrt(x) / std::sqrt(x + 4.0 * p.delta * p.delta));
}

std::vector<double> quartic_coefficients(const MeanFieldParams& p) {
    const double a2 = p.e_c * p.e_c;
    const double a1 = -2.0 * p.e_c * p.mu;
    const double a0 = p.mu * p.mu + 0.25 * p.kappa * p.kappa;
    const double d2 = p.delta * p.delta;
    return {-d2, a0 + 4.0 * d2, a1 - a0 - 4.0 * d2, a2 - a1, -a2};
}

std::vector<double> quartic_real_roots(const MeanFieldParams& p) {
    std::vector<double> c = quartic_coefficients(p);
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::fabs(v));
    while (c.size() > 1 && std::fabs(c.back()) <= 1e-14 * scale) c.pop_back();
    std::vector<double> out;
    if (c.size() < 2) return out;
    Eigen::VectorXd coeffs = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
    for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
        const std::complex<double> r = solver.roots()[i];
        if (std::fabs(r.imag()) <= 1e-7 * std::max(1.0, std::abs(r))) out.push_back(r.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

MeanFieldRoots solve_roots(const MeanFieldParams& p) {
    MeanFieldRoots out;
    out.params = p;
    for (double cand : quartic_real_roots(p)) {
        if (cand < -1e-6 || cand > 0.5 + 1e-6) continue;
        if (auto r = polish(cand, p)) {
            const bool dup = std::any_of(out.roots.begin(), out.roots.end(), [&](double v) { return std::fabs(v - *r) < 1e-10; });
            if (!dup) out.roots.push_back(*r);
        }
    }
    // The quadratic (E_C = 0) or a degenerate quartic may lose the vacuum
    // root to deflation; Delta = 0 makes nbar = 0 exact.
    if (out.roots.empty()) {
        if (auto r = polish(0.0, p)) out.roots.push_back(*r);
    }
    std::sort(out.roots.begin(), out.roots.end());
    for (double r : out.roots) out.stable.push_back(residual_slope(r, p) > 0.0);
    return out;
}

std::vector<std::vector<char>> bistable_region(std::span<const double> mu_grid, std::span<const double> delta_grid,
                                               double e_c, double kappa) {
    for (double m : mu_grid)
        if (m < -0.1 || m > 0.7) throw Error(ErrorCode::DomainError, "mu grid must lie in [-0.1, 0.7]");
    for (double d : delta_grid)
        if (d <= 0.0 || d > 0.5) throw Error(ErrorCode::DomainError, "delta grid must lie in (0, 0.5]");
    std::vector<std::vector<char>> out(delta_grid.size(), std::vector<char>(mu_grid.size(), 0));
    for (std::size_t i = 0; i < delta_grid.size(); ++i)
        for (std::size_t j = 0; j < mu_grid.size(); ++j)
            out[i][j] = solve_roots({mu_grid[j], delta_grid[i], e_c, kappa}).count() == 3;
    return out;
}

double branch_turning_density(double delta, double kappa) {
    const double y = delta * delta / (4.0 * delta * delta + 0.25 * kappa * kappa);
    return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - 4.0 * y)));
}

std::optional<double> inverse_mu(double nbar, int branch, double delta, double e_c, double kappa) {
    if (!(nbar > 0.0 && nbar < 0.5)) return std::nullopt;
    const double g = delta * delta * (1.0 - 2.0 * nbar) * (1.0 - 2.0 * nbar) / (nbar * (1.0 - nbar)) - 0.25 * kappa * kappa;
    if (g < 0.0) return std::nullopt;
    return e_c * nbar + (branch >= 0 ? 1.0 : -1.0) * std::sqrt(g);
}

std::optional<Folds> fold_points(double delta, double e_c, double kappa) {
    if (delta <= 0.0 || e_c == 0.0) return std::nullopt;
    const double n_c = branch_turning_density(delta, kappa);
    // Log spacing towards both ends, uniform in between.
    std::vector<double> grid;
    constexpr int per_part = 3000;
    for (int i = 0; i < per_part; ++i) grid.push_back(n_c * std::pow(10.0, -12.0 + 12.0 * i / per_part));
    for (int i = 1; i < per_part; ++i) grid.push_back(n_c * i / per_part);
    for (int i = 0; i < per_part; ++i) grid.push_back(n_c * (1.0 - std::pow(10.0, -14.0 + 14.0 * i / per_part)));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    grid.pop_back();  // the slope diverges at n_c itself

    // The S-curve runs along the + branch up to n_c and returns along the -
    // branch; the upper fold moves onto the - branch at small pairing.
    std::vector<std::pair<double, double>> turns;  // (nbar, mu)
    for (int branch : {+1, -1}) {
        const auto slope = [&](double n) { return branch_slope(n, delta, e_c, kappa, branch); };
        for (std::size_t i = 1; i < grid.size(); ++i)
            if ((slope(grid[i - 1]) > 0) != (slope(grid[i]) > 0)) {
                const double n = bisect_sign(slope, grid[i - 1], grid[i], 1e-15);
                turns.emplace_back(n, *inverse_mu(n, branch, delta, e_c, kappa));
            }
    }
    if (turns.size() == 2) {
        if (turns[0].second > turns[1].second) std::swap(turns[0], turns[1]);
        return Folds{turns[0].second, turns[1].second, turns[0].first, turns[1].first};
    }
    return std::nullopt;
}

std::optional<Folds> fold_points_by_root_count(double delta, double e_c, double kappa, double tol) {
    const auto count = [&](double mu) { return solve_roots({mu, delta, e_c, kappa}).count(); };
    const double lo = -1.0 - std::fabs(e_c), hi = 1.0 + std::fabs(e_c);
    constexpr int scan = 4000;
    std::vector<double> edges;
    int prev = count(lo);
    double prev_mu = lo;
    for (int i = 1; i <= scan; ++i) {
        const double mu = lo + (hi - lo) * i / scan;
        const int c = count(mu);
        if ((prev >= 3) != (c >= 3)) {
            const auto f = [&](double m) { return count(m) >= 3 ? 1.0 : -1.0; };
            edges.push_back(bisect_sign(f, prev_mu, mu, tol));
        }
        prev = c;
        prev_mu = mu;
    }
    if (edges.size() != 2) return std::nullopt;
    const auto lo_roots = solve_roots({edges[0] + 10 * tol, delta, e_c, kappa}).roots;
    const auto hi_roots = solve_roots({edges[1] - 10 * tol, delta, e_c, kappa}).roots;
    const double n_lo = lo_roots.size() == 3 ? 0.5 * (lo_roots[0] + lo_roots[1]) : lo_roots.front();
    const double n_hi = hi_roots.size() == 3 ? 0.5 * (hi_roots[1] + hi_roots[2]) : hi_roots.back();
    return Folds{edges[0], edges[1], n_lo, n_hi};
}

double quartic_discriminant(const MeanFieldParams& p) {
    const std::vector<double> c = quartic_coefficients(p);  // c0..c4
    const double dc[4] = {c[1], 2.0 * c[2], 3.0 * c[3], 4.0 * c[4]};
    Eigen::Matrix<double, 7, 7> s = Eigen::Matrix<double, 7, 7>::Zero();
    for (int row = 0; row < 3; ++row)
        for (int k = 0; k <= 4; ++k) s(row, row + k) = c[4 - k];
    for (int row = 0; row < 4; ++row)
        for (int k = 0; k <= 3; ++k) s(3 + row, row + k) = dc[3 - k];
    return s.fullPivLu().determinant();
}

std::vector<double> discriminant_zeros(double delta, double e_c, double kappa, double mu_from, double mu_to, int scan) {
    const auto f = [&](double mu) { return quartic_discriminant({mu, delta, e_c, kappa}); };
    std::vector<double> zeros;
    double prev_mu = mu_from;
    double prev = f(prev_mu);
    for (int i = 1; i <= scan; ++i) {
        const double mu = mu_from + (mu_to - mu_from) * i / scan;
        const double v = f(mu);
        if ((v > 0) != (prev > 0)) zeros.push_back(bisect_sign(f, prev_mu, mu, 1e-14));
        prev = v;
        prev_mu = mu;
    }
    return zeros;
}

double maxwell_area(double mu_star, double delta, double e_c, double kappa) {
    const MeanFieldRoots r = solve_roots({mu_star, delta, e_c, kappa});
    if (r.count() != 3) throw Error(ErrorCode::NoBistableWindow, "equal-area line needs three roots");
    const double n1 = r.roots.front(), n3 = r.roots.back();
    const double n_c = branch_turning_density(delta, kappa);
    const auto branch = [&](int b) {
        return [=](double n) {
            const auto m = inverse_mu(n, b, delta, e_c, kappa);
            return (m ? *m : e_c * n) - mu_star;
        };
    };
    boost::math::quadrature::tanh_sinh<double> quad;
    const auto plus = branch(+1);
    const auto minus = branch(-1);
    const double gap_plus = std::fabs(plus(n3));
    const double gap_minus = std::fabs(minus(n3));
    if (gap_plus <= gap_minus) return quad.integrate(plus, n1, n3);
    return quad.integrate(plus, n1, n_c) - quad.integrate(minus, n3, n_c);
}

double maxwell_transition(double delta, double e_c, double kappa) {
    const auto folds = fold_points(delta, e_c, kappa);
    if (!folds) throw Error(ErrorCode::NoBistableWindow, "no bistable window at delta=" + std::to_string(delta));
    const double width = folds->mu_hi - folds->mu_lo;
    double lo = folds->mu_lo + 1e-7 * width;
    double hi = folds->mu_hi - 1e-7 * width;
    const double a_lo = maxwell_area(lo, delta, e_c, kappa);
    const double a_hi = maxwell_area(hi, delta, e_c, kappa);
    if ((a_lo > 0) == (a_hi > 0)) throw Error(ErrorCode::NoBistableWindow, "equal-area condition not bracketed");
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if ((maxwell_area(mid, delta, e_c, kappa) > 0) == (a_lo > 0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double nk_steady(double k, double nbar, double mu, double delta, double e_c, double kappa) {
    const double drive = 4.0 * delta * delta * std::sin(k) * std::sin(k);
    if (drive == 0.0) return 0.0;
    const double det = mu - e_c * nbar;
    return 0.5 * drive / (det * det + 0.25 * kappa * kappa + drive);
}

double free_finite_L_density(int L, double mu, double delta, double kappa) {
    if (L < 2) throw Error(ErrorCode::BadLength, "L must be at least 2");
    double acc = 0.0;
    for (int j = 0; j < L; ++j) acc += nk_steady(2.0 * std::numbers::pi * j / L, 0.0, mu, delta, 0.0, kappa);
    return acc / L;
}

double free_density_continuum(double mu, double delta, double kappa) {
    const double x = mu * mu + 0.25 * kappa * kappa;
    return 0.5 * (1.0 - std::sqrt(x) / std::sqrt(x + 4.0 * delta * delta));
}

}  // namespace cqa
