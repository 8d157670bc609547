#pragma once

#include <optional>
#include <span>
#include <vector>

namespace cqa {

struct MeanFieldParams {
    double mu = 0.0;
    double delta = 0.0;
    double e_c = 1.0;
    double kappa = 0.01;
};

// lhs - rhs of the self-consistency condition for the per-site density.
double self_consistency_residual(double nbar, const MeanFieldParams& p);

struct MeanFieldRoots {
    MeanFieldParams params;
    std::vector<double> roots;  // ascending, each in [0, 1/2]
    std::vector<bool> stable;   // heuristic: positive residual slope
    int count() const { return static_cast<int>(roots.size()); }
};

MeanFieldRoots solve_roots(const MeanFieldParams& p);

// Coefficients (constant first) of the quartic obtained by clearing the
// square roots, and all of its real roots. Used to show that the unreported
// ones fail the original equation.
std::vector<double> quartic_coefficients(const MeanFieldParams& p);
std::vector<double> quartic_real_roots(const MeanFieldParams& p);

// Cells (row = delta index, column = mu index) with three solutions.
std::vector<std::vector<char>> bistable_region(std::span<const double> mu_grid, std::span<const double> delta_grid,
                                               double e_c, double kappa);

// The two branches of mu(nbar) obtained by inverting the condition; nullopt
// when the square root is imaginary (nbar beyond the branch turning point).
std::optional<double> inverse_mu(double nbar, int branch, double delta, double e_c, double kappa);

// Largest density reachable at this pairing and loss (branches join there).
double branch_turning_density(double delta, double kappa);

struct Folds {
    double mu_lo, mu_hi;      // bistable window in mu
    double nbar_lo, nbar_hi;  // densities at the folds
};

// Folds as the extrema of mu(nbar) along both inverse branches.
std::optional<Folds> fold_points(double delta, double e_c, double kappa);

// Same window located by a change in root count (1 <-> 3), bisected in mu.
std::optional<Folds> fold_points_by_root_count(double delta, double e_c, double kappa, double tol = 1e-12);

// Resultant of the quartic and its derivative, as a function of mu.
double quartic_discriminant(const MeanFieldParams& p);

// Zeros of quartic_discriminant in (mu_from, mu_to), by scan and bisection.
std::vector<double> discriminant_zeros(double delta, double e_c, double kappa, double mu_from, double mu_to,
                                       int scan = 4000);

// Equal-area chemical potential in the (mu, nbar) plane.
double maxwell_transition(double delta, double e_c, double kappa);

// Signed area between the S-curve and the vertical line mu_star, from the
// lowest to the highest root at mu_star.
double maxwell_area(double mu_star, double delta, double e_c, double kappa);

double nk_steady(double k, double nbar, double mu, double delta, double e_c, double kappa);

// Exact density of the non-interacting ring of L sites from the momentum sum.
double free_finite_L_density(int L, double mu, double delta, double kappa);

// Its continuum limit.
double free_density_continuum(double mu, double delta, double kappa);

}  // namespace cqa
