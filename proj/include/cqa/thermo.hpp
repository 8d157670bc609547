#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cqa {

// Full keeps the finite loss rate in the large-deviation function; Weak is
// its kappa -> 0 limit. Energies are in units of the charging energy.
enum class DissipationMode { Full, Weak };

const char* to_string(DissipationMode mode);
DissipationMode parse_mode(const std::string& text);

// Rate function Q(rho) of the pair-density distribution, rho in (0, 1).
double free_energy(double rho, double mu, double kappa, double delta, DissipationMode mode);

struct FreeEnergyProfile {
    double mu = 0.0;
    double kappa = 0.0;
    double delta = 0.0;
    DissipationMode mode = DissipationMode::Full;
    std::vector<double> rho;  // includes the endpoints 0 and 1 (limits)
    std::vector<double> q;
    double rho_min = 0.0;
    double q_min = 0.0;
    std::optional<double> rho_low;   // well at rho <= 2 mu
    std::optional<double> rho_high;  // well at rho >= 2 mu
    std::optional<double> delta_q_min;  // Q(rho_high) - Q(rho_low)

    bool bistable() const { return delta_q_min.has_value(); }
};

FreeEnergyProfile profile(double mu, double kappa, double delta, DissipationMode mode, int grid_size = 4096);

// Pairing at which the two wells are degenerate, by bisection to |dDelta| < tol.
double critical_delta(double mu, double kappa, DissipationMode mode, double tol = 1e-10);

// Same boundary crossed along mu at fixed pairing.
double critical_mu(double delta, double kappa, DissipationMode mode, double tol = 1e-10);

inline double density_thermo(const FreeEnergyProfile& prof) { return 0.5 * prof.rho_min; }

// Per-site log-magnitude of the Stirling bracket; extends continuously to
// rho = 0 and rho = 1. -2 * log_bracket equals Q in Full mode.
double log_bracket(double rho, double mu, double kappa, double delta);

// ln |beta(rho)| before normalization, from the Stirling form at size L.
// Compare with ln|alpha_n| + ln N(L, n) / 2 at n = rho L / 2.
double log_beta_asymptotic(double rho, double mu, double kappa, double delta, int L);

}  // namespace cqa
