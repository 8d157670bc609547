#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cqa/core.hpp"
#include "cqa/focked.hpp"
#include "cqa/meanfield.hpp"
#include "cqa/pseudospin.hpp"
#include "cqa/steadystate.hpp"
#include "cqa/thermo.hpp"

namespace cqa::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double to_double(const std::string& name, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty()) throw std::invalid_argument("--" + name + ": not a number: '" + text + "'");
    return v;
}

int to_int(const std::string& name, const std::string& text) {
    const double v = to_double(name, text);
    if (v != std::floor(v) || std::fabs(v) > 1e9) throw std::invalid_argument("--" + name + ": not an integer: '" + text + "'");
    return static_cast<int>(v);
}

class Args {
public:
    explicit Args(const RunConfig& cfg) : cfg_(cfg) {}

    const std::string& text(const std::string& name) const {
        const auto it = cfg_.args.find(name);
        if (it == cfg_.args.end()) throw std::invalid_argument("missing --" + name);
        return it->second;
    }
    double real(const std::string& name) const { return to_double(name, text(name)); }
    int integer(const std::string& name) const { return to_int(name, text(name)); }
    std::vector<double> grid(const std::string& name) const {
        try {
            return parse_grid(text(name));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("--" + name + ": " + e.what());
        }
    }
    int jobs() const { return std::max(1, cfg_.jobs); }

    ModelParams model(double mu, double delta) const {
        ModelParams p;
        p.L = integer("L");
        p.bc = parse_boundary(text("bc"));
        p.mu = mu;
        p.delta = delta;
        p.e_c = real("e-c");
        p.kappa = real("kappa");
        return p;
    }

private:
    const RunConfig& cfg_;
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads; results keep index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int jobs, F fn) {
    std::vector<T> out(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(failure_lock);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    const auto threads = static_cast<std::size_t>(std::min<long>(jobs, static_cast<long>(n)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

const std::vector<FlagSpec> kModelFlags = {
    {"L", "400", "chain length"},
    {"bc", "pbc", "boundary condition, pbc or obc"},
    {"e-c", "1", "charging energy"},
    {"kappa", "0.01", "single-particle loss rate"},
};

std::vector<FlagSpec> with_model(std::vector<FlagSpec> extra, const std::string& L = "400", const std::string& kappa = "0.01",
                                 const std::string& e_c = "1") {
    std::vector<FlagSpec> flags = kModelFlags;
    flags[0].fallback = L;
    flags[2].fallback = e_c;
    flags[3].fallback = kappa;
    flags.insert(flags.end(), extra.begin(), extra.end());
    return flags;
}

CommandResult phase_diagram(const RunConfig& cfg) {
    const Args a(cfg);
    const auto mus = a.grid("mu");
    const auto deltas = a.grid("delta");
    validate_params(a.model(mus.front(), deltas.front()));
    const std::size_t n = mus.size() * deltas.size();
    using Row = std::vector<Cell>;
    CommandResult res;
    res.table.columns = {"mu", "delta", "density", "anomalous_re", "anomalous_im", "normal"};
    res.table.rows = parallel_map<Row>(n, a.jobs(), [&](std::size_t i) {
        const ModelParams p = a.model(mus[i / deltas.size()], deltas[i % deltas.size()]);
        const CoefficientTable tbl = build_coefficients(p);
        cplx anom{kNaN, kNaN};
        double normal = kNaN;
        if (p.bc == Boundary::Periodic && p.L % 2 == 0 && p.L >= 4) {
            anom = physical_quadratic(anomalous_correlation(tbl, 1));
            normal = physical_quadratic(normal_correlation(tbl, 1));
        }
        return Row{p.mu, p.delta, mean_density(tbl), anom.real(), anom.imag(), normal};
    });
    return res;
}

CommandResult free_energy_cmd(const RunConfig& cfg) {
    const Args a(cfg);
    const FreeEnergyProfile prof =
        profile(a.real("mu"), a.real("kappa"), a.real("delta"), parse_mode(a.text("mode")), a.integer("points"));
    CommandResult res;
    res.table.columns = {"rho", "q"};
    for (std::size_t i = 0; i < prof.rho.size(); ++i) res.table.rows.push_back({prof.rho[i], prof.q[i]});
    auto& notes = res.table.notes;
    notes.emplace_back("result.rho_min", format_number(prof.rho_min));
    notes.emplace_back("result.q_min", format_number(prof.q_min));
    notes.emplace_back("result.density", format_number(density_thermo(prof)));
    if (prof.bistable()) {
        notes.emplace_back("result.rho_low", format_number(*prof.rho_low));
        notes.emplace_back("result.rho_high", format_number(*prof.rho_high));
        notes.emplace_back("result.delta_q_min", format_number(*prof.delta_q_min));
    }
    return res;
}

CommandResult critical_line(const RunConfig& cfg) {
    const Args a(cfg);
    const auto mus = a.grid("mu");
    const double kappa = a.real("kappa");
    const DissipationMode mode = parse_mode(a.text("mode"));
    using Row = std::vector<Cell>;
    CommandResult res;
    res.table.columns = {"mu", "delta_crit"};
    res.table.rows = parallel_map<Row>(mus.size(), a.jobs(), [&](std::size_t i) {
        return Row{mus[i], critical_delta(mus[i], kappa, mode)};
    });
    return res;
}

CommandResult mean_field(const RunConfig& cfg) {
    const Args a(cfg);
    const std::string table = a.text("table");
    const double e_c = a.real("e-c"), kappa = a.real("kappa");
    if (!(kappa > 0.0)) throw Error(ErrorCode::NonPositiveKappa, "kappa must be positive");
    const auto deltas = a.grid("delta");
    using Row = std::vector<Cell>;
    CommandResult res;
    if (table == "roots") {
        const auto mus = a.grid("mu");
        res.table.columns = {"mu", "delta", "count", "root_1", "root_2", "root_3", "stable_1", "stable_2", "stable_3"};
        res.table.rows = parallel_map<Row>(mus.size() * deltas.size(), a.jobs(), [&](std::size_t i) {
            const MeanFieldRoots r = solve_roots({mus[i / deltas.size()], deltas[i % deltas.size()], e_c, kappa});
            Row row{r.params.mu, r.params.delta, static_cast<double>(r.count())};
            for (std::size_t k = 0; k < 3; ++k) row.emplace_back(k < r.roots.size() ? r.roots[k] : kNaN);
            for (std::size_t k = 0; k < 3; ++k) row.emplace_back(k < r.stable.size() ? (r.stable[k] ? 1.0 : 0.0) : kNaN);
            return row;
        });
    } else if (table == "maxwell") {
        res.table.columns = {"delta", "fold_lo", "fold_hi", "mu_maxwell", "mu_exact"};
        res.table.rows = parallel_map<Row>(deltas.size(), a.jobs(), [&](std::size_t i) {
            const double d = deltas[i];
            const auto folds = fold_points(d, e_c, kappa);
            if (!folds) throw Error(ErrorCode::NoBistableWindow, "no mean-field bistability at delta=" + format_number(d));
            return Row{d, folds->mu_lo, folds->mu_hi, maxwell_transition(d, e_c, kappa),
                       critical_mu(d, kappa, DissipationMode::Full)};
        });
    } else {
        throw std::invalid_argument("--table must be roots or maxwell");
    }
    return res;
}

CommandResult tfim(const RunConfig& cfg) {
    const Args a(cfg);
    const ModelParams p = a.model(a.real("mu"), a.real("delta"));
    const auto times = a.grid("t");
    if (times.front() < 0.0) throw std::invalid_argument("--t must start at t >= 0");
    const std::string model = a.text("model");
    const double theta = a.real("theta");
    const MomentState f0 = coherent_moments(MomentKind::Fermion, p.L, theta, 0.0);
    const MomentState s0 = coherent_moments(MomentKind::Spin, p.L, theta, 0.0);
    std::vector<MomentState> ft, st;
    if (model == "exact") {
        ft = PairSectorModel(MomentKind::Fermion, p).evolve(f0, times);
        st = PairSectorModel(MomentKind::Spin, p).evolve(s0, times);
    } else if (model == "meanfield") {
        ft = integrate_moments(f0, p, times, fine_moment_step(p));
        st = integrate_moments(s0, p, times, fine_moment_step(p));
    } else {
        throw std::invalid_argument("--model must be exact or meanfield");
    }
    CommandResult res;
    res.table.columns = {"t", "pair", "k", "fermion_re", "fermion_im", "fermion_sz", "spin_re", "spin_im", "spin_sz"};
    for (std::size_t i = 0; i < times.size(); ++i)
        for (int q = 0; q < ft[i].pairs(); ++q)
            res.table.rows.push_back({times[i], static_cast<double>(q), pair_momentum(p.L, q), ft[i].s_minus[q].real(),
                                      ft[i].s_minus[q].imag(), ft[i].s_z[q], st[i].s_minus[q].real(), st[i].s_minus[q].imag(),
                                      st[i].s_z[q]});
    res.table.notes.emplace_back("result.max_difference", format_number(max_moment_difference(ft, st)));
    return res;
}

CommandResult htrs(const RunConfig& cfg) {
    const Args a(cfg);
    const ModelParams p = a.model(a.real("mu"), a.real("delta"));
    const auto gammas = a.grid("gamma-p");
    const auto times = a.grid("t");
    const int site = a.integer("site") - 1;
    using Series = HtrsSeries;
    const auto series = parallel_map<Series>(gammas.size(), a.jobs(), [&](std::size_t i) {
        return htrs_breaking(p, {site, gammas[i]}, times);
    });
    CommandResult res;
    res.table.columns = {"gamma_p", "t", "forward_re", "forward_im", "reversed_re", "reversed_im", "sum_abs"};
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.times.size(); ++i)
            res.table.rows.push_back({s.pert.gamma_p, s.times[i], s.forward[i].real(), s.forward[i].imag(),
                                      s.reversed[i].real(), s.reversed[i].imag(), std::abs(s.forward[i] + s.reversed[i])});
        res.table.notes.emplace_back("result.max_violation." + format_number(s.pert.gamma_p), format_number(s.max_violation));
    }
    return res;
}

CommandResult verify(const RunConfig& cfg) {
    const Args a(cfg);
    const ModelParams p = validate_params(a.model(a.real("mu"), a.real("delta")));
    CommandResult res;
    res.table.columns = {"check", "value", "limit", "pass"};
    const auto add = [&](const std::string& name, double value, double limit) {
        const bool ok = value <= limit;
        res.table.rows.push_back({name, value, limit, ok ? 1.0 : 0.0});
        res.verified = res.verified && ok;
    };
    add("critical_delta_weak_error", std::fabs(critical_delta(0.2, 0.0, DissipationMode::Weak) - 0.02122), 2e-4);
    add("critical_delta_full_error", std::fabs(critical_delta(0.2, 1e-3, DissipationMode::Full) - 0.02138), 2e-4);

    const PairingMatrix pairing = nearest_neighbor_pairing(p.L, p.delta, p.bc);
    const auto state = build_cqa_state(pairing, p.mu, p.e_c, p.kappa);
    add("dark_residual", verify_dark_conditions(state, pairing, p.mu, p.e_c, p.kappa).max_residual(), 1e-10);
    const Eigen::MatrixXcd reduced = partial_trace_absorber(state, p.L);
    add("absorber_vs_kernel", trace_distance(reduced, steady_state(chain_liouvillian(p))), 1e-8);

    const FockOps ops = build_operators(p.L);
    const double ed_density = expectation(reduced, ops.total_number()).real() / p.L;
    add("density_closed_form", std::fabs(ed_density - mean_density(build_coefficients(p))), 1e-9);

    const BreakdownReport br = interaction_breakdown(0.5, 0.0, 1.0, 0.01);
    add("breakdown_ratio_error", std::fabs(br.ratio - 1.5), 1e-10);
    return res;
}

std::vector<CommandSpec> build_specs() {
    std::vector<CommandSpec> specs;
    specs.push_back({"phase-diagram", "steady-state density and correlations on a (mu, delta) grid",
                     "mu,delta,density,anomalous_re,anomalous_im,normal  (correlations <c1+ c2+>, <c1+ c3>; nan unless even ring)",
                     with_model({{"mu", "0:0.6:200", "chemical potential grid"}, {"delta", "0.001:0.3:200", "pairing grid"}}),
                     phase_diagram});
    specs.push_back({"free-energy", "rate function Q(rho) and its wells",
                     "rho,q  (+ result.* header lines)",
                     {{"mu", "0.2", "chemical potential"},
                      {"delta", "0.0212", "pairing"},
                      {"kappa", "0.01", "loss rate"},
                      {"mode", "full", "full or weak dissipation"},
                      {"points", "4096", "grid intervals on [0, 1]"}},
                     free_energy_cmd});
    specs.push_back({"critical-line", "critical pairing along a mu grid",
                     "mu,delta_crit",
                     {{"mu", "0.05:0.45:41", "chemical potential grid"},
                      {"kappa", "1e-8", "loss rate"},
                      {"mode", "full", "full or weak dissipation"}},
                     critical_line});
    specs.push_back({"mean-field", "self-consistent mean-field roots or Maxwell line",
                     "roots: mu,delta,count,root_1..3,stable_1..3; maxwell: delta,fold_lo,fold_hi,mu_maxwell,mu_exact",
                     {{"table", "roots", "roots or maxwell"},
                      {"mu", "-0.1:0.7:161", "chemical potential grid (roots)"},
                      {"delta", "0.0212", "pairing grid"},
                      {"e-c", "1", "charging energy"},
                      {"kappa", "0.01", "loss rate"}},
                     mean_field});
    specs.push_back({"tfim", "fermion pairs against pseudospins",
                     "t,pair,k,fermion_re,fermion_im,fermion_sz,spin_re,spin_im,spin_sz",
                     with_model({{"mu", "0.2", "chemical potential"},
                                 {"delta", "0.3", "pairing"},
                                 {"t", "0:500:501", "sample times"},
                                 {"model", "exact", "exact or meanfield"},
                                 {"theta", "0", "initial Bloch angle of every pair"}},
                                "10", "0.01", "0"),
                     tfim});
    specs.push_back({"verify", "self-checks; exit status 1 on failure",
                     "check,value,limit,pass",
                     with_model({{"mu", "0.3", "chemical potential"}, {"delta", "0.2", "pairing"}}, "4", "0.1"),
                     verify});
    specs.push_back({"htrs", "forward and reversed two-time correlations with optional pumping",
                     "gamma_p,t,forward_re,forward_im,reversed_re,reversed_im,sum_abs",
                     with_model({{"mu", "0.2", "chemical potential"},
                                 {"delta", "0.15", "pairing"},
                                 {"gamma-p", "0,0.001", "pump rates"},
                                 {"site", "1", "pumped site (1-based)"},
                                 {"t", "0:200:201", "sample times"}},
                                "6"),
                     htrs});
    return specs;
}

}  // namespace

const std::vector<CommandSpec>& command_specs() {
    static const std::vector<CommandSpec> specs = build_specs();
    return specs;
}

const CommandSpec& find_command(const std::string& name) {
    for (const auto& s : command_specs())
        if (s.name == name) return s;
    throw std::invalid_argument("unknown command '" + name + "'");
}

CommandResult run_command(const RunConfig& cfg) {
    const CommandSpec& spec = find_command(cfg.command);
    RunConfig full = cfg;
    for (const auto& f : spec.flags) full.args.try_emplace(f.name, f.fallback);
    return spec.run(full);
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (std::count(text.begin(), text.end(), ':') == 2) {
        const auto c1 = text.find(':'), c2 = text.rfind(':');
        const double start = to_double("grid", text.substr(0, c1));
        const double stop = to_double("grid", text.substr(c1 + 1, c2 - c1 - 1));
        const int count = to_int("grid", text.substr(c2 + 1));
        if (count < 1) throw std::invalid_argument("grid count must be positive");
        if (count == 1) {
            if (start != stop) throw std::invalid_argument("one-point grid needs start == stop");
            return {start};
        }
        for (int i = 0; i < count; ++i) out.push_back(i == count - 1 ? stop : start + (stop - start) * i / (count - 1));
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(to_double("grid", item));
    }
    if (out.empty()) throw std::invalid_argument("empty grid");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
    return out;
}

int default_jobs() {
    if (const char* env = std::getenv("CQA_FERMI_JOBS")) {
        try {
            return std::max(1, to_int("CQA_FERMI_JOBS", env));
        } catch (const std::invalid_argument&) {
            return 1;
        }
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace cqa::cli
