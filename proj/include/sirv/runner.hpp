#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sirv/config.hpp"
#include "sirv/cost.hpp"
#include "sirv/io.hpp"
#include "sirv/operator_norm.hpp"
#include "sirv/pdhg.hpp"

namespace sirv {

struct RunReport {
    std::string name;
    bool converged = false;
    int iterations = 0;
    double monitor_final = 0.0;
    double relative_error_final = 0.0;
    CostBreakdown cost;
    std::array<double, 4> terminal_mass{};          // integral of rho_i(T)
    double production_total = 0.0;                  // integral of rho_V at tprime
    std::vector<double> production_per_factory;     // same, per factory site
    double transport_cost = 0.0;                    // integral of |m_V|^2 / (2 rho_V) over [T',T]
    FeasibilityReport feasibility;

    KeyValueFile to_kv() const {
        KeyValueFile kv;
        kv.set("name", name);
        kv.set("converged", converged ? "1" : "0");
        kv.set("iterations", static_cast<double>(iterations));
        kv.set("monitor_final", monitor_final);
        kv.set("relative_error_final", relative_error_final);
        kv.set("cost.total", cost.total());
        kv.set("cost.terminal_s", cost.terminal_s);
        kv.set("cost.terminal_i", cost.terminal_i);
        kv.set("cost.terminal_r", cost.terminal_r);
        kv.set("cost.terminal_v", cost.terminal_v);
        kv.set("cost.kinetic_s", cost.kinetic[S]);
        kv.set("cost.kinetic_i", cost.kinetic[I]);
        kv.set("cost.kinetic_r", cost.kinetic[R]);
        kv.set("cost.kinetic_v", cost.kinetic[V]);
        kv.set("cost.congestion_p", cost.congestion_p);
        kv.set("cost.congestion_v", cost.congestion_v);
        kv.set("cost.production", cost.production);
        kv.set("cost.lambda_reg", cost.lambda_reg);
        for (int pop : {S, I, R, V})
            kv.set(std::string("terminal_mass_") + kPopNames[pop], terminal_mass[pop]);
        kv.set("production_total", production_total);
        for (std::size_t i = 0; i < production_per_factory.size(); ++i)
            kv.set("production_factory_" + std::to_string(i + 1), production_per_factory[i]);
        kv.set("transport_cost_v", transport_cost);
        kv.set("feasibility.worst", feasibility.worst());
        return kv;
    }
};

namespace detail {

inline double region_mass(const GridSpec& g, std::span<const double> slice,
                          const std::function<bool(int, int)>& pred) {
    double m = 0.0;
    for (int k = 0; k < g.nx1; ++k)
        for (int l = 0; l < g.nx2; ++l)
            if (pred(k, l)) m += slice[g.sidx(k, l)];
    return m * g.dx1() * g.dx2();
}

} // namespace detail

/// Total vaccine mass integrated over a half/quadrant selection of the
/// domain and the delivery window [tprime, T], time-weighted. Used for the
/// obstacle comparisons.
inline double delivered_mass(const StateVector& u, bool right_half) {
    const GridSpec& g = u.grid();
    const int np = g.tprime_index();
    double total = 0.0;
    for (int n = np; n < g.nt; ++n) {
        const double wt = detail::time_weight_window(g, n, np, g.nt - 1);
        total += wt * detail::region_mass(g, u.rho[V].slice(n), [&](int k, int) {
            const bool right = g.x1(k) >= 0.5;
            return right == right_half;
        });
    }
    return total;
}

inline double transport_cost_v(const StateVector& u) {
    const GridSpec& g = u.grid();
    const int np = g.tprime_index();
    const double cell = g.dx1() * g.dx2();
    double total = 0.0;
    for (int n = np; n < g.nt; ++n) {
        const double wt = detail::time_weight_window(g, n, np, g.nt - 1);
        auto rho = u.rho[V].slice(n);
        auto m1 = u.m[V].c1.slice(n);
        auto m2 = u.m[V].c2.slice(n);
        for (std::size_t i = 0; i < g.spatial_size(); ++i)
            if (rho[i] > 0.0)
                total += wt * cell * (m1[i] * m1[i] + m2[i] * m2[i]) / (2.0 * rho[i]);
    }
    return total;
}

inline RunReport summarize(const ExperimentConfig& cfg, const ModelParams& mp,
                           const SolveResult& sol) {
    const GridSpec g = cfg.grid();
    RunReport rep;
    rep.name = cfg.name;
    rep.converged = sol.converged;
    rep.iterations = sol.iterations;
    rep.cost = sol.final_cost.terms;
    if (!sol.trace.empty()) {
        rep.monitor_final = sol.trace.back().monitor_lagrangian;
        rep.relative_error_final = sol.trace.back().relative_error;
    }
    const double cell = g.dx1() * g.dx2();
    for (int pop : {S, I, R, V}) {
        double m = 0.0;
        for (double x : sol.u.rho[pop].slice(g.nt - 1)) m += x;
        rep.terminal_mass[pop] = m * cell;
    }
    const int np = g.tprime_index();
    {
        double m = 0.0;
        for (double x : sol.u.rho[V].slice(np)) m += x;
        rep.production_total = m * cell;
    }
    for (const auto& ball : mp.logistics.factory_components)
        rep.production_per_factory.push_back(detail::region_mass(
            g, sol.u.rho[V].slice(np), [&](int k, int l) { return ball.at(k, l); }));
    rep.transport_cost = transport_cost_v(sol.u);
    rep.feasibility = check_feasibility(sol.u, mp);
    return rep;
}

inline std::filesystem::path resolve_output_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    if (p.is_absolute()) return p;
    if (const char* root = std::getenv("SIRV_MFC_OUT_ROOT"); root && *root)
        return std::filesystem::path(root) / p;
    return p;
}

struct RunOutcome {
    SolveResult solve;
    RunReport report;
    std::filesystem::path out_dir;
};

/// Execute one configuration end to end and emit the selected artifacts:
/// per-iteration series.csv, per-time-node masses.csv with region columns,
/// density snapshots, and the key = value run report.
inline RunOutcome run(const ExperimentConfig& cfg) {
    {
        auto bad = cfg.validate();
        if (!bad.empty()) throw ConfigError(bad);
    }
    const GridSpec g = cfg.grid();
    const ModelParams mp = cfg.model_params();
    const auto initial = cfg.initial_fields(mp);

    RunOutcome out;
    out.out_dir = resolve_output_dir(cfg.output.dir);
    std::filesystem::create_directories(out.out_dir);

    std::optional<CsvWriter> series;
    if (cfg.output.series) {
        series.emplace(out.out_dir / "series.csv");
        series->header({"iteration", "monitor_lagrangian", "relative_error", "res_s", "res_i",
                        "res_r", "res_v"});
    }
    DiagnosticsSink sink = [&](const IterationDiagnostics& d) {
        if (series)
            series->row<double>({static_cast<double>(d.iteration), d.monitor_lagrangian,
                                 d.relative_error, d.constraint_residual_norms[S],
                                 d.constraint_residual_norms[I], d.constraint_residual_norms[R],
                                 d.constraint_residual_norms[V]});
    };

    out.solve = solve(cfg.solver, mp, g, initial, sink);
    out.report = summarize(cfg, mp, out.solve);

    if (cfg.output.masses) {
        CsvWriter masses(out.out_dir / "masses.csv");
        std::vector<std::pair<std::string, std::function<bool(int, int)>>> regions;
        regions.emplace_back("total", [](int, int) { return true; });
        regions.emplace_back("left", [&](int k, int) { return g.x1(k) < 0.5; });
        regions.emplace_back("right", [&](int k, int) { return g.x1(k) >= 0.5; });
        regions.emplace_back("bottom_left",
                             [&](int k, int l) { return g.x1(k) < 0.5 && g.x2(l) < 0.5; });
        regions.emplace_back("bottom_right",
                             [&](int k, int l) { return g.x1(k) >= 0.5 && g.x2(l) < 0.5; });
        regions.emplace_back("top_left",
                             [&](int k, int l) { return g.x1(k) < 0.5 && g.x2(l) >= 0.5; });
        regions.emplace_back("top_right",
                             [&](int k, int l) { return g.x1(k) >= 0.5 && g.x2(l) >= 0.5; });
        for (std::size_t i = 0; i < mp.logistics.factory_components.size(); ++i) {
            const auto& ball = mp.logistics.factory_components[i];
            regions.emplace_back("factory_" + std::to_string(i + 1),
                                 [&ball](int k, int l) { return ball.at(k, l); });
        }
        std::vector<std::string> cols{"t"};
        for (const auto& [rname, _] : regions)
            for (int pop : {S, I, R, V}) cols.push_back(rname + "_" + kPopNames[pop]);
        masses.header(cols);
        for (int n = 0; n < g.nt; ++n) {
            std::vector<double> row{g.t(n)};
            for (const auto& [rname, pred] : regions)
                for (int pop : {S, I, R, V})
                    row.push_back(detail::region_mass(g, out.solve.u.rho[pop].slice(n), pred));
            masses.row(row);
        }
    }

    if (cfg.output.snapshots) {
        auto times = cfg.output.snapshot_times;
        if (times.empty()) times = {0, g.nt / 2, g.nt - 1};
        for (int n : times)
            for (int pop : {S, I, R, V}) {
                auto s = out.solve.u.rho[pop].slice(n);
                write_snapshot(out.out_dir / ("rho_" + std::string(kPopNames[pop]) + "_t" +
                                              std::to_string(n) + ".bin"),
                               g.nx1, g.nx2, n, std::vector<double>(s.begin(), s.end()));
            }
    }

    if (cfg.output.report) out.report.to_kv().write(out.out_dir / "report.txt");
    return out;
}

struct NormStudyRow {
    int n = 0;
    double grad_norm = 0.0;
    double ratio_to_prev = 0.0;
    double gradient_energy = 0.0; // discrete integral of |grad u|^2 for the gaussian field
};

/// Discrete gradient-norm growth across grid resolutions, plus the gradient
/// energy of u(x) = exp(-20 |x - center|^2) on each grid.
inline std::vector<NormStudyRow> norm_study(const std::vector<int>& grids) {
    if (grids.size() < 2) throw ConfigError("norm-study: need at least two grid sizes");
    std::vector<NormStudyRow> rows;
    for (int n : grids) {
        GridSpec g(n, n, 3);
        NormStudyRow row;
        row.n = n;
        row.grad_norm = estimate_operator_norm(gradient_operator(g));
        std::vector<double> u(g.spatial_size());
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                const double d1 = g.x1(k) - 0.5, d2 = g.x2(l) - 0.5;
                u[g.sidx(k, l)] = std::exp(-20.0 * (d1 * d1 + d2 * d2));
            }
        std::vector<double> g1(g.spatial_size()), g2(g.spatial_size());
        gradient_slice(g, u, g1, g2);
        double e = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) e += g1[i] * g1[i] + g2[i] * g2[i];
        row.gradient_energy = e * g.dx1() * g.dx2();
        if (!rows.empty()) row.ratio_to_prev = row.grad_norm / rows.back().grad_norm;
        rows.push_back(row);
    }
    return rows;
}

inline void write_norm_study(const std::vector<NormStudyRow>& rows,
                             const std::filesystem::path& path) {
    CsvWriter csv(path);
    csv.header({"n", "grad_norm", "ratio_to_prev", "gradient_energy"});
    for (const auto& r : rows)
        csv.row<double>({static_cast<double>(r.n), r.grad_norm, r.ratio_to_prev,
                         r.gradient_energy});
}

} // namespace sirv
