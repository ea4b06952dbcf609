#pragma once

#include <array>
#include <charconv>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sirv/errors.hpp"
#include "sirv/grid.hpp"
#include "sirv/params.hpp"
#include "sirv/pdhg.hpp"
#include "sirv/region.hpp"

namespace sirv {

struct OutputSpec {
    std::string dir = "out";
    std::vector<int> snapshot_times; // empty = pick a default spread
    bool series = true;
    bool masses = true;
    bool snapshots = true;
    bool report = true;
};

/// A full experiment description: grid, model constants, geometry
/// descriptors, initial data, solver settings and output selection.
/// Geometry is kept in descriptor form so the grid can be swapped before the
/// masks are realized.
struct ExperimentConfig {
    std::string name = "run";

    int nx1 = 32, nx2 = 32, nt = 32;
    double tprime = 0.5;

    EpidemicParams epi;
    ControlWeights weights;

    double f_max = 10.0;
    double c_factory = 2.0;
    std::vector<std::array<double, 3>> factory_balls; // c1, c2, radius
    struct Rect {
        double a1, b1, a2, b2;
    };
    std::vector<Rect> obstacle_rects;

    InitialData initial;
    SolverConfig solver;

    bool move_sir = true;
    bool lambda_v_only = false;
    bool optimize_production = true;
    double fixed_production_rate = 0.0;

    OutputSpec output;

    GridSpec grid() const { return GridSpec(nx1, nx2, nt, tprime); }

    ModelParams model_params() const {
        const GridSpec g = grid();
        ModelParams mp;
        mp.epi = epi;
        mp.w = weights;
        mp.logistics.f_max = f_max;
        mp.logistics.c_factory = c_factory;
        mp.logistics.factory = RegionMask(g.nx1, g.nx2);
        for (const auto& b : factory_balls) {
            RegionMask ball = make_ball(g, b[0], b[1], b[2]);
            mp.logistics.factory_components.push_back(ball);
            mp.logistics.factory.unite(ball);
        }
        mp.logistics.obstacle = RegionMask(g.nx1, g.nx2);
        for (const auto& r : obstacle_rects)
            mp.logistics.obstacle.unite(make_rect(g, r.a1, r.b1, r.a2, r.b2));
        mp.logistics.has_obstacle = !obstacle_rects.empty();
        mp.move_sir = move_sir;
        mp.lambda_v_only = lambda_v_only;
        mp.optimize_production = optimize_production;
        mp.fixed_production_rate = fixed_production_rate;
        return mp;
    }

    std::array<std::vector<double>, 4> initial_fields(const ModelParams& mp) const {
        const GridSpec g = grid();
        const RegionMask* obs = mp.logistics.has_obstacle ? &mp.logistics.obstacle : nullptr;
        return {initial.build(g, S, obs), initial.build(g, I, obs), initial.build(g, R, obs),
                initial.build(g, V, obs)};
    }

    /// Every violation found, empty when the configuration is runnable.
    std::vector<std::string> validate() const {
        std::vector<std::string> bad;
        GridSpec g;
        try {
            g = grid();
        } catch (const ConfigError& e) {
            return e.violations();
        }
        try {
            ModelParams mp = model_params();
            auto more = mp.validate(g);
            bad.insert(bad.end(), more.begin(), more.end());
            if (mp.logistics.factory.empty() && f_max > 0.0)
                bad.push_back("logistics.factory: empty mask with f_max > 0");
        } catch (const ConfigError& e) {
            bad.insert(bad.end(), e.violations().begin(), e.violations().end());
        }
        auto more = solver.validate();
        bad.insert(bad.end(), more.begin(), more.end());
        if (factory_balls.empty()) bad.push_back("logistics.factory: at least one site required");
        for (int t : output.snapshot_times)
            if (t < 0 || t >= nt) bad.push_back("output.snapshots: time index out of range");
        return bad;
    }
};

namespace detail {

struct IniEntry {
    std::string value;
    int line = 0;
    int col = 0;
};

using IniSections = std::map<std::string, std::vector<std::pair<std::string, IniEntry>>>;

inline IniSections parse_ini(const std::string& text) {
    IniSections out;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string s = line;
        const auto comment = s.find_first_of("#;");
        if (comment != std::string::npos) s = s.substr(0, comment);
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = s.find_last_not_of(" \t\r");
        s = s.substr(b, e - b + 1);
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("parse error at line " + std::to_string(lineno) + ", col " +
                                  std::to_string(b + 1) + ": unterminated section header");
            section = s.substr(1, s.size() - 2);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("parse error at line " + std::to_string(lineno) + ", col " +
                              std::to_string(b + 1) + ": expected key = value");
        auto trim = [](std::string t) {
            const auto tb = t.find_first_not_of(" \t");
            const auto te = t.find_last_not_of(" \t");
            return tb == std::string::npos ? std::string() : t.substr(tb, te - tb + 1);
        };
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty())
            throw ConfigError("parse error at line " + std::to_string(lineno) + ": empty key");
        out[section].push_back({key, IniEntry{val, lineno, static_cast<int>(b + 1)}});
    }
    return out;
}

inline double to_num(const std::string& s, const std::string& path,
                     std::vector<std::string>& bad) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (...) {
        bad.push_back(path + ": not a number: '" + s + "'");
        return 0.0;
    }
}

inline bool to_bool(const std::string& s, const std::string& path,
                    std::vector<std::string>& bad) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    bad.push_back(path + ": not a boolean: '" + s + "'");
    return false;
}

} // namespace detail

/// Parse and fully validate a configuration. Parse errors carry line/column;
/// validation reports every violation with its field path.
inline ExperimentConfig load_config(const std::string& text) {
    const auto sections = detail::parse_ini(text);
    ExperimentConfig cfg;
    std::vector<std::string> bad;

    for (const auto& [section, entries] : sections) {
        for (const auto& [key, entry] : entries) {
            const std::string path = section + "." + key;
            const std::string& v = entry.value;
            auto num = [&] { return detail::to_num(v, path, bad); };
            auto flag = [&] { return detail::to_bool(v, path, bad); };

            if (section == "run") {
                if (key == "name") cfg.name = v;
                else bad.push_back(path + ": unknown key");
            } else if (section == "grid") {
                if (key == "nx1") cfg.nx1 = static_cast<int>(num());
                else if (key == "nx2") cfg.nx2 = static_cast<int>(num());
                else if (key == "nt") cfg.nt = static_cast<int>(num());
                else if (key == "tprime") cfg.tprime = num();
                else bad.push_back(path + ": unknown key");
            } else if (section == "epidemic") {
                if (key == "beta") cfg.epi.beta = num();
                else if (key == "gamma") cfg.epi.gamma = num();
                else if (key == "theta1") cfg.epi.theta1 = num();
                else if (key == "theta2") cfg.epi.theta2 = num();
                else if (key == "eta_s") cfg.epi.eta_s = num();
                else if (key == "eta_i") cfg.epi.eta_i = num();
                else if (key == "eta_r") cfg.epi.eta_r = num();
                else if (key == "sigma1") cfg.epi.kernel.sigma1 = num();
                else if (key == "sigma2") cfg.epi.kernel.sigma2 = num();
                else bad.push_back(path + ": unknown key");
            } else if (section == "weights") {
                if (key == "alpha_s") cfg.weights.alpha_s = num();
                else if (key == "alpha_i") cfg.weights.alpha_i = num();
                else if (key == "alpha_r") cfg.weights.alpha_r = num();
                else if (key == "alpha_v") cfg.weights.alpha_v = num();
                else if (key == "a_s") cfg.weights.a_s = num();
                else if (key == "a_i") cfg.weights.a_i = num();
                else if (key == "a_r") cfg.weights.a_r = num();
                else if (key == "a_v") cfg.weights.a_v = num();
                else if (key == "d_p") cfg.weights.d_p = num();
                else if (key == "d_v") cfg.weights.d_v = num();
                else if (key == "d_0") cfg.weights.d_0 = num();
                else if (key == "lambda") cfg.weights.lambda = num();
                else bad.push_back(path + ": unknown key");
            } else if (section == "logistics") {
                if (key == "f_max") cfg.f_max = num();
                else if (key == "c_factory") cfg.c_factory = num();
                else if (key == "factory" || key == "obstacle") {
                    std::istringstream ss(v);
                    std::string shape;
                    ss >> shape;
                    if (key == "factory" && shape == "ball") {
                        double c1, c2, r;
                        if (ss >> c1 >> c2 >> r)
                            cfg.factory_balls.push_back({c1, c2, r});
                        else
                            bad.push_back(path + ": expected 'ball c1 c2 radius'");
                    } else if (key == "obstacle" && shape == "rect") {
                        double a1, b1, a2, b2;
                        if (ss >> a1 >> b1 >> a2 >> b2)
                            cfg.obstacle_rects.push_back({a1, b1, a2, b2});
                        else
                            bad.push_back(path + ": expected 'rect x1min x1max x2min x2max'");
                    } else {
                        bad.push_back(path + ": unknown shape '" + shape + "'");
                    }
                } else
                    bad.push_back(path + ": unknown key");
            } else if (section == "initial") {
                int pop = -1;
                if (key == "rho_s") pop = S;
                else if (key == "rho_i") pop = I;
                else if (key == "rho_r") pop = R;
                else if (key == "rho_v") pop = V;
                if (pop < 0) {
                    bad.push_back(path + ": unknown key");
                } else {
                    std::istringstream ss(v);
                    std::string kind;
                    ss >> kind;
                    if (kind == "bump") {
                        InitialBump b;
                        if (ss >> b.amplitude >> b.decay >> b.c1 >> b.c2 >> b.floor)
                            cfg.initial.bumps[pop].push_back(b);
                        else
                            bad.push_back(path + ": expected 'bump amplitude decay c1 c2 floor'");
                    } else if (kind == "const") {
                        double c;
                        if (ss >> c)
                            cfg.initial.constant[pop] = c;
                        else
                            bad.push_back(path + ": expected 'const value'");
                    } else {
                        bad.push_back(path + ": unknown initial kind '" + kind + "'");
                    }
                }
            } else if (section == "solver") {
                if (key == "tau") cfg.solver.tau = num();
                else if (key == "sigma") cfg.solver.sigma = num();
                else if (key == "max_iters") cfg.solver.max_iters = static_cast<int>(num());
                else if (key == "tol") cfg.solver.tol = num();
                else if (key == "diag_every") cfg.solver.diag_every = static_cast<int>(num());
                else if (key == "dual_residual") {
                    if (v == "nonlinear") cfg.solver.dual_residual = SolverConfig::DualResidual::Nonlinear;
                    else if (v == "linearized") cfg.solver.dual_residual = SolverConfig::DualResidual::Linearized;
                    else bad.push_back(path + ": expected nonlinear|linearized");
                } else bad.push_back(path + ": unknown key");
            } else if (section == "mode") {
                if (key == "move_sir") cfg.move_sir = flag();
                else if (key == "lambda_v_only") cfg.lambda_v_only = flag();
                else if (key == "optimize_production") cfg.optimize_production = flag();
                else if (key == "fixed_production_rate") cfg.fixed_production_rate = num();
                else bad.push_back(path + ": unknown key");
            } else if (section == "output") {
                if (key == "dir") cfg.output.dir = v;
                else if (key == "snapshots") {
                    std::istringstream ss(v);
                    int t;
                    while (ss >> t) cfg.output.snapshot_times.push_back(t);
                } else if (key == "emit") {
                    cfg.output.series = v.find("series") != std::string::npos;
                    cfg.output.masses = v.find("masses") != std::string::npos;
                    cfg.output.snapshots = v.find("snapshots") != std::string::npos;
                    cfg.output.report = v.find("report") != std::string::npos;
                } else bad.push_back(path + ": unknown key");
            } else {
                bad.push_back(section + ": unknown section");
                break;
            }
        }
    }

    auto more = cfg.validate();
    bad.insert(bad.end(), more.begin(), more.end());
    if (!bad.empty()) throw ConfigError(bad);
    return cfg;
}

namespace detail {

// shortest decimal that round-trips
inline std::string num_str(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

} // namespace detail

/// Serialize back to the accepted grammar.
inline std::string write_config(const ExperimentConfig& cfg) {
    struct NumStream {
        std::ostringstream os;
        NumStream& operator<<(double v) {
            os << detail::num_str(v);
            return *this;
        }
        NumStream& operator<<(int v) {
            os << v;
            return *this;
        }
        NumStream& operator<<(const char* s) {
            os << s;
            return *this;
        }
        NumStream& operator<<(const std::string& s) {
            os << s;
            return *this;
        }
    } os;
    os << "[run]\nname = " << cfg.name << "\n\n";
    os << "[grid]\nnx1 = " << cfg.nx1 << "\nnx2 = " << cfg.nx2 << "\nnt = " << cfg.nt
       << "\ntprime = " << cfg.tprime << "\n\n";
    os << "[epidemic]\nbeta = " << cfg.epi.beta << "\ngamma = " << cfg.epi.gamma
       << "\ntheta1 = " << cfg.epi.theta1 << "\ntheta2 = " << cfg.epi.theta2
       << "\neta_s = " << cfg.epi.eta_s << "\neta_i = " << cfg.epi.eta_i
       << "\neta_r = " << cfg.epi.eta_r << "\nsigma1 = " << cfg.epi.kernel.sigma1
       << "\nsigma2 = " << cfg.epi.kernel.sigma2 << "\n\n";
    const auto& w = cfg.weights;
    os << "[weights]\nalpha_s = " << w.alpha_s << "\nalpha_i = " << w.alpha_i
       << "\nalpha_r = " << w.alpha_r << "\nalpha_v = " << w.alpha_v << "\na_s = " << w.a_s
       << "\na_i = " << w.a_i << "\na_r = " << w.a_r << "\na_v = " << w.a_v
       << "\nd_p = " << w.d_p << "\nd_v = " << w.d_v << "\nd_0 = " << w.d_0
       << "\nlambda = " << w.lambda << "\n\n";
    os << "[logistics]\nf_max = " << cfg.f_max << "\nc_factory = " << cfg.c_factory << "\n";
    for (const auto& b : cfg.factory_balls)
        os << "factory = ball " << b[0] << " " << b[1] << " " << b[2] << "\n";
    for (const auto& r : cfg.obstacle_rects)
        os << "obstacle = rect " << r.a1 << " " << r.b1 << " " << r.a2 << " " << r.b2 << "\n";
    os << "\n[initial]\n";
    const std::array<const char*, 4> keys{"rho_s", "rho_i", "rho_r", "rho_v"};
    for (int pop : {S, I, R, V}) {
        for (const auto& b : cfg.initial.bumps[pop])
            os << keys[pop] << " = bump " << b.amplitude << " " << b.decay << " " << b.c1 << " "
               << b.c2 << " " << b.floor << "\n";
        if (cfg.initial.constant[pop] != 0.0)
            os << keys[pop] << " = const " << cfg.initial.constant[pop] << "\n";
    }
    os << "\n[solver]\ntau = " << cfg.solver.tau << "\nsigma = " << cfg.solver.sigma
       << "\nmax_iters = " << cfg.solver.max_iters << "\ntol = " << cfg.solver.tol
       << "\ndiag_every = " << cfg.solver.diag_every << "\ndual_residual = "
       << (cfg.solver.dual_residual == SolverConfig::DualResidual::Nonlinear ? "nonlinear"
                                                                             : "linearized")
       << "\n\n";
    os << "[mode]\nmove_sir = " << (cfg.move_sir ? "true" : "false")
       << "\nlambda_v_only = " << (cfg.lambda_v_only ? "true" : "false")
       << "\noptimize_production = " << (cfg.optimize_production ? "true" : "false")
       << "\nfixed_production_rate = " << cfg.fixed_production_rate << "\n\n";
    os << "[output]\ndir = " << cfg.output.dir << "\n";
    if (!cfg.output.snapshot_times.empty()) {
        os << "snapshots =";
        for (int t : cfg.output.snapshot_times) os << " " << t;
        os << "\n";
    }
    return os.os.str();
}

} // namespace sirv
