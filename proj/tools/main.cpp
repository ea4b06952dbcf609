#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sirv/config.hpp"
#include "sirv/presets.hpp"
#include "sirv/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int cmd_run(const std::string& config_path, const std::string& preset_name, int nx, int nt,
            int iters, double tol, double tau, double sigma, const std::string& out_dir) {
    sirv::ExperimentConfig cfg;
    if (!preset_name.empty()) {
        cfg = sirv::preset(preset_name, nx, nt);
    } else {
        cfg = sirv::load_config(read_file(config_path));
        if (nx > 0 || nt > 0)
            throw sirv::ConfigError("grid overrides apply to --preset runs only");
    }
    if (iters > 0) cfg.solver.max_iters = iters;
    if (tol > 0) cfg.solver.tol = tol;
    if (tau > 0) cfg.solver.tau = tau;
    if (sigma > 0) cfg.solver.sigma = sigma;
    if (!out_dir.empty()) cfg.output.dir = out_dir;

    std::cout << "running '" << cfg.name << "' on " << cfg.nx1 << "x" << cfg.nx2 << "x" << cfg.nt
              << " (tau=" << cfg.solver.tau << ", sigma=" << cfg.solver.sigma
              << ", max_iters=" << cfg.solver.max_iters << ")\n";
    const auto outcome = sirv::run(cfg);
    std::cout << (outcome.report.converged ? "converged" : "stopped at max_iters") << " after "
              << outcome.report.iterations << " iterations\n"
              << "  monitor_lagrangian = " << outcome.report.monitor_final << "\n"
              << "  relative_error     = " << outcome.report.relative_error_final << "\n"
              << "  production_total   = " << outcome.report.production_total << "\n"
              << "  artifacts in " << outcome.out_dir.string() << "\n";
    return outcome.report.converged ? 0 : 2;
}

int cmd_validate(const std::string& config_path) {
    try {
        sirv::load_config(read_file(config_path));
    } catch (const sirv::ConfigError& e) {
        std::cerr << "invalid configuration (" << e.violations().size() << " problem(s)):\n";
        for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
        return 1;
    }
    std::cout << "configuration ok\n";
    return 0;
}

int cmd_norm_study(const std::string& grids_arg, const std::string& out_path) {
    std::vector<int> grids;
    std::stringstream ss(grids_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) grids.push_back(std::stoi(tok));
    const auto rows = sirv::norm_study(grids);
    std::cout << "n,grad_norm,ratio_to_prev,gradient_energy\n";
    for (const auto& r : rows)
        std::cout << r.n << "," << r.grad_norm << "," << r.ratio_to_prev << ","
                  << r.gradient_energy << "\n";
    if (!out_path.empty()) sirv::write_norm_study(rows, out_path);
    return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path) {
    const auto a = sirv::KeyValueFile::read(a_path);
    const auto b = sirv::KeyValueFile::read(b_path);
    const std::vector<std::string> keys{"production_total", "transport_cost_v",
                                        "terminal_mass_S",  "terminal_mass_I",
                                        "terminal_mass_R",  "terminal_mass_V",
                                        "cost.total"};
    std::cout << "quantity, A, B, smaller\n";
    for (const auto& k : keys) {
        if (!a.has(k) || !b.has(k)) continue;
        const double va = a.get_num(k), vb = b.get_num(k);
        std::cout << k << ", " << va << ", " << vb << ", " << (va < vb ? "A" : va > vb ? "B" : "=")
                  << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean-field SIRV vaccine production/distribution solver"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir;
    int nx = 0, nt = 0, iters = 0;
    double tol = 0, tau = 0, sigma = 0;
    auto* run = app.add_subcommand("run", "solve one experiment configuration");
    run->add_option("config", config_path, "configuration file");
    run->add_option("--preset", preset_name, "built-in experiment name");
    run->add_option("--nx", nx, "override spatial resolution (presets only)");
    run->add_option("--nt", nt, "override time levels (presets only)");
    run->add_option("--iters", iters, "override iteration budget");
    run->add_option("--tol", tol, "override stopping tolerance");
    run->add_option("--tau", tau, "override primal step");
    run->add_option("--sigma", sigma, "override dual step");
    run->add_option("--out", out_dir, "output directory");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a configuration file");
    validate->add_option("config", validate_path, "configuration file")->required();

    std::string grids = "16,32,64,128", norm_out;
    auto* norm = app.add_subcommand("norm-study", "gradient norm growth across grids");
    norm->add_option("--grids", grids, "comma-separated grid sizes");
    norm->add_option("--out", norm_out, "csv output path");

    std::string cmp_a, cmp_b;
    auto* cmp = app.add_subcommand("compare", "compare two run reports");
    cmp->add_option("reportA", cmp_a)->required();
    cmp->add_option("reportB", cmp_b)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (config_path.empty() == preset_name.empty())
                throw sirv::ConfigError("run: give exactly one of <config> or --preset");
            return cmd_run(config_path, preset_name, nx, nt, iters, tol, tau, sigma, out_dir);
        }
        if (validate->parsed()) return cmd_validate(validate_path);
        if (norm->parsed()) return cmd_norm_study(grids, norm_out);
        if (cmp->parsed()) return cmd_compare(cmp_a, cmp_b);
    } catch (const sirv::ConfigError& e) {
        std::cerr << "error:\n";
        for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
