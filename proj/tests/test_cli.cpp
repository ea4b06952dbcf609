#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sirv/config.hpp"
#include "sirv/io.hpp"
#include "sirv/presets.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SIRV_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path work_dir() {
    const auto dir = fs::temp_directory_path() / "sirv_cli_test";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("run executes a preset end to end and emits every artifact") {
    const auto out = work_dir() / "run1";
    fs::remove_all(out);
    const int rc =
        run_cli("run --preset exp1 --nx 8 --nt 8 --iters 40 --tol 1e-3 --out " + out.string());
    CHECK((rc == 0 || rc == 2));
    CHECK(fs::exists(out / "series.csv"));
    CHECK(fs::exists(out / "masses.csv"));
    CHECK(fs::exists(out / "report.txt"));
    CHECK(fs::exists(out / "rho_S_t0.bin"));

    // region columns partition the domain: left + right == total
    std::ifstream is(out / "masses.csv");
    std::string header, line;
    std::getline(is, header);
    std::vector<std::string> cols;
    {
        std::stringstream hs(header);
        std::string c;
        while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name) return i;
        FAIL("missing column " + name);
        return std::size_t{0};
    };
    const auto ct = col("total_S"), cl = col("left_S"), cr = col("right_S");
    const auto q1 = col("bottom_left_I"), q2 = col("bottom_right_I"), q3 = col("top_left_I"),
               q4 = col("top_right_I"), cti = col("total_I");
    int rows = 0;
    while (std::getline(is, line)) {
        std::vector<double> vals;
        std::stringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) vals.push_back(std::stod(tok));
        CHECK(std::abs(vals[cl] + vals[cr] - vals[ct]) < 1e-10);
        CHECK(std::abs(vals[q1] + vals[q2] + vals[q3] + vals[q4] - vals[cti]) < 1e-10);
        ++rows;
    }
    CHECK(rows == 8);

    // snapshots round-trip
    const auto snap = sirv::read_snapshot(out / "rho_S_t0.bin");
    CHECK(snap.nx1 == 8);
    CHECK(snap.nx2 == 8);
    CHECK(snap.time_index == 0);
}

TEST_CASE("validate accepts shipped presets and rejects bad configs") {
    const auto good = work_dir() / "good.cfg";
    {
        std::ofstream os(good);
        os << sirv::write_config(sirv::preset("exp2a", 16, 16));
    }
    CHECK(run_cli("validate " + good.string()) == 0);

    const auto bad = work_dir() / "bad.cfg";
    {
        auto cfg = sirv::preset("exp2a", 16, 16);
        cfg.solver.tau = 0.5;
        cfg.solver.sigma = 4.0;
        std::ofstream os(bad);
        os << sirv::write_config(cfg);
    }
    CHECK(run_cli("validate " + bad.string()) == 1);
}

TEST_CASE("run refuses ambiguous or missing sources") {
    CHECK(run_cli("run") == 1);
    const auto good = work_dir() / "amb.cfg";
    {
        std::ofstream os(good);
        os << sirv::write_config(sirv::preset("exp2a", 16, 16));
    }
    CHECK(run_cli("run " + good.string() + " --preset exp1") == 1);
    CHECK(run_cli("run --preset not-a-preset") == 1);
}

TEST_CASE("norm-study needs at least two grids and writes csv") {
    CHECK(run_cli("norm-study --grids 16") == 1);
    const auto csv = work_dir() / "norms.csv";
    CHECK(run_cli("norm-study --grids 16,32 --out " + csv.string()) == 0);
    std::ifstream is(csv);
    std::string header;
    std::getline(is, header);
    CHECK(header == "n,grad_norm,ratio_to_prev,gradient_energy");
}

TEST_CASE("compare reads two reports") {
    const auto a = work_dir() / "a.txt", b = work_dir() / "b.txt";
    sirv::KeyValueFile kva, kvb;
    kva.set("production_total", 1.0);
    kva.set("transport_cost_v", 2.0);
    kvb.set("production_total", 3.0);
    kvb.set("transport_cost_v", 1.0);
    kva.write(a);
    kvb.write(b);
    CHECK(run_cli("compare " + a.string() + " " + b.string()) == 0);
    CHECK(run_cli("compare " + a.string() + " missing.txt") == 1);
}
