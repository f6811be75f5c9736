#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "novikov/experiment.hpp"
#include "novikov/io.hpp"

using namespace novikov;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const char* env = std::getenv("NOVIKOV_TEST_TMP");
    const fs::path root = env ? fs::path(env) : fs::temp_directory_path() / "novikov_tests";
    const fs::path dir = root / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

RunResult run(const json& j, const fs::path& dir) {
    const auto text = j.dump();
    return run_experiment(parse_config(j), text, dir);
}

} // namespace

TEST_CASE("doubles round-trip through their text form") {
    for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 2.2250738585072014e-308}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("CSV headers") {
    std::ostringstream a, b, c, d, e;
    write_csv(a, GridFunction::zeros(1.0, 8));
    CHECK(first_line(a.str()) == "x,value");
    CharState s;
    s.x = s.u = s.alpha = s.xi = std::vector<double>(8, 1.0);
    write_csv(b, s);
    CHECK(first_line(b.str()) == "Y,x,u,alpha,xi");
    PeakonTrajectory traj;
    traj.frames.push_back({0.0, {1.0, -0.5}, {-0.5, 0.5}});
    write_csv(c, traj);
    CHECK(first_line(c.str()) == "t,p1,p2,q1,q2");
    const std::vector<EnergySample> rows{{}};
    write_csv(d, rows);
    CHECK(first_line(d.str()) == "t,E,F,E_win,F_win,L_win");
    const std::vector<MetricRow> m{{}};
    write_csv(e, m);
    CHECK(first_line(e.str()) == "pair_id,upper_bound,sobolev_rhs,weighted_l1,kr");
}

TEST_CASE("JSON round trips") {
    const auto f = GridFunction::sample(2.0, 9, [](double x) { return x * x / 3.0; });
    const auto g = grid_function_from_json(to_json(f));
    CHECK(g.x0 == f.x0);
    CHECK(g.dx == f.dx);
    CHECK(g.values == f.values);

    CharState s;
    s.t = 0.7;
    s.Y0 = -1.0;
    s.dY = 0.25;
    s.x = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    s.u = s.x;
    s.alpha = s.x;
    s.xi = std::vector<double>(8, 1.0 / 3.0);
    const auto r = char_state_from_json(json::parse(to_json(s).dump()));
    CHECK(r.t == s.t);
    CHECK(r.Y0 == s.Y0);
    CHECK(r.dY == s.dY);
    CHECK(r.xi == s.xi);
    CHECK(r.alpha == s.alpha);
}

TEST_CASE("git blob hash") {
    CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
    CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("config parsing and validation") {
    const json ok = {{"command", "peakons"},
                     {"initial_data", {{"type", "peakons"}, {"peakons", {{1.0, -0.5}, {-0.5, 0.5}}}}},
                     {"time", {{"t_end", 1.0}, {"dt", 1e-3}}}};
    const auto cfg = parse_config(ok);
    CHECK(cfg.command == Command::peakons);
    REQUIRE(cfg.initial.peakons.size() == 2);
    CHECK(cfg.initial.peakons[1].p == -0.5);
    CHECK(cfg.initial.peakons[1].q == 0.5);
    CHECK(cfg.grading.strength == 30.0);
    CHECK(parse_config(ok, std::string("semilinear")).command == Command::semilinear);

    auto bad = ok;
    bad["grid"] = {{"n", 1000}};
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = ok;
    bad["bogus"] = 1;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = ok;
    bad["time"]["dt"] = -1.0;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = ok;
    bad["initial_data"] = {{"type", "wavelet"}};
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = ok;
    bad["solver"] = "euler";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    CHECK_THROWS_AS(parse_config(ok, std::string("dance")), ConfigError);

    const json gauss = {{"command", "smooth"},
                        {"initial_data", {{"type", "gaussian"}, {"amp", 0.5}, {"width", 1.0}}}};
    const auto gc = parse_config(gauss);
    CHECK(gc.grading.strength == 0.0);
    const auto prof = make_profile(gc.initial);
    CHECK(prof.u(0.0) == doctest::Approx(0.5));
    CHECK(prof.ux(1.0) == doctest::Approx(-std::exp(-1.0)));
}

TEST_CASE("a peakon run writes its artifacts and manifest") {
    const json j = {{"command", "peakons"},
                    {"initial_data", {{"type", "peakons"}, {"peakons", {{1.0, -0.5}, {-0.5, 0.5}}}}},
                    {"time", {{"t_end", 3.0}, {"dt", 1e-3}}}};
    const auto dir = scratch_dir("peakons");
    const auto r = run(j, dir);
    CHECK(r.exit_code == kExitOk);
    CHECK(fs::exists(dir / "trajectory.csv"));
    const auto summary = read_json(dir / "peakon_summary.json");
    CHECK(summary["halt"] == "spacing_collapse");
    CHECK(summary["crossing"]["t_star"].get<double>() > 2.4);
    const auto manifest = read_json(dir / "manifest.json");
    CHECK(manifest["command"] == "peakons");
    CHECK(manifest["input_hash"] == git_blob_hash(j.dump()));
    CHECK(manifest["exit_code"] == 0);
    CHECK(fs::exists(dir / "timing.json"));
}

TEST_CASE("smooth and semilinear runs are deterministic") {
    const json j = {{"command", "semilinear"},
                    {"initial_data", {{"type", "peakons"}, {"peakons", {{1.0, -0.5}, {-0.5, 0.5}}}}},
                    {"grid", {{"n", 256}}},
                    {"time", {{"t_end", 0.1}, {"dt", 1e-2}}}};
    const auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
    REQUIRE(run(j, a).exit_code == kExitOk);
    REQUIRE(run(j, b).exit_code == kExitOk);
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file() || e.path().filename() == "timing.json") continue;
        const auto rel = fs::relative(e.path(), a);
        CHECK(slurp(e.path()) == slurp(b / rel));
    }
    CHECK(fs::exists(a / "energy_series.csv"));
    CHECK(fs::exists(a / "index.json"));
}

TEST_CASE("concentration without a collision exits with code 4") {
    const json j = {{"command", "concentration"},
                    {"initial_data", {{"type", "peakons"}, {"peakons", {{1.0, 0.0}, {0.5, 1.0}}}}},
                    {"grid", {{"n", 256}}},
                    {"time", {{"t_end", 0.1}, {"dt", 1e-2}}}};
    const auto dir = scratch_dir("nocollision");
    const auto r = run(j, dir);
    CHECK(r.exit_code == kExitNoCollision);
    CHECK(read_json(dir / "manifest.json")["exit_code"] == kExitNoCollision);
}

TEST_CASE("smooth and CH runs report drift and growth") {
    const json j = {{"initial_data", {{"type", "gaussian"}, {"amp", 0.5}, {"width", 1.0}}},
                    {"grid", {{"n", 1024}}},
                    {"time", {{"t_end", 0.1}, {"dt", 1e-2}}}};
    const auto ds = scratch_dir("smooth");
    CHECK(run_experiment(parse_config(j, std::string("smooth")), j.dump(), ds).exit_code == kExitOk);
    CHECK(fs::exists(ds / "final_u.json"));
    const auto dc = scratch_dir("ch");
    CHECK(run_experiment(parse_config(j, std::string("ch")), j.dump(), dc).exit_code == kExitOk);
    CHECK(read_json(dc / "ch_summary.json").contains("growth"));
}

TEST_CASE("metric run with seeded pairs") {
    const json j = {{"command", "metric"}, {"grid", {{"n", 512}}}, {"seed", 7}, {"metric", {{"pairs", 3}, {"n_theta", 9}}}};
    const auto dir = scratch_dir("metric");
    CHECK(run(j, dir).exit_code == kExitOk);
    const auto s = read_json(dir / "metric_summary.json");
    CHECK(s["pairs"] == 3);
    CHECK(s["max_ratio_upper_over_sobolev"].get<double>() > 0.0);
}

TEST_CASE("seeded random families are reproducible and admissible") {
    std::mt19937_64 a(42), b(42);
    CHECK(random_gaussian_field(a, 10.0, 256).values == random_gaussian_field(b, 10.0, 256).values);
    const auto f = random_test_function(a, 10.0, 256);
    CHECK(sup_norm(f.values) <= 1.0);
}
