// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Usage: acceptance [work_dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "novikov/camassa_holm.hpp"
#include "novikov/energy.hpp"
#include "novikov/experiment.hpp"
#include "novikov/io.hpp"
#include "novikov/peakon.hpp"
#include "novikov/semilinear.hpp"
#include "novikov/smooth.hpp"
#include "novikov/tangent.hpp"

using namespace novikov;
namespace fs = std::filesystem;

namespace tol {
constexpr double peakon_q = 1e-8;
constexpr double peakon_p = 1e-12;
constexpr double green_sup = 1e-3;
constexpr double green_order = 3.5;
constexpr double drift_E = 1e-4;
constexpr double drift_F = 1e-3;
constexpr double e_win_fraction = 0.02;
constexpr double l_win_fraction = 0.05;
constexpr double l_win_spread = 0.10;
constexpr double picard_tol = 1e-10;
constexpr double picard_gap = 1e-4;
constexpr double picard_ratio = 0.5;
constexpr double residual_floor = 1e-12;
constexpr double flat_cost = 1e-6;
constexpr double cancellation = 1e-6;
constexpr double rate_spread = 0.20;
constexpr double growth_slack = 1.05;
constexpr double metric_C = 10.0;
constexpr double ch_drift_E = 1e-4;
}  // namespace tol

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::vector<double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

RunResult run_config(const json& j, const fs::path& dir) {
    fs::remove_all(dir);
    const std::string text = j.dump(2) + "\n";
    return run_experiment(parse_config(j), text, dir);
}

json concentration_config(std::size_t n) {
    return {{"command", "concentration"},
            {"initial_data", {{"type", "peakons"}, {"peakons", {{1.0, -0.5}, {-0.5, 0.5}}}}},
            {"grid", {{"L", 20.0}, {"n", n}}},
            {"time", {{"t_end", 3.1}, {"dt", 1e-3}}},
            {"solver", "rk4"}};
}

GridFunction gaussian(double amp, std::size_t n = 4096) {
    return GridFunction::sample(20.0, n, [amp](double x) { return amp * std::exp(-x * x); });
}

TangentFrame generic_tangent(const GridFunction& u) {
    std::vector<double> v(u.size()), w(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double x = u.x(i);
        v[i] = 0.2 * x * std::exp(-x * x) + 0.1 * std::exp(-(x - 1.0) * (x - 1.0));
        w[i] = 0.05 * std::exp(-0.5 * x * x);
    }
    return TangentFrame::from_fields(std::move(v), std::move(w), u.dx);
}

TangentFrame translation(const GridFunction& u, double h) {
    const auto ux = derivative(u.values, u.dx);
    const auto uxx = second_derivative(u.values, u.dx);
    TangentFrame tf = TangentFrame::zero(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        tf.v[i] = -h * ux[i];
        tf.vx[i] = -h * uxx[i];
        tf.w[i] = h;
    }
    return tf;
}

std::vector<double> uniform_times(std::size_t count, double dt) {
    std::vector<double> t(count);
    for (std::size_t k = 0; k < count; ++k) t[k] = static_cast<double>(k) * dt;
    return t;
}

// Largest norms[k] / (e^{C t_k} norms[0]) for the fitted C.
double worst_bound_ratio(const GrowthReport& g) {
    double worst = 0.0;
    for (std::size_t k = 0; k < g.times.size(); ++k) {
        worst = std::max(worst, g.norms[k] / (std::exp(g.fitted_rate * g.times[k]) * g.norms[0]));
    }
    return worst;
}

struct GrowthPair {
    GrowthReport coarse, fine;
};

GrowthPair growth_under_halving(bool camassa_holm) {
    const auto u0 = gaussian(0.5);
    const auto tf0 = generic_tangent(u0);
    GrowthReport out[2];
    const double dts[2] = {0.01, 0.005};
    for (int k = 0; k < 2; ++k) {
        const double dt = dts[k];
        if (camassa_holm) {
            const auto traj = ch_evolve(u0, 0.5, dt);
            const auto frames = ch_evolve_tangent(traj, dt, tf0);
            out[k] = ch_verify_growth(uniform_times(traj.size(), dt), traj, frames);
        } else {
            const auto traj = smooth_evolve(u0, 0.5, dt);
            const auto frames = evolve_tangent(traj, dt, tf0);
            out[k] = verify_growth(uniform_times(traj.size(), dt), traj, frames);
        }
    }
    return {out[0], out[1]};
}

Outcome growth_outcome(const GrowthPair& g) {
    const double spread = std::abs(g.fine.fitted_rate - g.coarse.fitted_rate) / std::abs(g.coarse.fitted_rate);
    const double worst = std::max(worst_bound_ratio(g.coarse), worst_bound_ratio(g.fine));
    const bool pass = spread <= tol::rate_spread && worst <= tol::growth_slack;
    return {pass, fmt("C(dt=0.01)=%.5f C(dt=0.005)=%.5f spread=%.2e worst norm/bound=%.4f", g.coarse.fitted_rate,
                      g.fine.fitted_rate, spread, worst)};
}

// ---------------------------------------------------------------------------

Outcome single_peakon() {
    const auto traj = integrate_peakons({0.0, {1.0}, {0.0}}, 2.0, 1e-3);
    double eq = 0.0, ep = 0.0;
    for (const auto& f : traj.frames) {
        eq = std::max(eq, std::abs(f.q[0] - f.t));
        ep = std::max(ep, std::abs(f.p[0] - 1.0));
    }
    const bool pass = traj.frames.back().t > 2.0 - 1e-12 && eq <= tol::peakon_q && ep <= tol::peakon_p;
    return {pass, fmt("max|q-t|=%.2e max|p-1|=%.2e", eq, ep)};
}

double green_error(std::size_t n) {
    auto h = [](double x) { return std::exp(-x * x); };
    auto h2 = [](double x) { return (4.0 * x * x - 2.0) * std::exp(-x * x); };
    const auto f = GridFunction::sample(20.0, n, [&](double x) { return h(x) - h2(x); });
    const auto g = exp_convolution(f, KernelMode::symmetric);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e = std::max(e, std::abs(g.values[i] - h(g.x(i))));
    return e;
}

Outcome green_identity() {
    const double e1 = green_error(4096);
    const double e2 = green_error(8191);  // dx halved exactly
    const bool pass = e1 <= tol::green_sup && e1 / e2 >= tol::green_order;
    return {pass, fmt("sup error n=4096 %.2e, halved dx %.2e, ratio %.2f", e1, e2, e1 / e2)};
}

struct ConcentrationRuns {
    fs::path root;
    std::vector<std::size_t> ns{1024, 2048, 4096};
    std::vector<RunResult> results;

    fs::path dir(std::size_t n) const { return root / ("concentration_n" + std::to_string(n)); }
};

Outcome conservation(const ConcentrationRuns& runs) {
    const auto dir = runs.dir(4096);
    if (runs.results.back().exit_code != kExitOk) return {false, "run exit code " + std::to_string(runs.results.back().exit_code)};
    const auto rows = read_csv(dir / "energy_series.csv");
    const auto events = read_json(dir / "index.json")["events"];
    if (events.empty()) return {false, "no singular event"};
    const double t_star = events[0]["t"].get<double>();
    const double E0 = rows.front()[1], F0 = rows.front()[2];
    double dE = 0.0, dF = 0.0;
    std::size_t after = 0;
    for (const auto& r : rows) {
        dE = std::max(dE, std::abs(r[1] - E0) / E0);
        dF = std::max(dF, std::abs(r[2] - F0) / F0);
        if (r[0] > t_star) ++after;
    }
    const double t_last = rows.back()[0];
    const bool covered = t_last >= t_star + 0.5 - 1e-9 && after > 0;
    const bool pass = covered && dE <= tol::drift_E && dF <= tol::drift_F;
    return {pass, fmt("%zu slices to t=%.3f (t*=%.4f): max rel drift E %.2e, F %.2e", rows.size(), t_last, t_star,
                      dE, dF)};
}

Outcome concentration(const ConcentrationRuns& runs) {
    std::vector<double> e_ratio, l_win;
    double F0 = 0.0;
    bool level_ok = true, flags_ok = true;
    std::string levels;
    for (std::size_t k = 0; k < runs.ns.size(); ++k) {
        if (runs.results[k].exit_code != kExitOk) {
            return {false, fmt("n=%zu exit code %d", runs.ns[k], runs.results[k].exit_code)};
        }
        const auto dir = runs.dir(runs.ns[k]);
        const auto ev = read_json(dir / "index.json")["events"];
        const auto rep = read_json(dir / "energy_report.json");
        const auto rows = read_csv(dir / "energy_series.csv");
        F0 = rows.front()[2];
        const double level = ev[0]["level"].get<double>();
        level_ok = level_ok && ev[0]["kind"] == "crossing" && std::abs(level + kPi) < 1e-12;
        flags_ok = flags_ok && rep["E_vanishes"].get<bool>() && rep["L_positive"].get<bool>();
        e_ratio.push_back(rep["window"]["E_win"].get<double>() / rep["E_total"].get<double>());
        l_win.push_back(rep["window"]["L_win"].get<double>());
    }
    bool e_ok = true, l_ok = true;
    for (std::size_t k = 0; k < e_ratio.size(); ++k) {
        e_ok = e_ok && e_ratio[k] <= tol::e_win_fraction && (k == 0 || e_ratio[k] < e_ratio[k - 1]);
        l_ok = l_ok && l_win[k] >= tol::l_win_fraction * F0 &&
               std::abs(l_win[k] - l_win.back()) <= tol::l_win_spread * l_win.back();
    }
    const bool pass = level_ok && flags_ok && e_ok && l_ok;
    return {pass, fmt("first level -pi: %s; E_win/E = %.1e, %.1e, %.1e; L_win = %.4f, %.4f, %.4f (0.05 F0 = %.4f)",
                      level_ok ? "yes" : "no", e_ratio[0], e_ratio[1], e_ratio[2], l_win[0], l_win[1], l_win[2],
                      tol::l_win_fraction * F0)};
}

Outcome cross_solver() {
    const auto prof = peakon_profile({0.0, {1.0, -0.5}, {-0.5, 0.5}});
    const auto s0 = to_characteristic(prof, 20.0, 4096, {30.0, 0.05});
    PicardOptions po;
    po.tol = tol::picard_tol;
    po.slices = 50;
    const auto pic = picard_solve(s0, 0.05, po);
    CharRunOptions opt;
    opt.t_end = 0.05;
    opt.dt = 1e-3;
    const auto rk = evolve_rk4(s0, opt).slices.back();
    const double gap = std::max({sup_distance(pic.state.u, rk.u), sup_distance(pic.state.alpha, rk.alpha),
                                 sup_distance(pic.state.xi, rk.xi)});
    double worst = 0.0;
    for (std::size_t k = 1; k < pic.residuals.size(); ++k) {
        if (pic.residuals[k - 1] > tol::residual_floor) worst = std::max(worst, pic.residuals[k] / pic.residuals[k - 1]);
    }
    const bool pass = gap <= tol::picard_gap && worst < tol::picard_ratio && pic.residuals.back() < tol::picard_tol;
    return {pass, fmt("%d iterations, sup gap %.2e, worst residual ratio %.3f", pic.iterations, gap, worst)};
}

Outcome finsler_values() {
    const std::size_t n = 4096;
    const double L = 20.0, h = 0.3;
    TangentFrame flat = TangentFrame::zero(n);
    flat.w.assign(n, h);
    const double exact = 2.0 * h * (1.0 - std::exp(-L));  // 2|h| on the truncated line
    const double flat_err = std::abs(finsler_cost(GridFunction::zeros(L, n), flat).total - exact);
    const auto u = gaussian(0.5, n);
    const auto c = finsler_cost(u, translation(u, h));
    const double rel = std::max({c.I2, c.I3, c.I4}) / c.I1;
    const bool pass = flat_err <= tol::flat_cost && rel <= tol::cancellation;
    return {pass, fmt("flat |cost-2|h||=%.2e; translation I1=%.4f max(I2,I3,I4)/I1=%.2e", flat_err, c.I1, rel)};
}

Outcome growth() { return growth_outcome(growth_under_halving(false)); }

Outcome metric(const fs::path& root) {
    const json j = {{"command", "metric"}, {"grid", {{"L", 20.0}, {"n", 4096}}}, {"seed", 2024},
                    {"metric", {{"pairs", 20}, {"n_theta", 33}}}};
    const auto dir = root / "metric";
    const auto r = run_config(j, dir);
    if (r.exit_code != kExitOk) return {false, "exit code " + std::to_string(r.exit_code)};
    const auto s = read_json(dir / "metric_summary.json");
    const double r1 = s["max_ratio_upper_over_sobolev"].get<double>();
    const double r2 = s["max_ratio_weighted_l1_over_upper"].get<double>();
    const double r3 = s["max_ratio_kr_over_unweighted_upper"].get<double>();
    const bool pass = r1 <= tol::metric_C && r2 <= tol::metric_C && r3 <= 1.0;
    return {pass, fmt("C=%.0f; max ratios upper/sobolev %.3f, weighted_l1/upper %.3f, kr/d* %.3f", tol::metric_C, r1,
                      r2, r3)};
}

Outcome camassa_holm() {
    const auto u0 = gaussian(0.5);
    const auto traj = ch_evolve(u0, 0.5, 0.01);
    const double e0 = energy_E(u0);
    double drift = 0.0;
    for (const auto& u : traj) drift = std::max(drift, std::abs(energy_E(u) - e0) / e0);
    const auto c = ch_finsler_cost(u0, translation(u0, 0.3));
    const double rel = std::max(c.I2, c.I3) / c.I1;
    const auto g = growth_outcome(growth_under_halving(true));
    const bool pass = drift <= tol::ch_drift_E && rel <= tol::cancellation && g.pass;
    return {pass, fmt("H1 drift %.2e; translation max(I2,I3)/I1 %.2e; ", drift, rel) + g.detail};
}

Outcome determinism(const ConcentrationRuns& runs) {
    const auto first = runs.dir(4096);
    const auto second = runs.root / "concentration_n4096_repeat";
    const auto r = run_config(concentration_config(4096), second);
    if (r.exit_code != runs.results.back().exit_code) return {false, "exit codes differ"};
    std::size_t compared = 0, differing = 0;
    std::vector<std::string> names_a, names_b;
    for (const auto& e : fs::recursive_directory_iterator(first)) {
        if (e.is_regular_file() && e.path().filename() != "timing.json") names_a.push_back(fs::relative(e.path(), first).string());
    }
    for (const auto& e : fs::recursive_directory_iterator(second)) {
        if (e.is_regular_file() && e.path().filename() != "timing.json") names_b.push_back(fs::relative(e.path(), second).string());
    }
    std::sort(names_a.begin(), names_a.end());
    std::sort(names_b.begin(), names_b.end());
    if (names_a != names_b) return {false, "file sets differ"};
    for (const auto& name : names_a) {
        ++compared;
        if (slurp(first / name) != slurp(second / name)) ++differing;
    }
    return {differing == 0 && compared > 0,
            fmt("%zu files compared (timing.json excluded), %zu differ", compared, differing)};
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "novikov_acceptance";
    fs::create_directories(root);

    ConcentrationRuns runs;
    runs.root = root;
    bool all = true;
    auto report = [&](int id, const char* name, const std::function<Outcome()>& f) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2d %-28s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), sec);
        std::fflush(stdout);
        all = all && o.pass;
    };

    report(1, "single-peakon exactness", single_peakon);
    report(2, "Green's-function identity", green_identity);
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t n : runs.ns) runs.results.push_back(run_config(concentration_config(n), runs.dir(n)));
    std::printf("       concentration runs n=1024,2048,4096 finished (%.1f s)\n",
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    report(3, "conservation across breaking", [&] { return conservation(runs); });
    report(4, "collision and concentration", [&] { return concentration(runs); });
    report(5, "Picard vs RK4", cross_solver);
    report(6, "Finsler analytic values", finsler_values);
    report(7, "growth bound", growth);
    report(8, "metric comparisons", [&] { return metric(root); });
    report(9, "Camassa-Holm", camassa_holm);
    report(10, "determinism", [&] { return determinism(runs); });
    std::printf("%s\n", all ? "all acceptance criteria passed" : "some acceptance criteria FAILED");
    return all ? 0 : 1;
}
