#include "novikov/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "novikov/camassa_holm.hpp"
#include "novikov/energy.hpp"
#include "novikov/peakon.hpp"
#include "novikov/semilinear.hpp"
#include "novikov/smooth.hpp"
#include "novikov/tangent.hpp"

namespace novikov {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kDefaultGrading = 30.0;
constexpr std::size_t kDefaultStoredSlices = 20;

const std::pair<Command, const char*> kCommands[] = {
    {Command::peakons, "peakons"}, {Command::semilinear, "semilinear"}, {Command::smooth, "smooth"},
    {Command::metric, "metric"},   {Command::ch, "ch"},                 {Command::concentration, "concentration"},
};

template <class T>
T field(const json& j, const char* key, const char* where) {
    if (!j.contains(key)) throw ConfigError(std::string(where) + ": missing \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(where) + ": bad type for \"" + key + "\"");
    }
}

template <class T>
T field_or(const json& j, const char* key, T fallback, const char* where) {
    return j.contains(key) ? field<T>(j, key, where) : fallback;
}

void require_object(const json& j, const char* where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
    for (const auto& [k, _] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) == allowed.end()) {
            throw ConfigError(std::string(where) + ": unknown key \"" + k + "\"");
        }
    }
}

void parse_term(const json& j, InitialData& out) {
    if (!j.is_object()) throw ConfigError("initial_data: expected an object");
    const auto type = field<std::string>(j, "type", "initial_data");
    if (type == "peakons") {
        require_object(j, "initial_data", {"type", "peakons"});
        const auto& list = j.at("peakons");
        if (!list.is_array() || list.empty()) throw ConfigError("initial_data: \"peakons\" must be a non-empty list");
        for (const auto& e : list) {
            if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                out.peakons.push_back({e[0].get<double>(), e[1].get<double>()});
            } else if (e.is_object()) {
                require_object(e, "peakon", {"p", "q"});
                out.peakons.push_back({field<double>(e, "p", "peakon"), field<double>(e, "q", "peakon")});
            } else {
                throw ConfigError("initial_data: a peakon is [p, q] or {\"p\": .., \"q\": ..}");
            }
        }
    } else if (type == "gaussian") {
        require_object(j, "initial_data", {"type", "amp", "width", "center"});
        GaussianTerm g{field<double>(j, "amp", "gaussian"), field<double>(j, "width", "gaussian"),
                       field_or<double>(j, "center", 0.0, "gaussian")};
        if (!(g.width > 0.0)) throw ConfigError("gaussian: width must be positive");
        out.gaussians.push_back(g);
    } else if (type == "sum") {
        require_object(j, "initial_data", {"type", "terms"});
        const auto& terms = j.at("terms");
        if (!terms.is_array() || terms.empty()) throw ConfigError("sum: \"terms\" must be a non-empty list");
        for (const auto& t : terms) parse_term(t, out);
    } else {
        throw ConfigError("initial_data: unknown type \"" + type + "\"");
    }
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Collects the files of one run.
struct Artifacts {
    fs::path dir;
    std::vector<std::string> files;

    void text(const std::string& rel, const std::string& content) {
        write_file(dir / rel, content);
        files.push_back(rel);
    }
    void json_file(const std::string& rel, const json& j) { text(rel, dump(j)); }
    template <class Writer>
    void csv(const std::string& rel, Writer&& w) {
        std::ostringstream os;
        w(os);
        text(rel, os.str());
    }
};

struct RunLog {
    std::vector<double> times;
    json events = json::array();
    std::string note;
};

std::string slice_name(const char* stem, std::size_t k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "slices/%s_%05zu.csv", stem, k);
    return buf;
}

std::size_t store_stride(const ExperimentConfig& cfg, std::size_t steps) {
    if (cfg.store_every) return std::max<std::size_t>(1, *cfg.store_every);
    return std::max<std::size_t>(1, steps / kDefaultStoredSlices);
}

std::size_t step_count(double t_end, double dt) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9)));
}

double require_t_end(const ExperimentConfig& cfg) {
    if (!cfg.t_end) throw ConfigError("time: \"t_end\" is required for this command");
    return *cfg.t_end;
}

void require_initial(const ExperimentConfig& cfg) {
    if (!cfg.has_initial) throw ConfigError("\"initial_data\" is required for this command");
}

PeakonState peakon_state(const InitialData& d) {
    PeakonState s;
    for (const auto& pk : d.peakons) {
        s.p.push_back(pk.p);
        s.q.push_back(pk.q);
    }
    return s;
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

EnergySample line_energies(double t, const GridFunction& u) {
    const auto ux = derivative(u.values, u.dx);
    std::vector<double> q(ux.size());
    for (std::size_t i = 0; i < ux.size(); ++i) q[i] = ux[i] * ux[i] * ux[i] * ux[i];
    const double E = energy_E(u), F = energy_F(u);
    return {t, E, F, E, F, trapezoid_integral(q, u.dx)};
}

json drift_summary(std::span<const EnergySample> series) {
    double dE = 0.0, dF = 0.0;
    for (const auto& r : series) {
        dE = std::max(dE, relative(r.E, series.front().E));
        dF = std::max(dF, relative(r.F, series.front().F));
    }
    return {{"E0", series.front().E}, {"F0", series.front().F}, {"max_rel_E_drift", dE}, {"max_rel_F_drift", dF}};
}

int run_peakons(const ExperimentConfig& cfg, Artifacts& art, RunLog& log) {
    require_initial(cfg);
    if (!cfg.initial.gaussians.empty() || cfg.initial.peakons.empty()) {
        throw ConfigError("peakons: initial data must be a pure peakon list");
    }
    const double t_end = require_t_end(cfg);
    PeakonState s0 = peakon_state(cfg.initial);
    try {
        s0.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("peakons: ") + e.what());
    }
    PeakonTrajectory traj;
    int code = kExitOk;
    try {
        traj = integrate_peakons(s0, t_end, cfg.dt);
    } catch (const PeakonBlowup& e) {
        traj = e.partial();
        code = kExitBlowup;
    }
    if (traj.halt == PeakonHalt::amplitude_blowup) code = kExitBlowup;
    art.csv("trajectory.csv", [&](std::ostream& os) { write_csv(os, traj); });
    for (const auto& f : traj.frames) log.times.push_back(f.t);

    json summary = {{"halt", traj.halt == PeakonHalt::none             ? "none"
                             : traj.halt == PeakonHalt::spacing_collapse ? "spacing_collapse"
                                                                         : "amplitude_blowup"},
                    {"energy_initial", peakon_energy(traj.frames.front())},
                    {"energy_final", peakon_energy(traj.frames.back())},
                    {"crossing", nullptr}};
    if (const auto c = detect_crossing(traj)) {
        summary["crossing"] = {{"t_star", c->t_star}, {"q_star", c->q_star}};
        log.events.push_back({{"t", c->t_star}, {"Y", nullptr}, {"kind", "peakon_crossing"}});
    }
    art.json_file("peakon_summary.json", summary);
    if (code == kExitBlowup) log.note = "blowup";
    return code;
}

// Characteristic run shared by the semilinear and concentration commands.
int run_characteristic(const ExperimentConfig& cfg, Artifacts& art, RunLog& log, bool concentration) {
    require_initial(cfg);
    const InitialProfile profile = make_profile(cfg.initial);
    if (concentration && profile.kinks.size() < 2) {
        throw ConfigError("concentration: needs at least two peakons to define the window");
    }
    double t_end;
    if (cfg.t_end) {
        t_end = *cfg.t_end;
    } else if (concentration && cfg.initial.gaussians.empty()) {
        // Half a time unit past the collision predicted by the peakon ODEs.
        const auto traj = integrate_peakons(peakon_state(cfg.initial), 20.0, cfg.dt);
        const auto c = detect_crossing(traj);
        if (!c) throw ConfigError("concentration: peakon data do not collide; give time.t_end");
        t_end = c->t_star + 0.5;
    } else {
        t_end = require_t_end(cfg);
    }

    LabelGrading grading = cfg.grading;
    const CharState s0 = to_characteristic(profile, cfg.L, cfg.n, grading);
    double Y1 = s0.Y0, Y2 = s0.Y_end();
    if (profile.kinks.size() >= 2) {
        Y1 = profile_label(profile, profile.kinks.front(), grading);
        Y2 = profile_label(profile, profile.kinks.back(), grading);
    }

    const std::size_t steps = step_count(t_end, cfg.dt);
    const std::size_t stride = store_stride(cfg, steps);
    std::vector<EnergySample> series;
    SingularityTracker tracker;
    std::vector<CharState> bracket;  // last slice before and first slice after the first crossing
    std::optional<CharState> prev;
    std::size_t observed = 0;
    double max_x_drift = 0.0;
    std::size_t drift_warnings = 0;
    std::vector<int> picard_iterations;

    auto observe = [&](const CharState& s) {
        const auto tot = char_energy(s);
        const auto win = char_energy(s, Y1, Y2);
        series.push_back({s.t, tot.E, tot.F, win.E, win.F, win.L});
        const bool had = tracker.has_crossing();
        tracker.observe(s);
        if (!had && tracker.has_crossing() && prev) bracket = {*prev, s};
        prev = s;
        if (observed % stride == 0) {
            art.csv(slice_name("slice", log.times.size()), [&](std::ostream& os) { write_csv(os, s); });
            log.times.push_back(s.t);
        }
        ++observed;
    };

    int code = kExitOk;
    try {
        if (cfg.solver == SolverKind::rk4) {
            CharRunOptions opt;
            opt.t_end = t_end;
            opt.dt = cfg.dt;
            opt.store_every = steps;
            opt.observer = observe;
            const CharRun run = evolve_rk4(s0, opt);
            max_x_drift = run.max_x_drift;
            drift_warnings = run.drift_warnings;
        } else {
            CharState s = s0;
            observe(s);
            while (s.t < t_end - 1e-12) {
                const double tau = std::min(cfg.picard_window, t_end - s.t);
                PicardOptions po;
                po.slices = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(tau / cfg.dt)));
                const auto res = picard_solve(s, tau, po);
                picard_iterations.push_back(res.iterations);
                s = res.state;
                observe(s);
            }
        }
    } catch (const NumericalError& e) {
        code = kExitBlowup;
        log.note = std::string("blowup: ") + e.what();
    }
    if (prev && (observed - 1) % stride != 0) {
        art.csv(slice_name("slice", log.times.size()), [&](std::ostream& os) { write_csv(os, *prev); });
        log.times.push_back(prev->t);
    }

    const auto events = tracker.events();
    json ev = json::array();
    for (const auto& e : events) {
        ev.push_back(to_json(e));
        log.events.push_back({{"t", e.t}, {"Y", e.Y}, {"kind", e.kind}});
    }
    art.csv("energy_series.csv", [&](std::ostream& os) { write_csv(os, series); });
    art.json_file("index.json", {{"times", log.times},
                                 {"grid", {{"n", s0.size()}, {"Y0", s0.Y0}, {"dY", s0.dY}, {"L", cfg.L}}},
                                 {"window", {{"Y1", Y1}, {"Y2", Y2}}},
                                 {"events", ev}});
    json summary = drift_summary(series);
    summary["t_end"] = t_end;
    summary["solver"] = cfg.solver == SolverKind::rk4 ? "rk4" : "picard";
    summary["label_grading"] = {{"strength", grading.strength}, {"width", grading.width}};
    summary["max_x_drift"] = max_x_drift;
    summary["x_drift_warnings"] = drift_warnings;
    if (!picard_iterations.empty()) summary["picard_iterations"] = picard_iterations;
    if (prev) art.json_file("final_state.json", to_json(*prev));
    art.json_file("semilinear_summary.json", summary);
    if (code != kExitOk || !concentration) return code;

    if (!tracker.has_crossing() || bracket.empty()) {
        log.note = "no collision detected";
        return kExitNoCollision;
    }
    // A slice exactly at the first crossing time, advanced from the last slice before it.
    const double t_star = events.front().t;
    if (t_star > bracket.front().t) {
        bracket.insert(bracket.begin() + 1, step_rk4(bracket.front(), t_star - bracket.front().t));
    }
    const auto report = concentration_report(bracket, events, Y1, Y2, series.front().F);
    art.json_file("energy_report.json", to_json(report));
    return kExitOk;
}

template <class Step, class Summary>
int run_line_solver(const ExperimentConfig& cfg, Artifacts& art, RunLog& log, Step step, Summary extra,
                    const char* summary_name) {
    require_initial(cfg);
    if (!cfg.initial.peakons.empty()) throw ConfigError("smooth solvers need smooth (Gaussian) initial data");
    const double t_end = require_t_end(cfg);
    const InitialProfile profile = make_profile(cfg.initial);
    GridFunction u = GridFunction::sample(cfg.L, cfg.n, profile.u);
    const std::size_t steps = step_count(t_end, cfg.dt);
    const std::size_t stride = store_stride(cfg, steps);
    std::vector<EnergySample> series{line_energies(0.0, u)};
    std::vector<GridFunction> traj{u};
    art.csv(slice_name("u", 0), [&](std::ostream& os) { write_csv(os, u); });
    log.times.push_back(0.0);
    int code = kExitOk;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = std::min(t_end, static_cast<double>(k) * cfg.dt);
        try {
            u = step(u, t - series.back().t);
        } catch (const NumericalError& e) {
            code = kExitBlowup;
            log.note = std::string("blowup: ") + e.what();
            break;
        }
        series.push_back(line_energies(t, u));
        traj.push_back(u);
        if (k % stride == 0 || k == steps) {
            art.csv(slice_name("u", log.times.size()), [&](std::ostream& os) { write_csv(os, u); });
            log.times.push_back(t);
        }
    }
    art.csv("energy_series.csv", [&](std::ostream& os) { write_csv(os, series); });
    art.json_file("final_u.json", to_json(u));
    json summary = drift_summary(series);
    summary["t_end"] = series.back().t;
    if (code == kExitOk) extra(summary, traj, series);
    art.json_file(summary_name, summary);
    return code;
}

std::vector<double> sample_times(std::size_t count, double dt) {
    std::vector<double> t(count);
    for (std::size_t k = 0; k < count; ++k) t[k] = static_cast<double>(k) * dt;
    return t;
}

int run_metric(const ExperimentConfig& cfg, Artifacts& art, RunLog& log) {
    std::mt19937_64 rng(cfg.seed);
    std::vector<MetricRow> rows;
    json costs = json::array();
    double r71 = 0.0, r72 = 0.0, r73 = 0.0;
    for (std::size_t k = 0; k < cfg.metric_pairs; ++k) {
        const auto a = random_gaussian_field(rng, cfg.L, cfg.n);
        const auto b = random_gaussian_field(rng, cfg.L, cfg.n);
        const auto f = random_test_function(rng, cfg.L, cfg.n);
        MetricRow r{k, geodesic_upper_bound(a, b, cfg.n_theta), sobolev_comparison(a, b),
                    weighted_L1_distance(a, b), kr_discrepancy(a, b, f)};
        const double d_star = geodesic_upper_bound(a, b, cfg.n_theta, Weight::none);
        rows.push_back(r);
        r71 = std::max(r71, r.upper_bound / r.sobolev_rhs);
        r72 = std::max(r72, r.weighted_l1 / r.upper_bound);
        r73 = std::max(r73, r.kr / d_star);
        std::vector<double> mid(a.size()), v(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            mid[i] = 0.5 * (a.values[i] + b.values[i]);
            v[i] = b.values[i] - a.values[i];
        }
        const auto tf = TangentFrame::from_fields(std::move(v), std::vector<double>(a.size(), 0.0), a.dx);
        costs.push_back({{"pair_id", k}, {"midpoint_cost", to_json(finsler_cost(a.with_values(mid), tf))},
                         {"d_star", d_star}});
    }
    art.csv("metric_table.csv", [&](std::ostream& os) { write_csv(os, rows); });
    art.json_file("metric_costs.json", costs);
    json summary = {{"pairs", cfg.metric_pairs},
                    {"seed", cfg.seed},
                    {"max_ratio_upper_over_sobolev", r71},
                    {"max_ratio_weighted_l1_over_upper", r72},
                    {"max_ratio_kr_over_unweighted_upper", r73}};

    if (cfg.has_initial && cfg.t_end) {
        if (!cfg.initial.peakons.empty()) throw ConfigError("metric: growth study needs smooth initial data");
        const auto profile = make_profile(cfg.initial);
        const auto u0 = GridFunction::sample(cfg.L, cfg.n, profile.u);
        try {
            const auto traj = smooth_evolve(u0, *cfg.t_end, cfg.dt);
            const auto frames = evolve_tangent(traj, cfg.dt, random_tangent(rng, u0));
            const auto times = sample_times(traj.size(), cfg.dt);
            const auto growth = verify_growth(times, traj, frames);
            art.json_file("growth.json", to_json(growth));
            log.times = times;
        } catch (const NumericalError& e) {
            log.note = std::string("blowup: ") + e.what();
            art.json_file("metric_summary.json", summary);
            return kExitBlowup;
        }
    }
    art.json_file("metric_summary.json", summary);
    return kExitOk;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

Command parse_command(const std::string& name) {
    for (const auto& [c, s] : kCommands) {
        if (name == s) return c;
    }
    throw ConfigError("unknown command \"" + name + "\"");
}

const char* command_name(Command c) {
    for (const auto& [k, s] : kCommands) {
        if (k == c) return s;
    }
    return "?";
}

ExperimentConfig parse_config(const json& j, const std::optional<std::string>& command) {
    require_object(j, "config", {"command", "initial_data", "grid", "time", "solver", "picard", "output_dir",
                                 "seed", "labels", "metric"});
    ExperimentConfig cfg;
    cfg.raw = j;
    if (command) {
        cfg.command = parse_command(*command);
    } else {
        cfg.command = parse_command(field<std::string>(j, "command", "config"));
    }
    if (j.contains("initial_data")) {
        parse_term(j.at("initial_data"), cfg.initial);
        cfg.has_initial = true;
        std::set<double> qs;
        for (const auto& pk : cfg.initial.peakons) {
            if (!std::isfinite(pk.p) || !std::isfinite(pk.q)) throw ConfigError("peakon: non-finite entry");
            if (!qs.insert(pk.q).second) throw ConfigError("peakon: positions must be distinct");
        }
        std::sort(cfg.initial.peakons.begin(), cfg.initial.peakons.end(),
                  [](const PeakonTerm& a, const PeakonTerm& b) { return a.q < b.q; });
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        require_object(g, "grid", {"L", "n"});
        cfg.L = field_or<double>(g, "L", cfg.L, "grid");
        cfg.n = field_or<std::size_t>(g, "n", cfg.n, "grid");
    }
    if (!(cfg.L > 0.0)) throw ConfigError("grid: L must be positive");
    if (cfg.n < 256 || !is_power_of_two(cfg.n)) throw ConfigError("grid: n must be a power of two >= 256");
    for (const auto& pk : cfg.initial.peakons) {
        if (!(std::abs(pk.q) < cfg.L)) throw ConfigError("peakon: position outside the grid");
    }
    if (j.contains("time")) {
        const auto& t = j.at("time");
        require_object(t, "time", {"t_end", "dt", "store_every"});
        if (t.contains("t_end")) cfg.t_end = field<double>(t, "t_end", "time");
        cfg.dt = field_or<double>(t, "dt", cfg.dt, "time");
        if (t.contains("store_every")) cfg.store_every = field<std::size_t>(t, "store_every", "time");
    }
    if (!(cfg.dt > 0.0)) throw ConfigError("time: dt must be positive");
    if (cfg.t_end && !(*cfg.t_end > 0.0)) throw ConfigError("time: t_end must be positive");
    if (cfg.store_every && *cfg.store_every == 0) throw ConfigError("time: store_every must be positive");
    if (j.contains("solver")) {
        const auto s = field<std::string>(j, "solver", "config");
        if (s == "rk4") {
            cfg.solver = SolverKind::rk4;
        } else if (s == "picard") {
            cfg.solver = SolverKind::picard;
        } else {
            throw ConfigError("solver must be \"rk4\" or \"picard\"");
        }
    }
    if (j.contains("picard")) {
        require_object(j.at("picard"), "picard", {"window"});
        cfg.picard_window = field_or<double>(j.at("picard"), "window", cfg.picard_window, "picard");
        if (!(cfg.picard_window > 0.0)) throw ConfigError("picard: window must be positive");
    }
    cfg.output_dir = field_or<std::string>(j, "output_dir", cfg.output_dir, "config");
    cfg.seed = field_or<std::uint64_t>(j, "seed", cfg.seed, "config");
    cfg.grading.strength = cfg.initial.peakons.empty() ? 0.0 : kDefaultGrading;
    if (j.contains("labels")) {
        const auto& l = j.at("labels");
        require_object(l, "labels", {"grading", "width"});
        cfg.grading.strength = field_or<double>(l, "grading", cfg.grading.strength, "labels");
        cfg.grading.width = field_or<double>(l, "width", cfg.grading.width, "labels");
    }
    if (!(cfg.grading.strength >= 0.0) || !(cfg.grading.width > 0.0)) {
        throw ConfigError("labels: grading must be >= 0 and width > 0");
    }
    if (j.contains("metric")) {
        const auto& m = j.at("metric");
        require_object(m, "metric", {"pairs", "n_theta"});
        cfg.metric_pairs = field_or<std::size_t>(m, "pairs", cfg.metric_pairs, "metric");
        cfg.n_theta = field_or<std::size_t>(m, "n_theta", cfg.n_theta, "metric");
        if (cfg.metric_pairs == 0 || cfg.n_theta < 3) throw ConfigError("metric: need pairs >= 1, n_theta >= 3");
    }
    return cfg;
}

InitialProfile make_profile(const InitialData& d) {
    InitialProfile prof;
    prof.u = [d](double x) {
        double v = 0.0;
        for (const auto& pk : d.peakons) v += pk.p * std::exp(-std::abs(x - pk.q));
        for (const auto& g : d.gaussians) {
            const double z = (x - g.center) / g.width;
            v += g.amp * std::exp(-z * z);
        }
        return v;
    };
    prof.ux = [d](double x) {
        double v = 0.0;
        for (const auto& pk : d.peakons) {
            const double s = x > pk.q ? 1.0 : (x < pk.q ? -1.0 : 0.0);
            v -= pk.p * s * std::exp(-std::abs(x - pk.q));
        }
        for (const auto& g : d.gaussians) {
            const double z = (x - g.center) / g.width;
            v -= 2.0 * g.amp * z / g.width * std::exp(-z * z);
        }
        return v;
    };
    for (const auto& pk : d.peakons) prof.kinks.push_back(pk.q);
    std::sort(prof.kinks.begin(), prof.kinks.end());
    return prof;
}

GridFunction random_gaussian_field(std::mt19937_64& rng, double L, std::size_t n) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double a = 0.6 * U(rng), w = 0.8 + 0.3 * U(rng), c = U(rng);
    return GridFunction::sample(L, n, [=](double x) { return a * std::exp(-(x - c) * (x - c) / (w * w)); });
}

GridFunction random_test_function(std::mt19937_64& rng, double L, std::size_t n) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double phase = 3.141592653589793 * U(rng);
    return GridFunction::sample(L, n, [=](double x) { return 0.9 * std::sin(0.9 * x + phase); });
}

TangentFrame random_tangent(std::mt19937_64& rng, const GridFunction& grid) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> v(grid.size(), 0.0), w(grid.size(), 0.0);
    for (int k = 0; k < 3; ++k) {
        const double a = 0.2 * U(rng), c = 1.5 * U(rng), s = 0.9 + 0.3 * U(rng);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double z = (grid.x(i) - c) / s;
            v[i] += a * std::exp(-z * z);
        }
    }
    const double b = 0.05 * U(rng);
    for (std::size_t i = 0; i < grid.size(); ++i) w[i] = b * std::exp(-0.5 * grid.x(i) * grid.x(i));
    return TangentFrame::from_fields(std::move(v), std::move(w), grid.dx);
}

std::string git_blob_hash(const std::string& content) {
    const std::string header = "blob " + std::to_string(content.size()) + '\0';
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, header.data(), header.size()) != 1 ||
        EVP_DigestUpdate(ctx, content.data(), content.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha1 failed");
    }
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& config_text, const fs::path& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    Artifacts art{out_dir, {}};
    RunLog log;
    RunResult result;
    try {
        switch (cfg.command) {
        case Command::peakons:
            result.exit_code = run_peakons(cfg, art, log);
            break;
        case Command::semilinear:
            result.exit_code = run_characteristic(cfg, art, log, false);
            break;
        case Command::concentration:
            result.exit_code = run_characteristic(cfg, art, log, true);
            break;
        case Command::smooth:
            result.exit_code = run_line_solver(
                cfg, art, log, smooth_step, [](json&, const auto&, const auto&) {}, "smooth_summary.json");
            break;
        case Command::ch:
            result.exit_code = run_line_solver(
                cfg, art, log, ch_step,
                [&](json& summary, const std::vector<GridFunction>& traj, const auto&) {
                    std::mt19937_64 rng(cfg.seed);
                    const auto frames = ch_evolve_tangent(traj, cfg.dt, random_tangent(rng, traj.front()));
                    const auto growth = ch_verify_growth(sample_times(traj.size(), cfg.dt), traj, frames);
                    summary["growth"] = to_json(growth);
                },
                "ch_summary.json");
            break;
        case Command::metric:
            result.exit_code = run_metric(cfg, art, log);
            break;
        }
    } catch (const ConfigError& e) {
        result.exit_code = kExitInvalidConfig;
        result.message = e.what();
        return result;
    }
    result.message = log.note;

    json manifest = {{"command", command_name(cfg.command)},
                     {"config", cfg.raw},
                     {"input_hash", git_blob_hash(config_text)},
                     {"versions",
                      {{"novikov_lab", kVersion},
                       {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                             std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                             std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
                     {"exit_code", result.exit_code},
                     {"note", log.note},
                     {"times", log.times},
                     {"events", log.events},
                     {"files", art.files}};
    art.json_file("manifest.json", manifest);
    write_file(out_dir / "timing.json", dump({{"wall_seconds", seconds_since(t0)}}));
    art.files.push_back("timing.json");
    result.files = art.files;
    return result;
}

} // namespace novikov
