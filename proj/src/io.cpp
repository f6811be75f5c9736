#include "novikov/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace novikov {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const GridFunction& f) {
    os << "x,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        os << format_double(f.x(i)) << ',' << format_double(f.values[i]) << '\n';
    }
}

json to_json(const GridFunction& f) {
    return {{"x0", f.x0}, {"dx", f.dx}, {"values", f.values}};
}

GridFunction grid_function_from_json(const json& j) {
    GridFunction f{j.at("x0").get<double>(), j.at("dx").get<double>(),
                   j.at("values").get<std::vector<double>>()};
    f.validate();
    return f;
}

void write_csv(std::ostream& os, const CharState& s) {
    os << "Y,x,u,alpha,xi\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << format_double(s.Y(i)) << ',' << format_double(s.x[i]) << ',' << format_double(s.u[i]) << ','
           << format_double(s.alpha[i]) << ',' << format_double(s.xi[i]) << '\n';
    }
}

json to_json(const CharState& s) {
    return {{"t", s.t},   {"Y0", s.Y0},         {"dY", s.dY}, {"x", s.x},
            {"u", s.u},   {"alpha", s.alpha},   {"xi", s.xi}};
}

CharState char_state_from_json(const json& j) {
    CharState s;
    s.t = j.at("t").get<double>();
    s.Y0 = j.at("Y0").get<double>();
    s.dY = j.at("dY").get<double>();
    s.x = j.at("x").get<std::vector<double>>();
    s.u = j.at("u").get<std::vector<double>>();
    s.alpha = j.at("alpha").get<std::vector<double>>();
    s.xi = j.at("xi").get<std::vector<double>>();
    s.validate();
    return s;
}

void write_csv(std::ostream& os, const PeakonTrajectory& traj) {
    const std::size_t n = traj.frames.empty() ? 0 : traj.frames.front().size();
    os << 't';
    for (std::size_t i = 1; i <= n; ++i) os << ",p" << i;
    for (std::size_t i = 1; i <= n; ++i) os << ",q" << i;
    os << '\n';
    for (const auto& f : traj.frames) {
        os << format_double(f.t);
        for (double p : f.p) os << ',' << format_double(p);
        for (double q : f.q) os << ',' << format_double(q);
        os << '\n';
    }
}

void write_csv(std::ostream& os, std::span<const EnergySample> rows) {
    os << "t,E,F,E_win,F_win,L_win\n";
    for (const auto& r : rows) {
        os << format_double(r.t) << ',' << format_double(r.E) << ',' << format_double(r.F) << ','
           << format_double(r.E_win) << ',' << format_double(r.F_win) << ',' << format_double(r.L_win)
           << '\n';
    }
}

void write_csv(std::ostream& os, std::span<const MetricRow> rows) {
    os << "pair_id,upper_bound,sobolev_rhs,weighted_l1,kr\n";
    for (const auto& r : rows) {
        os << r.pair_id << ',' << format_double(r.upper_bound) << ',' << format_double(r.sobolev_rhs) << ','
           << format_double(r.weighted_l1) << ',' << format_double(r.kr) << '\n';
    }
}

json to_json(const CostBreakdown& c) {
    return {{"I1", c.I1}, {"I2", c.I2}, {"I3", c.I3}, {"I4", c.I4}, {"total", c.total}};
}

json to_json(const EnergyReport& r) {
    json j = {{"t", r.t},
              {"E_total", r.E_total},
              {"F_total", r.F_total},
              {"E_vanishes", r.E_vanishes},
              {"L_positive", r.L_positive},
              {"ux4_total_before", r.ux4_total_before},
              {"ux4_outside_at_event", r.ux4_outside_at_event}};
    if (r.window) {
        j["window"] = {{"Y1", r.window->Y1}, {"Y2", r.window->Y2}, {"E_win", r.window->E},
                       {"F_win", r.window->F}, {"L_win", r.window->L}};
    } else {
        j["window"] = nullptr;
    }
    return j;
}

json to_json(const SingularEvent& e) {
    return {{"t", e.t}, {"Y", e.Y}, {"kind", e.kind}, {"level", e.level}, {"node", e.node}};
}

json to_json(const GrowthReport& g) {
    return {{"times", g.times}, {"norms", g.norms}, {"fitted_rate", g.fitted_rate}, {"max_ratio", g.max_ratio}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

} // namespace novikov
