#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "novikov/characteristic.hpp"
#include "novikov/energy.hpp"
#include "novikov/grid.hpp"
#include "novikov/peakon.hpp"
#include "novikov/semilinear.hpp"
#include "novikov/tangent.hpp"

namespace novikov {

using json = nlohmann::json;

// Shortest decimal form that reads back to the same double ("%.17g").
std::string format_double(double v);

// CSV `x,value`; JSON {x0, dx, values}.
void write_csv(std::ostream& os, const GridFunction& f);
json to_json(const GridFunction& f);
GridFunction grid_function_from_json(const json& j);

// CSV `Y,x,u,alpha,xi`; JSON {t, Y0, dY, x, u, alpha, xi}.
void write_csv(std::ostream& os, const CharState& s);
json to_json(const CharState& s);
CharState char_state_from_json(const json& j);

// CSV `t,p1..pN,q1..qN`, one row per frame.
void write_csv(std::ostream& os, const PeakonTrajectory& traj);

struct EnergySample {
    double t = 0.0;
    double E = 0.0;
    double F = 0.0;
    double E_win = 0.0;
    double F_win = 0.0;
    double L_win = 0.0;
};
// CSV `t,E,F,E_win,F_win,L_win`.
void write_csv(std::ostream& os, std::span<const EnergySample> rows);

struct MetricRow {
    std::size_t pair_id = 0;
    double upper_bound = 0.0;
    double sobolev_rhs = 0.0;
    double weighted_l1 = 0.0;
    double kr = 0.0;
};
// CSV `pair_id,upper_bound,sobolev_rhs,weighted_l1,kr`.
void write_csv(std::ostream& os, std::span<const MetricRow> rows);

json to_json(const CostBreakdown& c);
json to_json(const EnergyReport& r);
json to_json(const SingularEvent& e);
json to_json(const GrowthReport& g);

// Writes text to a file, creating parent directories; throws std::runtime_error on failure.
void write_file(const std::filesystem::path& path, const std::string& text);

} // namespace novikov
