#pragma once

#include <optional>
#include <span>
#include <vector>

#include "novikov/characteristic.hpp"
#include "novikov/error.hpp"
#include "novikov/grid.hpp"

namespace novikov {

// N-peakon configuration u(x) = sum_i p_i e^{-|x - q_i|} at time t.
struct PeakonState {
    double t = 0.0;
    std::vector<double> p;
    std::vector<double> q;

    std::size_t size() const { return p.size(); }
    // N >= 1, |p| == |q|, q strictly increasing, all finite.
    void validate() const;
};

struct PeakonRates {
    std::vector<double> dp;
    std::vector<double> dq;
};

PeakonRates peakon_rhs(const PeakonState& s);

enum class PeakonHalt { none, spacing_collapse, amplitude_blowup };

struct PeakonTrajectory {
    std::vector<PeakonState> frames;
    PeakonHalt halt = PeakonHalt::none;
    double min_spacing_limit = 1e-8;
    double amplitude_limit = 1e8;
};

// Thrown when a non-finite state appears; carries the frames computed so far.
class PeakonBlowup : public NumericalError {
public:
    explicit PeakonBlowup(PeakonTrajectory partial)
        : NumericalError("blowup"), partial_(std::move(partial)) {}
    const PeakonTrajectory& partial() const { return partial_; }

private:
    PeakonTrajectory partial_;
};

/**
 * Classical RK4 on the peakon ODEs with fixed step dt, one stored frame per
 * step. Stops early when the smallest spacing drops below 1e-8 (or peaks
 * reorder) or an amplitude exceeds 1e8; the reason is recorded in `halt`.
 */
PeakonTrajectory integrate_peakons(const PeakonState& s0, double t_end, double dt);

// Samples sum_i p_i e^{-|x - q_i|} on the geometry of `grid`.
GridFunction peakon_field(const PeakonState& s, const GridFunction& grid);

// Exact slope of the peakon field; at a peak the two one-sided slopes are averaged.
GridFunction peakon_slope(const PeakonState& s, const GridFunction& grid);

// Closed-form profile of the peakon field with kinks at the peaks.
InitialProfile peakon_profile(const PeakonState& s);

// H^1 energy of the peakon field in closed form: 2 sum_ij p_i p_j e^{-|q_i-q_j|}.
double peakon_energy(const PeakonState& s);

struct Crossing {
    double t_star;
    double q_star;
};

// Linear extrapolation of the collapsing pair from the last two frames.
// Only answers when the trajectory halted on spacing collapse.
std::optional<Crossing> detect_crossing(const PeakonTrajectory& traj);

} // namespace novikov
