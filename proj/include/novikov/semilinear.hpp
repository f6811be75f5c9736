#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "novikov/characteristic.hpp"
#include "novikov/error.hpp"

namespace novikov {

// Nonlocal sources of the semi-linear system evaluated on the Y-grid.
struct SourceTerms {
    std::vector<double> P1;
    std::vector<double> dxP1;
    std::vector<double> P2;
    std::vector<double> dxP2;
};

/**
 * Sources in characteristic variables. The kernel e^{-|x(Y) - x(Ybar)|}
 * is written through the cumulative coordinate
 * c(Y) = int xi cos^4(alpha/2) dY, which is non-decreasing, so the
 * sums reduce to forward/backward exponential recursions in c.
 * Throws NumericalError("xi-positivity violated") if xi <= 0 somewhere.
 */
SourceTerms nonlocal_sources(const CharState& s);

struct CharRates {
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> alpha;
    std::vector<double> xi;
};

CharRates char_rhs(const CharState& s);
CharRates char_rhs(const CharState& s, const SourceTerms& src);

struct StepDiagnostics {
    // sup |x_evolved - x_reintegrated| after the step
    double x_drift = 0.0;
    bool x_drift_warning = false;
};

inline constexpr double kXDriftTolerance = 1e-4;

CharState step_rk4(const CharState& s, double dt, StepDiagnostics* diag = nullptr);

struct CharRunOptions {
    double t_end = 1.0;
    double dt = 1e-3;
    // keep every k-th step in the returned trajectory (the last step is always kept)
    std::size_t store_every = 1;
    // called on the initial state and after every step
    std::function<void(const CharState&)> observer;
};

struct CharRun {
    std::vector<CharState> slices;
    double max_x_drift = 0.0;
    std::size_t drift_warnings = 0;
};

CharRun evolve_rk4(const CharState& s0, const CharRunOptions& opt);

struct PicardOptions {
    int max_iter = 50;
    double tol = 1e-10;
    std::size_t slices = 64;
};

struct PicardResult {
    CharState state;
    int iterations = 0;
    std::vector<double> residuals;
};

class PicardStalled : public NumericalError {
public:
    explicit PicardStalled(std::vector<double> history)
        : NumericalError("picard stalled"), history_(std::move(history)) {}
    const std::vector<double>& residual_history() const { return history_; }

private:
    std::vector<double> history_;
};

/**
 * Fixed-point iteration of the integrated system over [s0.t, s0.t + t]:
 * each sweep re-evaluates the right-hand side on every stored time slice
 * of the previous iterate and integrates it by the trapezoid rule.
 * The residual is the sup-norm change of (u, alpha, xi) over all slices.
 */
PicardResult picard_solve(const CharState& s0, double t, const PicardOptions& opt = {});

struct SingularEvent {
    double t;
    double Y;
    std::size_t node;
    double level;      // odd multiple of pi that alpha reached
    std::string kind;  // "crossing" or "touch"
};

inline constexpr double kSingularEps = 1e-4;

/**
 * First passage of alpha through an odd multiple of pi at every Y-node,
 * refined linearly in time. Nodes that only graze the level
 * (cos^2(alpha/2) < eps without crossing) are reported as "touch".
 * Sorted by time; the first event is the numerical breaking time.
 */
std::vector<SingularEvent> detect_singularity(std::span<const CharState> traj,
                                              double eps = kSingularEps);

// Same detection fed one slice at a time, for runs that do not keep every slice.
class SingularityTracker {
public:
    explicit SingularityTracker(double eps = kSingularEps);
    // Slices must arrive in time order on one grid.
    void observe(const CharState& s);
    std::vector<SingularEvent> events() const;
    bool has_crossing() const { return !crossings_.empty(); }

private:
    double eps_;
    bool started_ = false;
    double prev_t_ = 0.0;
    std::vector<double> prev_alpha_;
    std::vector<char> crossed_;
    std::vector<std::optional<SingularEvent>> touch_;
    std::vector<SingularEvent> crossings_;
};

} // namespace novikov
