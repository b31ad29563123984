#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fss/types.hpp"

namespace fss::solver {

using Vec = std::vector<double>;
using VecMap = std::function<Vec(const Vec&)>;

struct FixedPointResult {
    Vec fixed_point;
    ConvergenceReport report;
    Vec residual_history;
};

/// Damped fixed-point iteration f_{k+1} = (1-d) f_k + d map(f_k) in the
/// sup norm. Plain iteration by default; damping 0.5 is engaged
/// automatically when the update direction flips sign repeatedly.
/// Throws DivergenceError (with history) when max_iter is exhausted.
FixedPointResult fixed_point_solve(const VecMap& map, Vec initial,
                                   const IterationConfig& cfg);

/// Grid-valued convenience wrapper around the vector engine.
std::pair<Grid, ConvergenceReport>
fixed_point_solve(const std::function<Grid(const Grid&)>& map, const Grid& initial,
                  const IterationConfig& cfg);

/// Median ratio of successive residuals; values above 1 flag a dilatation.
/// Needs at least 3 strictly positive entries.
double estimate_contraction(const Vec& history);

/// One source-position problem: residuals r_k(theta) = F(theta_k) - target_k
/// for the current position vector, an optional problem-specific update step
/// (the log-form iteration), and the bracketing window for the bisection
/// fallback.
struct SourceProblem {
    std::function<Vec(const Vec&)> residual;
    std::function<Vec(const Vec&)> update; // may be empty: bisection only
    double x_min = -30.0;
    double x_max = 30.0;
};

/// Iterate the update map on the positions; any source whose residual fails
/// to decrease for 5 consecutive steps is handed to bracketing + bisection.
/// Throws BracketingError when no sign change exists in the window.
Vec solve_source_positions(const SourceProblem& prob, Vec initial,
                           const IterationConfig& cfg,
                           ConvergenceReport* report = nullptr);

} // namespace fss::solver
