#pragma once

#include "halflin/trajectory.hpp"

namespace halflin {

/// Initial data for forward marching.
///
/// - p >= 2: `segment` holds the p consecutive values x_{n0..n0+p-1}.
/// - p == 1: `segment` holds either the two values x_{n0}, x_{n0+1}
///   (quasidiffSeed == false) or the pair (x_{n0}, x^{[1]}_{n0})
///   (quasidiffSeed == true).
struct InitialData {
    Index startIndex = 1;
    std::vector<double> segment;
    bool quasidiffSeed = false;
};

/// Marches the equation forward and returns x on [startIndex, horizon]
/// (horizon inclusive). Three structural regimes:
///
///   p == 1 : explicit march  x_{n+1} = x_n + phi_star(x^{[1]}_n / a_n),
///            x^{[1]}_{n+1} = x^{[1]}_n - b_n * phi(x_{n+1}).
///   p == 2 : each step solves the strictly increasing scalar equation
///            a_{n+1} phi(t - x_{n+1}) + b_n phi(t) = a_n phi(x_{n+1} - x_n)
///            for t = x_{n+2} by outward-doubling bracket + bisection to
///            1e-12 * max(1, |t|), then one safeguarded secant polish.
///   p >= 3 : explicit solve for the advanced term,
///            x_{n+p} = phi_star((x^{[1]}_n - x^{[1]}_{n+1}) / b_n).
///
/// Errors: segment/regime mismatch -> ConfigurationError; p == 2 bracket
/// expansion past 1e9 -> DivergenceError; non-finite intermediate ->
/// OverflowError naming the index.
Trajectory simulate(const EquationSpec& spec, const InitialData& init, Index horizon);

/// Pointwise equation residual
///   r_n = a_{n+1} phi(Delta x_{n+1}) - a_n phi(Delta x_n) + b_n phi(x_{n+p})
/// for every evaluable n (needs x at n, n+1, n+2 and n+p). A solution has
/// r identically zero.
std::vector<double> residual(const EquationSpec& spec, const Trajectory& traj);

/// Same residuals divided by b_n, comparable across indices when the
/// coefficients grow (factorial families).
std::vector<double> residual_scaled(const EquationSpec& spec, const Trajectory& traj);

/// First index whose residual is evaluable (== traj.startIndex), exposed for
/// aligning the residual vector with absolute indices.
Index residual_start(const Trajectory& traj);

/// Number of evaluable residual entries for the window; zero when too short.
std::size_t residual_count(const EquationSpec& spec, const Trajectory& traj);

/// The p == 2 single-step solver, exposed so property suites can re-verify
/// bracketing and root uniqueness on accepted steps. Returns t = x_{n+2}
/// given consecutive values (x_n, x_{n+1}) at absolute index n.
double solve_advanced_step(const EquationSpec& spec, Index n, double x_n, double x_np1);

}  // namespace halflin
