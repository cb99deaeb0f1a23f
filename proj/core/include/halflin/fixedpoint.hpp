#pragma once

#include "halflin/classify.hpp"
#include "halflin/equation.hpp"
#include "halflin/trajectory.hpp"

namespace halflin {

/// Which reduction the operator realizes.
///
///   ForwardToHalfLinear: from a known decaying solution x of the advanced
///     equation, build a solution of the reduced half-linear equation inside
///     the order interval  M * x_{n+p-1} <= u_n <= x_{n+p-1}.
///   ReverseToAdvanced: from a known decaying solution y of the half-linear
///     reduction, build a solution of the advanced equation inside
///     y_{n-p+1} <= u_n <= H * y_{n-p+1}.
enum class OperatorDirection {
    ForwardToHalfLinear,
    ReverseToAdvanced,
};

/// The order interval (envelope) the operator maps into itself, derived from
/// a known positive strictly-decreasing base solution, plus the anchor data.
struct Envelope {
    OperatorDirection direction = OperatorDirection::ForwardToHalfLinear;
    Trajectory base;     // normalized into (0, 1] (see scaleApplied)
    EquationSpec spec;   // the advanced equation (a, b, alpha, p, n0)
    double anchorWeightSum = 0.0;  // forward: L = sum_{i=n0}^{n0+p-2} b_i
                                   // reverse: Lambda = sum_{i=n1-p+1}^{n1-1} b_i
    double lowerScale = 1.0;       // forward M in (0,1): phi(M) = |q0| / (L + |q0|)
    double upperScale = 1.0;       // reverse H > 1:  phi(H) = |q1| / (|q1| - Lambda)
    Index anchorIndex = 1;         // n0 (forward) or n1 = n0 + p (reverse)
    double anchorQuasidiff = 0.0;  // base quasidifference at the anchor
    double scaleApplied = 1.0;     // homogeneity factor the base was divided by

    /// Envelope bounds at absolute index n of the iteration window.
    double lower(Index n) const;
    double upper(Index n) const;
};

/// Builds the envelope from a positive strictly-decreasing base. The base is
/// rescaled into (0, 1] by homogeneity first (factor recorded). Forward uses
/// the widest admissible lower scale (equality in the defining inequality),
/// clamped to 1 - 1e-6 when the anchor sum is empty (p == 1). Reverse
/// requires the anchor quasidifference to dominate the interior weight sum;
/// otherwise HypothesisError suggests a later anchor.
Envelope build_envelope(OperatorDirection direction, const Trajectory& base,
                        const EquationSpec& spec);

/// One application of the forward operator on the window [n0, N]:
///   z^{[1]}_n = q0 - sum_{k=n0}^{n-1} b_k phi(u_{k+1})
///   z_n       = base_{N+p} + sum_{i=n}^{N} phi_star(-z^{[1]}_i / a_{i+p-1})
/// The additive anchor base_{N+p} is the base's own remainder past the
/// window, which keeps lim z = 0 exact for the boundary input. The window
/// truncation bound (tail_estimate with the window-effective coefficient
/// bound) must stay below 10% of z at the window end, else TruncationError.
std::vector<double> apply_forward(const std::vector<double>& u, const Envelope& env, Index N);

/// One application of the reverse operator on the window [n1, N]:
///   w^{[1]}_n = q1 - sum_{k=n1}^{n-1} b_k phi(u~_{k+p})
///   w_n       = H * base_{N+2-p} + sum_{i=n}^{N} phi_star(-w^{[1]}_i / a_i)
/// where u~ extends u past the window by the lower envelope value. The
/// additive anchor is the upper-envelope continuation at N+1; its width
/// (H-1) * base_{N+2-p} is reported through FixedPointRun as the
/// truncation diagnostic.
std::vector<double> apply_reverse(const std::vector<double>& u, const Envelope& env, Index N);

/// Upper bound for the summed decay tail
///   sum_{i>=n} phi_star( (1/a_{i+p-1}) * sum_{k<i} b_k phi(base_{k+p}) )
/// assembled as sigma_alpha * [ sum_{i>=n} phi_star((B(p-1) + |q_{m0}|) / a_{i+p-1})
///                              + base_{n+p-1} ],
/// with B the sup of b over the base window and the first sum truncated with
/// its own fitted tail. Requires base values <= 1 (rescale first).
double tail_estimate(const Trajectory& base, const EquationSpec& spec, Index n);

enum class IterationSeed { Upper, Lower, Midpoint };

struct IterateOptions {
    IterationSeed seed = IterationSeed::Upper;
    int maxIter = 200;
    double tol = 1e-6;
    double damping = 0.5;  // u <- (1-damping) u + damping T(u)
};

struct FixedPointRun {
    std::vector<double> residuals;           // sup-norm distances per iterate
    std::vector<double> envelopeViolations;  // max overshoot beyond [lower, upper]
    Index truncationIndex = 0;               // window end N
    double tailBound = 0.0;                  // truncation diagnostic at N
    bool converged = false;
    int iterations = 0;
    std::vector<double> fixedPoint;          // final iterate, in the normalized
                                             // units of the envelope base
    Trajectory solution;                     // the same window scaled back to the
                                             // units of the original base data
    double equationResidualMax = 0.0;        // max |r_n| against the target equation
    double equationResidualRel = 0.0;        // ... scaled by the local term magnitude
    ClassificationReport classification;     // classify of the fixed point (defaults)
    EquationSpec targetSpec;                 // the equation the fixed point solves
};

/// Damped Picard iteration u <- (1-theta) u + theta T(u) from the chosen
/// envelope seed on the window [anchor, N]. Envelope violations are recorded
/// (not clipped); a violation beyond 10 * tol * scale raises
/// InstabilityError. On convergence the fixed point is residual-checked
/// against the target equation (the half-linear reduction for forward, the
/// advanced equation for reverse) and classified with default thresholds.
/// maxIter exhaustion returns converged == false with full diagnostics.
FixedPointRun iterate_operator(const Envelope& env, const IterateOptions& options, Index N);

const char* to_string(OperatorDirection d);
const char* to_string(IterationSeed s);

}  // namespace halflin
