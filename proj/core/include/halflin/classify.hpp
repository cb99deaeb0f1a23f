#pragma once

#include <optional>
#include <utility>

#include "halflin/trajectory.hpp"

namespace halflin {

/// Asymptotic classes of a positive-data trajectory at a finite horizon:
/// the nonoscillatory trichotomy (positive limit / decaying with unbounded
/// quasidifference / decaying with finite quasidifference limit) plus the
/// oscillatory and undecided labels.
enum class TrajectoryClass {
    Oscillatory,
    PositiveLimit,
    Intermediate,    // x -> 0 with |x^{[1]}| still growing past Q_min
    DominatedDecay,  // x -> 0 with x^{[1]} settling at a finite negative value
    Inconclusive,
};

struct ClassifyOptions {
    /// Decay threshold for "tail reached zero"; default 1e-3 * |x at window start|.
    std::optional<double> epsX;
    /// Magnitude threshold for "quasidifference unbounded"; default
    /// 10 * |quasidifference at window start|.
    std::optional<double> qMin;
    /// Indices skipped before sign changes count; default 10 * p.
    std::optional<Index> burnIn;
};

struct ClassificationReport {
    TrajectoryClass verdict = TrajectoryClass::Inconclusive;
    std::optional<Index> lastSignChange;
    double tailValue = 0.0;       // x at horizon
    double tailQuasidiff = 0.0;   // x^{[1]} at horizon
    double quasidiffSlope = 0.0;  // least-squares slope of |x^{[1]}| over the last quarter
    std::string trend;            // human-readable trend of the quasidifference
    // thresholds actually used
    double epsX = 0.0;
    double qMin = 0.0;
    Index burnIn = 0;
};

/// Decision order:
///   1. any sign change after the burn-in index        -> Oscillatory
///   2. tail above epsX flattening (last-quarter relative decrease < 1e-4)
///                                                      -> PositiveLimit
///   3. tail in (0, epsX), strictly decreasing last quarter, |x^{[1]}| > qMin
///      and still growing (positive fitted slope)       -> Intermediate
///   4. tail in (0, epsX) with x^{[1]} settling at a finite negative value
///      (last-quarter relative change < 1e-3)           -> DominatedDecay
///   5. otherwise                                       -> Inconclusive
/// Requires window length >= burnIn + 20 (ConfigurationError otherwise).
ClassificationReport classify(const Trajectory& traj, const EquationSpec& spec,
                              const ClassifyOptions& options = {});

enum class ShootOutcome {
    Found,              // bisection converged on a positive decreasing trajectory
    OscillatoryRegime,  // every scanned initial quasidifference crossed zero
    BracketFailure,     // no crossing branch could be initialized
};

struct ShootResult {
    double criticalQuasidiff = 0.0;             // c* (bracket midpoint)
    Trajectory trajectory;                      // shot at c*, truncated at the first
                                                // positivity/monotonicity failure
    std::pair<double, double> bracket{0.0, 0.0};  // final (crossing c, surviving c)
    ShootOutcome outcome = ShootOutcome::BracketFailure;
    ClassificationReport classification;        // diagnostic classify of the trajectory
    int bisections = 0;
    std::vector<std::pair<double, bool>> scan;  // (c, crossed) for the initial grid
};

/// Locates a decaying solution of the half-linear (p == 1) equation by
/// bisecting on the initial quasidifference c < 0: trajectories that cross
/// zero before the horizon mean c is too negative; trajectories that survive
/// positive mean c is not negative enough. The initial scan covers 16
/// logarithmically spaced magnitudes; if every scanned c crosses, the regime
/// is oscillatory. If none crosses, the magnitude is doubled up to 60 times
/// before giving up with BracketFailure.
ShootResult shoot_halflinear(const EquationSpec& spec, double x_start, Index horizon,
                             int maxBisections = 80);

const char* to_string(TrajectoryClass c);
const char* to_string(ShootOutcome o);

}  // namespace halflin
