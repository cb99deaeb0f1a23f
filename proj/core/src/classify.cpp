#include "halflin/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "halflin/recursion.hpp"

namespace halflin {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double least_squares_slope(const std::vector<double>& q, std::size_t from, std::size_t to) {
    // slope of |q[j]| against j over [from, to]
    const double n = static_cast<double>(to - from + 1);
    double sx = 0.0, sy = 0.0, sxy = 0.0, sxx = 0.0;
    for (std::size_t j = from; j <= to; ++j) {
        const double x = static_cast<double>(j - from);
        const double y = std::fabs(q[j]);
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return 0.0;
    return (n * sxy - sx * sy) / den;
}

}  // namespace

const char* to_string(TrajectoryClass c) {
    switch (c) {
        case TrajectoryClass::Oscillatory: return "Oscillatory";
        case TrajectoryClass::PositiveLimit: return "PositiveLimit";
        case TrajectoryClass::Intermediate: return "Intermediate";
        case TrajectoryClass::DominatedDecay: return "DominatedDecay";
        default: return "Inconclusive";
    }
}

const char* to_string(ShootOutcome o) {
    switch (o) {
        case ShootOutcome::Found: return "Found";
        case ShootOutcome::OscillatoryRegime: return "OscillatoryRegime";
        default: return "BracketFailure";
    }
}

ClassificationReport classify(const Trajectory& traj, const EquationSpec& spec,
                              const ClassifyOptions& options) {
    const auto& x = traj.values;
    const auto& q = traj.quasidiff;
    const std::size_t L = x.size();

    ClassificationReport rep;
    rep.burnIn = options.burnIn.value_or(10 * spec.p);
    if (rep.burnIn < 0) throw ConfigurationError("burnIn must be nonnegative");
    if (static_cast<Index>(L) < rep.burnIn + 20) {
        throw ConfigurationError("classification window of length " + std::to_string(L) +
                                 " is shorter than burn-in + 20 = " +
                                 std::to_string(rep.burnIn + 20));
    }
    rep.epsX = options.epsX.value_or(1e-3 * std::fabs(x.front()));
    rep.qMin = options.qMin.value_or(10.0 * std::fabs(q.front()));
    rep.tailValue = x.back();
    rep.tailQuasidiff = q.back();

    // 1. sign changes after the burn-in
    for (std::size_t i = 0; i + 1 < L; ++i) {
        const int s0 = sign_of(x[i]);
        const int s1 = sign_of(x[i + 1]);
        const bool change = (s0 != 0 && s1 != 0 && s0 != s1) || (s0 != 0 && s1 == 0);
        if (change) rep.lastSignChange = traj.startIndex + static_cast<Index>(i) + 1;
    }

    // trend of the quasidifference over the last quarter
    const std::size_t lq = std::min(q.size(), std::max<std::size_t>(q.size() / 4, 5));
    const std::size_t j0 = q.size() - lq;
    rep.quasidiffSlope = least_squares_slope(q, j0, q.size() - 1);
    const double relChangeQ =
        std::fabs(q.back() - q[j0]) / std::max(std::fabs(q.back()), 1e-300);
    const bool settling = relChangeQ < 1e-3 && q.back() < 0.0;
    {
        std::ostringstream trend;
        if (settling) {
            trend << "quasidifference settling near " << q.back();
        } else if (rep.quasidiffSlope > 0.0) {
            trend << "quasidifference magnitude growing, slope " << rep.quasidiffSlope
                  << " per step";
        } else {
            trend << "no stable quasidifference trend";
        }
        rep.trend = trend.str();
    }

    if (rep.lastSignChange && *rep.lastSignChange > traj.startIndex + rep.burnIn) {
        rep.verdict = TrajectoryClass::Oscillatory;
        return rep;
    }

    // tail behaviour over the last quarter of the values
    const std::size_t lx = std::min(L, std::max<std::size_t>(L / 4, 5));
    const std::size_t i0 = L - lx;
    const double relDecrease =
        (x[i0] - x.back()) / std::max(std::fabs(x[i0]), 1e-300);
    bool strictlyDecreasing = true;
    for (std::size_t i = i0; i + 1 < L; ++i) {
        if (!(x[i + 1] < x[i])) {
            strictlyDecreasing = false;
            break;
        }
    }

    if (rep.tailValue > rep.epsX && relDecrease < 1e-4) {
        rep.verdict = TrajectoryClass::PositiveLimit;
    } else if (rep.tailValue > 0.0 && rep.tailValue < rep.epsX && strictlyDecreasing &&
               std::fabs(rep.tailQuasidiff) > rep.qMin && rep.quasidiffSlope > 0.0) {
        rep.verdict = TrajectoryClass::Intermediate;
    } else if (rep.tailValue > 0.0 && rep.tailValue < rep.epsX && settling) {
        rep.verdict = TrajectoryClass::DominatedDecay;
    } else {
        rep.verdict = TrajectoryClass::Inconclusive;
    }
    return rep;
}

namespace {

struct MarchResult {
    std::vector<double> values;
    bool crossed = false;
};

// explicit half-linear march from (x_start, quasidiff c), stopping at the
// first nonpositive value
MarchResult march(const EquationSpec& spec, double x_start, double c, Index horizon) {
    MarchResult out;
    out.values.reserve(static_cast<std::size_t>(horizon - spec.startIndex + 1));
    out.values.push_back(x_start);
    double q = c;
    for (Index n = spec.startIndex; n < horizon; ++n) {
        const double next =
            out.values.back() + phi_star(q / coeff_eval(spec.a, n), spec.phi);
        if (!std::isfinite(next)) {
            throw OverflowError("trajectory value is not finite at index " +
                                std::to_string(n + 1));
        }
        out.values.push_back(next);
        if (next <= 0.0) {
            out.crossed = true;
            break;
        }
        q -= coeff_eval(spec.b, n) * phi(next, spec.phi);
    }
    return out;
}

// longest positive strictly-decreasing prefix (at least two entries)
std::vector<double> decreasing_prefix(std::vector<double> values) {
    std::size_t cut = values.size();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] <= 0.0) {
            cut = i;
            break;
        }
        if (i > 0 && values[i] >= values[i - 1]) {
            cut = i;
            break;
        }
    }
    cut = std::max<std::size_t>(cut, 2);
    values.resize(std::min(cut, values.size()));
    return values;
}

ClassificationReport guarded_classify(const Trajectory& traj, const EquationSpec& spec) {
    try {
        return classify(traj, spec, {});
    } catch (const ConfigurationError&) {
        ClassificationReport rep;
        rep.verdict = TrajectoryClass::Inconclusive;
        rep.trend = "window too short for classification";
        if (!traj.values.empty()) rep.tailValue = traj.values.back();
        if (!traj.quasidiff.empty()) rep.tailQuasidiff = traj.quasidiff.back();
        return rep;
    }
}

}  // namespace

ShootResult shoot_halflinear(const EquationSpec& spec, double x_start, Index horizon,
                             int maxBisections) {
    validate_spec(spec);
    if (spec.p != 1) {
        throw ConfigurationError(
            "shooting requires the half-linear form (advance 1); reduce the equation "
            "first");
    }
    if (!(x_start > 0.0) || !std::isfinite(x_start)) {
        throw ConfigurationError("x_start must be positive and finite");
    }
    if (horizon < spec.startIndex + 2) {
        throw ConfigurationError("shooting horizon must exceed startIndex + 1");
    }
    if (maxBisections < 1) throw ConfigurationError("maxBisections must be positive");

    const Index n0 = spec.startIndex;
    const double scaleC = coeff_eval(spec.a, n0) * phi(x_start, spec.phi);

    ShootResult res;

    // scan 16 log-spaced magnitudes spanning nine decades
    for (int i = 0; i < 16; ++i) {
        const double mag = scaleC * std::pow(10.0, -6.0 + 9.0 * i / 15.0);
        const double c = -mag;
        res.scan.emplace_back(c, march(spec, x_start, c, horizon).crossed);
    }

    const bool allCrossed =
        std::all_of(res.scan.begin(), res.scan.end(), [](const auto& s) { return s.second; });
    const bool noneCrossed =
        std::none_of(res.scan.begin(), res.scan.end(), [](const auto& s) { return s.second; });

    double magCross = 0.0, magSurv = 0.0;

    if (allCrossed) {
        res.outcome = ShootOutcome::OscillatoryRegime;
        res.criticalQuasidiff = res.scan.front().first;
        res.bracket = {res.criticalQuasidiff, res.criticalQuasidiff};
        res.trajectory = Trajectory::from_values(
            n0, decreasing_prefix(march(spec, x_start, res.criticalQuasidiff, horizon).values),
            spec);
        res.classification = guarded_classify(res.trajectory, spec);
        return res;
    }

    if (noneCrossed) {
        // keep doubling the magnitude until something crosses
        double mag = scaleC * 1e3;
        bool found = false;
        for (int d = 0; d < 60 && !found; ++d) {
            mag *= 2.0;
            const bool crossed = march(spec, x_start, -mag, horizon).crossed;
            res.scan.emplace_back(-mag, crossed);
            if (crossed) {
                magCross = mag;
                magSurv = mag / 2.0;
                found = true;
            }
        }
        if (!found) {
            res.outcome = ShootOutcome::BracketFailure;
            res.criticalQuasidiff = -mag;
            res.bracket = {-mag, -mag};
            res.trajectory = Trajectory::from_values(
                n0, decreasing_prefix(march(spec, x_start, -mag, horizon).values), spec);
            res.classification = guarded_classify(res.trajectory, spec);
            return res;
        }
    } else {
        // first adjacent flip in the scan gives the initial bracket
        for (std::size_t i = 1; i < res.scan.size(); ++i) {
            if (res.scan[i].second != res.scan[i - 1].second) {
                const auto& crossSide = res.scan[i].second ? res.scan[i] : res.scan[i - 1];
                const auto& survSide = res.scan[i].second ? res.scan[i - 1] : res.scan[i];
                magCross = -crossSide.first;
                magSurv = -survSide.first;
                break;
            }
        }
    }

    // bisection on the magnitude, geometric midpoints
    for (int it = 0; it < maxBisections; ++it) {
        const double hi = std::max(magCross, magSurv);
        const double lo = std::min(magCross, magSurv);
        if (hi / lo - 1.0 < 1e-14) break;
        const double mid = std::exp(0.5 * (std::log(magCross) + std::log(magSurv)));
        if (march(spec, x_start, -mid, horizon).crossed) magCross = mid;
        else magSurv = mid;
        ++res.bisections;
    }

    res.outcome = ShootOutcome::Found;
    res.criticalQuasidiff = -std::exp(0.5 * (std::log(magCross) + std::log(magSurv)));
    res.bracket = {-magCross, -magSurv};
    res.trajectory = Trajectory::from_values(
        n0, decreasing_prefix(march(spec, x_start, res.criticalQuasidiff, horizon).values),
        spec);
    res.classification = guarded_classify(res.trajectory, spec);
    return res;
}

}  // namespace halflin
