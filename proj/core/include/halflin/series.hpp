#pragma once

#include <functional>
#include <string>
#include <vector>

#include "halflin/coefficients.hpp"

namespace halflin {

enum class SeriesDecision {
    ConvergesLikely,
    DivergesLikely,
    Inconclusive,
};

enum class GrowthKind {
    BoundedCauchy,  // partial sums already numerically settled
    Logarithmic,    // S(n) ~ A + B ln n
    Power,          // S(n) ~ A + C n^q
    Geometric,      // terms ~ K r^n
};

/// Fitted description of how partial sums grow, with the relative residual
/// of the best fit over the inspected checkpoints.
struct GrowthModel {
    GrowthKind kind = GrowthKind::BoundedCauchy;
    double parameter = 0.0;  // limit (BoundedCauchy), B (Logarithmic), q (Power), r (Geometric)
    double residual = 0.0;   // max relative prediction error over the last two dyadic blocks
    std::string description() const;
};

/// Partial sums of a series at recorded truncation indices, with a
/// convergence verdict and the fitted growth model. The verdict is
/// Inconclusive whenever the fit residual exceeds the configured gate.
struct SeriesVerdict {
    std::vector<Index> indices;      // truncation points N of the recorded sums
    std::vector<double> partialSums; // S(N) at those points
    SeriesDecision verdict = SeriesDecision::Inconclusive;
    GrowthModel model;
};

/// Fits the recorded partial sums against four growth models (bounded with
/// settled Cauchy tail, logarithmic, power, geometric) using the three dyadic
/// anchors S(N/4), S(N/2), S(N) and validating over every checkpoint in
/// [N/4, N]. Issues ConvergesLikely / DivergesLikely only when the best
/// residual is below `residualGate` (relative), else Inconclusive.
SeriesVerdict fit_partial_sums(std::vector<Index> indices, std::vector<double> sums,
                               double residualGate = 0.05);

/// Convenience driver: accumulates `term(n)` for n in [from, to], recording
/// checkpoints (about 64 log-spaced points plus the dyadic anchors), then
/// fits. Terms must be finite; nonnegative terms make the sums monotone.
SeriesVerdict accumulate_and_fit(Index from, Index to,
                                 const std::function<double(Index)>& term,
                                 double residualGate = 0.05);

const char* to_string(SeriesDecision decision);
const char* to_string(GrowthKind kind);

}  // namespace halflin
