#pragma once

#include <optional>

#include "halflin/equation.hpp"
#include "halflin/series.hpp"

namespace halflin {

enum class ExistenceVerdict {
    NoIntermediate,        // both criterion series settle: no decaying solution
    IntermediateIfNonosc,  // a criterion series diverges: decaying solutions exist
                           // provided the reduced equation is nonoscillatory
    Inconclusive,
};

/// The two criterion series for decaying solutions with unbounded
/// quasidifference:
///
///   first  = sum_n b_n * phi( sum_{k>n} phi_star(1/a_k) )
///   second = sum_n phi_star( (1/a_{n+1}) * sum_{k<=n} b_k )
///
/// In the shifted form the weights are read as a_{k+p-1} and a_{n+p}. Both
/// series converge  -> no decaying solution of this kind exists.
/// Either diverges  -> such solutions exist whenever the reduced half-linear
/// equation is nonoscillatory.
struct CriterionReport {
    SeriesVerdict first;
    SeriesVerdict second;
    ExistenceVerdict combined = ExistenceVerdict::Inconclusive;
    bool shifted = false;
    std::vector<std::string> warnings;
};

/// Verdicts for the two coefficient summability conditions the criterion
/// theory assumes: sum phi_star(1/a_i) < infinity (first) and
/// sum b_i = infinity (second), judged from partial sums up to N.
/// Requires N >= startIndex + 10 (ConfigurationError otherwise).
std::pair<SeriesVerdict, SeriesVerdict> summability_check(const EquationSpec& spec, Index N);

/// Computes partial sums of both criterion series up to N (inner tails
/// truncated at N with a fitted family tail correction), fits their growth,
/// and combines the verdicts. Summability is checked first; failures attach
/// warnings rather than abort.
CriterionReport criterion_series(const EquationSpec& spec, Index N, bool shifted);

/// The critical constant (1/(1+alpha))^(alpha+1): the Euler-type equation
/// with weight n^{1+alpha} and constant coefficient gamma admits decaying
/// solutions with unbounded quasidifference iff 0 < gamma <= this value.
double euler_threshold(double alpha);

/// The reciprocal change of variable applied to the Euler-type equation:
/// returns the transformed spec with exponent 1/alpha, unit weight,
/// b_n = gamma^{1/alpha} (n+1)^{-(1+alpha)/alpha}, advance 1. The transform
/// preserves the oscillation character.
EquationSpec euler_transform(double gamma, double alpha);

enum class ComparisonVerdict {
    Exists,
    NotExists,
    Inconclusive,
};

/// Comparison of the weight against the critical Euler scale n^{1+alpha} on
/// [N, horizon], via Sturm-type majorization of the reduced equation.
struct ComparisonReport {
    ComparisonVerdict verdict = ComparisonVerdict::Inconclusive;
    double supB = 0.0;              // sup of b over the window
    double infB = 0.0;              // inf of b over the window
    double threshold = 0.0;         // (1/(1+alpha))^(1+alpha)
    int weightComparison = 0;       // +1: a_{n+p-1} >= n^{1+alpha} on window; -1: <=; 0: neither
    SeriesVerdict divergenceSide;   // sum phi_star(n / a_{n+p}) growth fit
};

/// Exists  when a_{n+p-1} >= n^{1+alpha} on the window, the series
///         sum phi_star(n/a_{n+p}) diverges, inf b > 0 and sup b < threshold.
/// NotExists when a_{n+p-1} <= n^{1+alpha} and inf b > threshold.
/// Inconclusive otherwise (including non-comparable weights).
ComparisonReport sturm_comparison(const EquationSpec& spec, Index N);

const char* to_string(ExistenceVerdict verdict);
const char* to_string(ComparisonVerdict verdict);

}  // namespace halflin
