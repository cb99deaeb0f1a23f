#pragma once

// Internal helper shared by the criterion series and the operator tail bound:
// estimates the remainder sum_{k >= from} phi_star(1 / a_{k+s}) for a
// coefficient family. Not installed.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "halflin/coefficients.hpp"

namespace halflin::detail {

/// Estimate of sum_{k >= from} (a_{k+s})^(-1/alpha).
///
/// - power families with exponent/alpha <= 1 and constant families diverge:
///   returns +infinity;
/// - power families with exponent/alpha > 1: ~200 exact terms plus the
///   integral remainder;
/// - factorial families: exact terms until underflow (ratio tail negligible);
/// - tables: exact terms to the table end, then a geometric extrapolation
///   from the last in-table ratio when it is stable and below one; otherwise
///   a warning is appended and the extrapolation is dropped.
inline double inverse_weight_tail(const CoefficientSequence& a, Index s, double alpha,
                                  Index from, std::vector<std::string>* warnings) {
    const double inf = std::numeric_limits<double>::infinity();
    const Index firstK = std::max(from, first_admissible_index(a) - s);

    auto term = [&](Index k) { return std::exp(-coeff_log_eval(a, k + s) / alpha); };

    if (std::holds_alternative<ConstantFamily>(a)) return inf;

    if (const auto* pw = std::get_if<PowerShiftFamily>(&a)) {
        const double beta = pw->exponent / alpha;
        if (beta <= 1.0) return inf;
        double acc = 0.0;
        const Index cut = firstK + 200;
        for (Index k = firstK; k < cut; ++k) acc += term(k);
        const double m = static_cast<double>(cut + s + pw->shift);
        acc += std::pow(pw->coef, -1.0 / alpha) * std::pow(m, 1.0 - beta) / (beta - 1.0);
        return acc;
    }

    if (std::holds_alternative<FactorialShiftFamily>(a)) {
        double acc = 0.0;
        for (Index k = firstK; k < firstK + 400; ++k) {
            double t = term(k);
            acc += t;
            if (t < 1e-300) break;
        }
        return acc;
    }

    const Index kEnd = last_admissible_index(a) - s;
    double acc = 0.0;
    for (Index k = firstK; k <= kEnd; ++k) acc += term(k);  // empty when from > kEnd

    // geometric extrapolation beyond the table from the last stable in-table ratio
    if (kEnd - 2 >= first_admissible_index(a) - s) {
        const double t2 = term(kEnd), t1 = term(kEnd - 1), t0 = term(kEnd - 2);
        const double r1 = t2 / t1, r0 = t1 / t0;
        if (std::fabs(r1 - r0) <= 1e-3 * std::max(r1, r0) && r1 < 1.0) {
            const Index gap = std::max<Index>(from - kEnd, 1);
            acc += t2 * std::pow(r1, static_cast<double>(gap)) / (1.0 - r1);
            return acc;
        }
    }
    if (warnings) {
        warnings->push_back(
            "no stable decay ratio at the weight table end; remainder past the table "
            "treated as zero");
    }
    return acc;
}

}  // namespace halflin::detail
