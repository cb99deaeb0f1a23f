#include "halflin/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "family_tails.hpp"

namespace halflin {

namespace {

// log-scale evaluation of phi_star(pos / a_m) for positive pos, safe far
// beyond linear-scale coefficient overflow
double phi_star_over_weight(double pos, const CoefficientSequence& a, Index m, double alpha) {
    return std::exp((std::log(pos) - coeff_log_eval(a, m)) / alpha);
}

Index capped_window(const EquationSpec& spec, Index N, Index innerShift, Index outerShift,
                    std::vector<std::string>* warnings) {
    Index cap = N;
    const Index aLast = last_admissible_index(spec.a);
    if (aLast != std::numeric_limits<Index>::max()) {
        cap = std::min(cap, aLast - std::max(innerShift, outerShift));
    }
    const Index bLast = last_admissible_index(spec.b);
    cap = std::min(cap, bLast);
    if (cap < N && warnings) {
        warnings->push_back("window truncated to N=" + std::to_string(cap) +
                            " by the coefficient table domain");
    }
    return cap;
}

}  // namespace

const char* to_string(ExistenceVerdict verdict) {
    switch (verdict) {
        case ExistenceVerdict::NoIntermediate: return "NoIntermediate";
        case ExistenceVerdict::IntermediateIfNonosc: return "IntermediateIfNonosc";
        default: return "Inconclusive";
    }
}

const char* to_string(ComparisonVerdict verdict) {
    switch (verdict) {
        case ComparisonVerdict::Exists: return "Exists";
        case ComparisonVerdict::NotExists: return "NotExists";
        default: return "Inconclusive";
    }
}

std::pair<SeriesVerdict, SeriesVerdict> summability_check(const EquationSpec& spec, Index N) {
    validate_spec(spec);
    const Index n0 = spec.startIndex;
    N = capped_window(spec, N, 0, 0, nullptr);
    if (N < n0 + 10) {
        throw ConfigurationError("summability check needs at least ten admissible terms");
    }
    const double alpha = spec.alpha();
    SeriesVerdict first = accumulate_and_fit(
        n0, N, [&](Index n) { return std::exp(-coeff_log_eval(spec.a, n) / alpha); });
    SeriesVerdict second =
        accumulate_and_fit(n0, N, [&](Index n) { return coeff_eval(spec.b, n); });
    return {std::move(first), std::move(second)};
}

CriterionReport criterion_series(const EquationSpec& spec, Index N, bool shifted) {
    validate_spec(spec);
    const Index n0 = spec.startIndex;
    const double alpha = spec.alpha();
    const Index innerShift = shifted ? spec.p - 1 : 0;  // inner weights a_{k+innerShift}
    const Index outerShift = shifted ? spec.p : 1;      // second series weight a_{n+outerShift}

    CriterionReport rep;
    rep.shifted = shifted;

    N = capped_window(spec, N, innerShift, outerShift, &rep.warnings);
    if (N < n0 + 10) {
        throw ConfigurationError("criterion series need at least ten admissible terms");
    }

    // the criterion theory assumes the weight reciprocals summable and the
    // coefficients not summable; report violations but keep going
    {
        auto [wSum, bSum] = summability_check(spec, N);
        if (wSum.verdict == SeriesDecision::DivergesLikely) {
            rep.warnings.push_back(
                "weight reciprocal series looks divergent; the criterion dichotomy "
                "assumes it converges");
        }
        if (bSum.verdict == SeriesDecision::ConvergesLikely) {
            rep.warnings.push_back(
                "coefficient series looks convergent; the criterion dichotomy assumes "
                "it diverges");
        }
    }

    // inner remainder sum_{k>N} phi_star(1/a_{k+innerShift})
    const double innerTail =
        detail::inverse_weight_tail(spec.a, innerShift, alpha, N + 1, &rep.warnings);
    const bool divergentInner = std::isinf(innerTail);
    if (divergentInner) {
        rep.warnings.push_back(
            "inner weight series diverges, so the first criterion series diverges "
            "termwise; partial sums below use a zero inner remainder");
    }

    // suffix sums inner(n) = sum_{k=n+1}^{N} phi_star(1/a_{k+innerShift}) + remainder
    const std::size_t W = static_cast<std::size_t>(N - n0 + 1);
    std::vector<double> inner(W);
    double run = divergentInner ? 0.0 : innerTail;
    for (std::size_t m = W; m-- > 0;) {
        inner[m] = run;
        const Index k = n0 + static_cast<Index>(m);  // adds term k when stepping to n = k-1
        if (m > 0) run += std::exp(-coeff_log_eval(spec.a, k + innerShift) / alpha);
    }

    rep.first = accumulate_and_fit(n0, N, [&](Index n) {
        return coeff_eval(spec.b, n) * phi(inner[static_cast<std::size_t>(n - n0)], spec.phi);
    });
    if (divergentInner) rep.first.verdict = SeriesDecision::DivergesLikely;

    // second series with running prefix sum of the coefficients
    double prefix = 0.0;
    rep.second = accumulate_and_fit(n0, N, [&](Index n) {
        prefix += coeff_eval(spec.b, n);
        return phi_star_over_weight(prefix, spec.a, n + outerShift, alpha);
    });

    const bool bothConverge = rep.first.verdict == SeriesDecision::ConvergesLikely &&
                              rep.second.verdict == SeriesDecision::ConvergesLikely;
    const bool anyDiverges = rep.first.verdict == SeriesDecision::DivergesLikely ||
                             rep.second.verdict == SeriesDecision::DivergesLikely;
    rep.combined = bothConverge ? ExistenceVerdict::NoIntermediate
                   : anyDiverges ? ExistenceVerdict::IntermediateIfNonosc
                                 : ExistenceVerdict::Inconclusive;
    return rep;
}

double euler_threshold(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ConfigurationError("alpha must be positive and finite");
    }
    return std::pow(1.0 / (1.0 + alpha), alpha + 1.0);
}

EquationSpec euler_transform(double gamma, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ConfigurationError("alpha must be positive and finite");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ConfigurationError("gamma must be positive and finite");
    }
    return EquationSpec{
        ConstantFamily{1.0},
        PowerShiftFamily{std::pow(gamma, 1.0 / alpha), 1, -(1.0 + alpha) / alpha},
        PhiMap{1.0 / alpha},
        1,
        1,
    };
}

ComparisonReport sturm_comparison(const EquationSpec& spec, Index N) {
    validate_spec(spec);
    const Index n0 = spec.startIndex;
    const double alpha = spec.alpha();
    if (N < n0) throw ConfigurationError("comparison window must start at or after startIndex");

    Index horizon = N + 10000;
    const Index aLast = last_admissible_index(spec.a);
    if (aLast != std::numeric_limits<Index>::max()) {
        horizon = std::min(horizon, aLast - spec.p);
    }
    horizon = std::min(horizon, last_admissible_index(spec.b));
    if (horizon < N + 32) {
        throw ConfigurationError(
            "comparison needs a window of at least 32 indices; the coefficient tables "
            "end too early");
    }

    ComparisonReport rep;
    rep.threshold = euler_threshold(alpha);

    rep.supB = -std::numeric_limits<double>::infinity();
    rep.infB = std::numeric_limits<double>::infinity();
    bool geqAll = true;
    bool leqAll = true;
    for (Index n = N; n <= horizon; ++n) {
        const double bn = coeff_eval(spec.b, n);
        rep.supB = std::max(rep.supB, bn);
        rep.infB = std::min(rep.infB, bn);
        // reduced weight a_{n+p-1} against the critical scale n^{1+alpha}, in logs
        const double logw = coeff_log_eval(spec.a, n + spec.p - 1);
        const double logc = (1.0 + alpha) * std::log(static_cast<double>(n));
        if (logw < logc - 1e-12) geqAll = false;
        if (logw > logc + 1e-12) leqAll = false;
    }
    rep.weightComparison = (geqAll && !leqAll) ? 1 : (leqAll && !geqAll) ? -1 : (geqAll ? 1 : 0);

    rep.divergenceSide = accumulate_and_fit(n0, horizon, [&](Index n) {
        return phi_star_over_weight(static_cast<double>(n), spec.a, n + spec.p, alpha);
    });

    if (geqAll && rep.divergenceSide.verdict == SeriesDecision::DivergesLikely &&
        rep.infB > 0.0 && rep.supB < rep.threshold) {
        rep.verdict = ComparisonVerdict::Exists;
    } else if (leqAll && rep.infB > rep.threshold) {
        rep.verdict = ComparisonVerdict::NotExists;
    } else {
        rep.verdict = ComparisonVerdict::Inconclusive;
    }
    return rep;
}

}  // namespace halflin
