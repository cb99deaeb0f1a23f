#include "halflin/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "family_tails.hpp"

namespace halflin {

namespace {

void check_base_shape(const Trajectory& base) {
    if (base.size() < 2) {
        throw ConfigurationError("envelope base needs at least two values");
    }
    for (std::size_t i = 0; i < base.values.size(); ++i) {
        if (!(base.values[i] > 0.0)) {
            throw ConfigurationError("envelope base must be strictly positive (violated at index " +
                                     std::to_string(base.startIndex + static_cast<Index>(i)) +
                                     ")");
        }
        if (i > 0 && !(base.values[i] < base.values[i - 1])) {
            throw ConfigurationError(
                "envelope base must be strictly decreasing (violated at index " +
                std::to_string(base.startIndex + static_cast<Index>(i)) + ")");
        }
    }
}

double coefficient_window_sum(const EquationSpec& spec, Index from, Index to) {
    double s = 0.0;
    for (Index i = from; i <= to; ++i) s += coeff_eval(spec.b, i);
    return s;
}

// truncation bound past the window for the forward operator, in the
// normalized units of the envelope base
double forward_tail_bound(const Envelope& env, Index N, double coefficientBound) {
    const double alpha = env.spec.alpha();
    const double num =
        coefficientBound * static_cast<double>(env.spec.p - 1) + std::fabs(env.anchorQuasidiff);
    const double iw =
        detail::inverse_weight_tail(env.spec.a, env.spec.p - 1, alpha, N + 1, nullptr);
    return sigma_alpha(alpha) *
           (phi_star(num, env.spec.phi) * iw + env.base.value_at(N + env.spec.p));
}

}  // namespace

const char* to_string(OperatorDirection d) {
    return d == OperatorDirection::ForwardToHalfLinear ? "forward-to-half-linear"
                                                       : "reverse-to-advanced";
}

const char* to_string(IterationSeed s) {
    switch (s) {
        case IterationSeed::Upper: return "upper";
        case IterationSeed::Lower: return "lower";
        default: return "midpoint";
    }
}

double Envelope::lower(Index n) const {
    return direction == OperatorDirection::ForwardToHalfLinear
               ? lowerScale * base.value_at(n + spec.p - 1)
               : base.value_at(n - spec.p + 1);
}

double Envelope::upper(Index n) const {
    return direction == OperatorDirection::ForwardToHalfLinear
               ? base.value_at(n + spec.p - 1)
               : upperScale * base.value_at(n - spec.p + 1);
}

Envelope build_envelope(OperatorDirection direction, const Trajectory& base,
                        const EquationSpec& spec) {
    validate_spec(spec);
    check_base_shape(base);

    // normalize by homogeneity so the base lives in (0, 1]
    const double scale = base.values.front();
    std::vector<double> scaled(base.values.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = base.values[i] / scale;

    // the base solves the advanced equation (forward) or its half-linear
    // reduction (reverse); derive the quasidifference with the matching weight
    const EquationSpec weightSpec =
        direction == OperatorDirection::ForwardToHalfLinear ? spec : halflinear_reduction(spec);
    Trajectory norm = Trajectory::from_values(base.startIndex, std::move(scaled), weightSpec);

    Envelope env{direction, std::move(norm), spec, 0.0, 1.0, 1.0, 0, 0.0, scale};

    if (direction == OperatorDirection::ForwardToHalfLinear) {
        env.anchorIndex = spec.startIndex;
        if (env.anchorIndex < env.base.startIndex || env.anchorIndex + 1 > env.base.endIndex()) {
            throw ConfigurationError("base window does not cover the anchor index " +
                                     std::to_string(env.anchorIndex));
        }
        env.anchorQuasidiff = env.base.quasidiff_at(env.anchorIndex);
        env.anchorWeightSum =
            coefficient_window_sum(spec, env.anchorIndex, env.anchorIndex + spec.p - 2);
        const double q0 = std::fabs(env.anchorQuasidiff);
        double M = phi_star(q0 / (env.anchorWeightSum + q0), spec.phi);
        env.lowerScale = std::min(M, 1.0 - 1e-6);
    } else {
        env.anchorIndex = spec.startIndex + spec.p;
        if (env.anchorIndex < env.base.startIndex || env.anchorIndex + 1 > env.base.endIndex()) {
            throw ConfigurationError("base window does not cover the anchor index " +
                                     std::to_string(env.anchorIndex));
        }
        env.anchorQuasidiff = env.base.quasidiff_at(env.anchorIndex);
        env.anchorWeightSum =
            coefficient_window_sum(spec, env.anchorIndex - spec.p + 1, env.anchorIndex - 1);
        const double q1 = std::fabs(env.anchorQuasidiff);
        if (!(env.anchorWeightSum < q1)) {
            std::ostringstream msg;
            msg << "interior coefficient sum " << env.anchorWeightSum
                << " does not stay below the anchor quasidifference magnitude " << q1
                << "; move the window start later (larger startIndex) and rebuild the base";
            throw HypothesisError(msg.str());
        }
        env.upperScale = phi_star(q1 / (q1 - env.anchorWeightSum), spec.phi);
    }
    return env;
}

std::vector<double> apply_forward(const std::vector<double>& u, const Envelope& env, Index N) {
    if (env.direction != OperatorDirection::ForwardToHalfLinear) {
        throw ConfigurationError("apply_forward needs a forward envelope");
    }
    const EquationSpec& spec = env.spec;
    const Index n0 = env.anchorIndex;
    const std::size_t W = static_cast<std::size_t>(N - n0 + 1);
    if (N < n0 + 1) throw ConfigurationError("window end must exceed the anchor index");
    if (u.size() != W) {
        throw ConfigurationError("input window has " + std::to_string(u.size()) +
                                 " values; expected " + std::to_string(W));
    }
    if (N + spec.p > env.base.endIndex()) {
        throw ConfigurationError("base window must reach index N + p = " +
                                 std::to_string(N + spec.p));
    }

    // accumulated quasidifference of the image
    std::vector<double> z1(W);
    double s = 0.0;
    for (std::size_t m = 0; m < W; ++m) {
        z1[m] = env.anchorQuasidiff - s;
        if (m + 1 < W) {
            s += coeff_eval(spec.b, n0 + static_cast<Index>(m)) * phi(u[m + 1], spec.phi);
        }
    }

    // backward value accumulation anchored at the base remainder past the window
    std::vector<double> z(W);
    double acc = env.base.value_at(N + spec.p);
    for (std::size_t m = W; m-- > 0;) {
        const Index n = n0 + static_cast<Index>(m);
        acc += phi_star(-z1[m] / coeff_eval(spec.a, n + spec.p - 1), spec.phi);
        if (!std::isfinite(acc)) {
            throw OverflowError("operator image is not finite at index " + std::to_string(n));
        }
        z[m] = acc;
    }

    // the truncated remainder must stay negligible against the window end
    double coefficientBound = 0.0;
    for (Index k = n0; k <= N; ++k) {
        coefficientBound = std::max(coefficientBound, coeff_eval(spec.b, k) *
                                                          phi(env.base.value_at(k + spec.p),
                                                              spec.phi));
    }
    const double tb = forward_tail_bound(env, N, coefficientBound);
    if (!(tb <= 0.1 * z.back())) {
        std::ostringstream msg;
        msg << "window truncation bound " << tb << " exceeds 10% of the window-end value "
            << z.back() << "; enlarge the window";
        throw TruncationError(msg.str());
    }
    return z;
}

std::vector<double> apply_reverse(const std::vector<double>& u, const Envelope& env, Index N) {
    if (env.direction != OperatorDirection::ReverseToAdvanced) {
        throw ConfigurationError("apply_reverse needs a reverse envelope");
    }
    const EquationSpec& spec = env.spec;
    const Index n1 = env.anchorIndex;
    const std::size_t W = static_cast<std::size_t>(N - n1 + 1);
    if (N < n1 + 1) throw ConfigurationError("window end must exceed the anchor index");
    if (u.size() != W) {
        throw ConfigurationError("input window has " + std::to_string(u.size()) +
                                 " values; expected " + std::to_string(W));
    }
    if (N > env.base.endIndex()) {
        throw ConfigurationError("base window must reach index N = " + std::to_string(N));
    }

    // extension of the window past N by the lower envelope (the base itself)
    auto at = [&](Index m) {
        return m <= N ? u[static_cast<std::size_t>(m - n1)]
                      : env.base.value_at(m - spec.p + 1);
    };

    std::vector<double> w1(W);
    double s = 0.0;
    for (std::size_t m = 0; m < W; ++m) {
        const Index n = n1 + static_cast<Index>(m);
        w1[m] = env.anchorQuasidiff - s;
        if (m + 1 < W) s += coeff_eval(spec.b, n) * phi(at(n + spec.p), spec.phi);
    }

    std::vector<double> w(W);
    double acc = env.upperScale * env.base.value_at(N + 2 - spec.p);
    for (std::size_t m = W; m-- > 0;) {
        const Index i = n1 + static_cast<Index>(m);
        acc += phi_star(-w1[m] / coeff_eval(spec.a, i), spec.phi);
        if (!std::isfinite(acc)) {
            throw OverflowError("operator image is not finite at index " + std::to_string(i));
        }
        w[m] = acc;
    }
    return w;
}

double tail_estimate(const Trajectory& base, const EquationSpec& spec, Index n) {
    validate_spec(spec);
    check_base_shape(base);
    for (double v : base.values) {
        if (v > 1.0 + 1e-12) {
            throw ConfigurationError("tail estimate expects a base normalized into (0, 1]");
        }
    }
    const double alpha = spec.alpha();
    const Index m0 = base.startIndex;
    if (base.endIndex() - spec.p < m0) {
        throw ConfigurationError("base window too short for the coefficient bound");
    }
    double B = 0.0;
    for (Index k = m0; k <= base.endIndex() - spec.p; ++k) {
        B = std::max(B, coeff_eval(spec.b, k));
    }
    const double num = B * static_cast<double>(spec.p - 1) + std::fabs(base.quasidiff_at(m0));
    const double iw = detail::inverse_weight_tail(spec.a, spec.p - 1, alpha, n, nullptr);
    return sigma_alpha(alpha) * (phi_star(num, spec.phi) * iw + base.value_at(n + spec.p - 1));
}

FixedPointRun iterate_operator(const Envelope& env, const IterateOptions& options, Index N) {
    if (!(options.damping > 0.0) || options.damping > 1.0) {
        throw ConfigurationError("damping must lie in (0, 1]");
    }
    if (!(options.tol > 0.0)) throw ConfigurationError("tol must be positive");
    if (options.maxIter < 1) throw ConfigurationError("maxIter must be positive");

    const bool forward = env.direction == OperatorDirection::ForwardToHalfLinear;
    const Index W0 = env.anchorIndex;
    if (N < W0 + 1) throw ConfigurationError("window end must exceed the anchor index");
    const std::size_t W = static_cast<std::size_t>(N - W0 + 1);

    std::vector<double> u(W);
    for (std::size_t m = 0; m < W; ++m) {
        const Index n = W0 + static_cast<Index>(m);
        switch (options.seed) {
            case IterationSeed::Upper: u[m] = env.upper(n); break;
            case IterationSeed::Lower: u[m] = env.lower(n); break;
            case IterationSeed::Midpoint: u[m] = 0.5 * (env.lower(n) + env.upper(n)); break;
        }
    }

    const double scale = env.upper(W0);
    std::vector<double> residuals;
    std::vector<double> violations;
    bool converged = false;
    int iterations = 0;

    for (int it = 0; it < options.maxIter; ++it) {
        const std::vector<double> v = forward ? apply_forward(u, env, N)
                                              : apply_reverse(u, env, N);
        double res = 0.0;
        double viol = 0.0;
        for (std::size_t m = 0; m < W; ++m) {
            const Index n = W0 + static_cast<Index>(m);
            res = std::max(res, std::fabs(v[m] - u[m]));
            viol = std::max({viol, env.lower(n) - v[m], v[m] - env.upper(n)});
        }
        residuals.push_back(res);
        violations.push_back(viol);
        ++iterations;
        if (viol > 10.0 * options.tol * scale) {
            std::ostringstream msg;
            msg << "iterates left the order interval by " << viol
                << "; the base data are inconsistent with the operator hypotheses";
            throw InstabilityError(msg.str());
        }
        for (std::size_t m = 0; m < W; ++m) {
            u[m] = (1.0 - options.damping) * u[m] + options.damping * v[m];
        }
        if (res < options.tol) {
            converged = true;
            break;
        }
    }

    // scale back to the units of the original base data
    const double lambda = env.scaleApplied;
    std::vector<double> physical(W);
    for (std::size_t m = 0; m < W; ++m) physical[m] = u[m] * lambda;

    EquationSpec target = forward ? halflinear_reduction(env.spec) : env.spec;
    Trajectory solution = Trajectory::from_values(W0, std::move(physical), target);

    // pointwise residual against the target equation, absolute and relative
    double eqMax = 0.0;
    double eqRel = 0.0;
    const Index maxOff = std::max<Index>(2, target.p);
    for (Index n = W0; n + maxOff <= solution.endIndex(); ++n) {
        const double lead =
            coeff_eval(target.a, n + 1) *
            phi(solution.value_at(n + 2) - solution.value_at(n + 1), target.phi);
        const double lag = coeff_eval(target.a, n) *
                           phi(solution.value_at(n + 1) - solution.value_at(n), target.phi);
        const double load =
            coeff_eval(target.b, n) * phi(solution.value_at(n + target.p), target.phi);
        const double r = lead - lag + load;
        eqMax = std::max(eqMax, std::fabs(r));
        const double mag = std::fabs(lead) + std::fabs(lag) + std::fabs(load);
        eqRel = std::max(eqRel, std::fabs(r) / std::max(mag, 1e-300));
    }

    double tailBound;
    if (forward) {
        double coefficientBound = 0.0;
        for (Index k = W0; k <= N; ++k) {
            coefficientBound =
                std::max(coefficientBound, coeff_eval(env.spec.b, k) *
                                               phi(env.base.value_at(k + env.spec.p),
                                                   env.spec.phi));
        }
        tailBound = forward_tail_bound(env, N, coefficientBound) * lambda;
    } else {
        tailBound = (env.upperScale - 1.0) * env.base.value_at(N + 2 - env.spec.p) * lambda;
    }

    ClassificationReport report;
    try {
        report = classify(solution, target, {});
    } catch (const ConfigurationError&) {
        report.verdict = TrajectoryClass::Inconclusive;
        report.trend = "window too short for classification";
    }

    return FixedPointRun{std::move(residuals),
                         std::move(violations),
                         N,
                         tailBound,
                         converged,
                         iterations,
                         std::move(u),
                         std::move(solution),
                         eqMax,
                         eqRel,
                         std::move(report),
                         std::move(target)};
}

}  // namespace halflin
