#include "halflin/recursion.hpp"

#include <algorithm>
#include <cmath>

namespace halflin {

namespace {

void check_finite_step(double x, Index n) {
    if (!std::isfinite(x)) {
        throw OverflowError("march produced a non-finite value at index " + std::to_string(n));
    }
}

}  // namespace

double solve_advanced_step(const EquationSpec& spec, Index n, double x_n, double x_np1) {
    const double a_n = coeff_eval(spec.a, n);
    const double a_np1 = coeff_eval(spec.a, n + 1);
    const double b_n = coeff_eval(spec.b, n);
    const double rhs = a_n * phi(x_np1 - x_n, spec.phi);

    // strictly increasing in t, so the root is unique
    auto g = [&](double t) { return a_np1 * phi(t - x_np1, spec.phi) + b_n * phi(t, spec.phi) - rhs; };

    const double width0 = 2.0 * std::fabs(x_np1 - x_n) + 1.0;
    double lo = x_np1 - width0;
    double hi = x_np1 + width0;
    double glo = g(lo);
    double ghi = g(hi);
    int doublings = 0;
    while (glo > 0.0 || ghi < 0.0) {
        if (std::max(std::fabs(lo), std::fabs(hi)) > 1e9) {
            throw DivergenceError("advanced-step bracket expansion exceeded 1e9 at index " +
                                  std::to_string(n));
        }
        if (glo > 0.0) {
            lo = x_np1 - 2.0 * (x_np1 - lo);
            glo = g(lo);
        }
        if (ghi < 0.0) {
            hi = x_np1 + 2.0 * (hi - x_np1);
            ghi = g(hi);
        }
        ++doublings;
        if (doublings > 200) {
            throw DivergenceError("advanced-step bracket failed to capture a sign change at index " +
                                  std::to_string(n));
        }
    }

    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;

    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-12 * std::max(1.0, std::fabs(mid))) break;
        double gm = g(mid);
        if (gm == 0.0) return mid;
        if (gm < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }

    // one safeguarded secant polish on the final bracket: exact for the
    // piecewise-linear case, otherwise never worse than the best endpoint
    double best = mid;
    double gbest = std::fabs(g(mid));
    if (ghi != glo) {
        double ts = lo - glo * (hi - lo) / (ghi - glo);
        ts = std::clamp(ts, lo, hi);
        double gts = std::fabs(g(ts));
        if (gts <= gbest) {
            best = ts;
            gbest = gts;
        }
    }
    if (std::fabs(glo) < gbest) {
        best = lo;
        gbest = std::fabs(glo);
    }
    if (std::fabs(ghi) < gbest) {
        best = hi;
    }
    return best;
}

Trajectory simulate(const EquationSpec& spec, const InitialData& init, Index horizon) {
    validate_spec(spec);
    const Index n0 = init.startIndex;
    if (n0 != spec.startIndex) {
        throw ConfigurationError("initial data startIndex " + std::to_string(n0) +
                                 " does not match equation startIndex " +
                                 std::to_string(spec.startIndex));
    }
    if (horizon <= n0 + spec.p) {
        throw ConfigurationError("horizon must exceed startIndex + p");
    }
    for (double v : init.segment) {
        if (!std::isfinite(v)) {
            throw ConfigurationError("initial data contains a non-finite entry");
        }
    }

    const std::size_t length = static_cast<std::size_t>(horizon - n0 + 1);
    std::vector<double> xs;
    xs.reserve(length);

    if (spec.p == 1) {
        if (init.segment.size() != 2) {
            throw ConfigurationError(
                "p == 1 initial data needs two entries: consecutive values, or a value "
                "with its quasidifference");
        }
        xs.push_back(init.segment[0]);
        double q;  // quasidifference at index n0
        if (init.quasidiffSeed) {
            q = init.segment[1];
            double x1 = xs[0] + phi_star(q / coeff_eval(spec.a, n0), spec.phi);
            check_finite_step(x1, n0 + 1);
            xs.push_back(x1);
        } else {
            xs.push_back(init.segment[1]);
            q = coeff_eval(spec.a, n0) * phi(xs[1] - xs[0], spec.phi);
        }
        for (Index n = n0 + 1; n < horizon; ++n) {
            q -= coeff_eval(spec.b, n - 1) * phi(xs[static_cast<std::size_t>(n - n0)], spec.phi);
            if (!std::isfinite(q)) {
                throw OverflowError("quasidifference overflowed at index " + std::to_string(n));
            }
            double next = xs.back() + phi_star(q / coeff_eval(spec.a, n), spec.phi);
            check_finite_step(next, n + 1);
            xs.push_back(next);
        }
    } else if (spec.p == 2) {
        if (init.segment.size() != 2) {
            throw ConfigurationError("p == 2 initial data needs the two values x_{n0}, x_{n0+1}");
        }
        xs = {init.segment[0], init.segment[1]};
        for (Index n = n0; n + 2 <= horizon; ++n) {
            double next = solve_advanced_step(spec, n, xs[static_cast<std::size_t>(n - n0)],
                                              xs[static_cast<std::size_t>(n - n0 + 1)]);
            check_finite_step(next, n + 2);
            xs.push_back(next);
        }
    } else {
        if (init.segment.size() != static_cast<std::size_t>(spec.p)) {
            throw ConfigurationError("p >= 3 initial data needs exactly p = " +
                                     std::to_string(spec.p) + " consecutive values");
        }
        xs = init.segment;
        for (Index n = n0; n + spec.p <= horizon; ++n) {
            const double a_n = coeff_eval(spec.a, n);
            const double a_np1 = coeff_eval(spec.a, n + 1);
            const double q_n =
                a_n * phi(xs[static_cast<std::size_t>(n - n0 + 1)] -
                              xs[static_cast<std::size_t>(n - n0)],
                          spec.phi);
            const double q_np1 =
                a_np1 * phi(xs[static_cast<std::size_t>(n - n0 + 2)] -
                                xs[static_cast<std::size_t>(n - n0 + 1)],
                            spec.phi);
            double next = phi_star((q_n - q_np1) / coeff_eval(spec.b, n), spec.phi);
            check_finite_step(next, n + spec.p);
            xs.push_back(next);
        }
    }

    return Trajectory::from_values(n0, std::move(xs), spec);
}

Index residual_start(const Trajectory& traj) { return traj.startIndex; }

std::size_t residual_count(const EquationSpec& spec, const Trajectory& traj) {
    const Index maxOffset = std::max<Index>(2, spec.p);
    Index count = static_cast<Index>(traj.values.size()) - maxOffset;
    return count > 0 ? static_cast<std::size_t>(count) : 0;
}

std::vector<double> residual(const EquationSpec& spec, const Trajectory& traj) {
    const std::size_t count = residual_count(spec, traj);
    if (count == 0) {
        throw IndexError("trajectory window too short to evaluate any residual");
    }
    std::vector<double> r(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Index n = traj.startIndex + static_cast<Index>(i);
        const double dx_n = traj.values[i + 1] - traj.values[i];
        const double dx_np1 = traj.values[i + 2] - traj.values[i + 1];
        const double advanced = traj.values[i + static_cast<std::size_t>(spec.p)];
        r[i] = coeff_eval(spec.a, n + 1) * phi(dx_np1, spec.phi) -
               coeff_eval(spec.a, n) * phi(dx_n, spec.phi) +
               coeff_eval(spec.b, n) * phi(advanced, spec.phi);
        if (!std::isfinite(r[i])) {
            throw OverflowError("residual is not finite at index " + std::to_string(n));
        }
    }
    return r;
}

std::vector<double> residual_scaled(const EquationSpec& spec, const Trajectory& traj) {
    std::vector<double> r = residual(spec, traj);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] /= coeff_eval(spec.b, traj.startIndex + static_cast<Index>(i));
    }
    return r;
}

}  // namespace halflin
