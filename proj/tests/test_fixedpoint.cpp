#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace halflin;
using testutil::advanced_square_spec;
using testutil::factorial_spec;
using testutil::factorial_exact;

namespace {

Envelope factorial_envelope() {
    return build_envelope(OperatorDirection::ForwardToHalfLinear, factorial_exact(44),
                          factorial_spec());
}

}  // namespace

TEST_CASE("forward envelope constants for the factorial equation") {
    Envelope env = factorial_envelope();
    // anchor sum L = b_1 = 3! and |q0| = 1, so phi(M) = 1/7; alpha = 1
    CHECK(env.anchorWeightSum == doctest::Approx(6.0));
    CHECK(env.anchorQuasidiff == doctest::Approx(-1.0));
    CHECK(env.lowerScale == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(env.upperScale == 1.0);
    CHECK(env.scaleApplied == doctest::Approx(1.0));
    CHECK(env.anchorIndex == 1);
    // bounds read the base at the advanced offset
    CHECK(env.upper(1) == doctest::Approx(0.5));
    CHECK(env.lower(1) == doctest::Approx(0.5 / 7.0));
}

TEST_CASE("forward envelope with no interior coefficients clamps below one") {
    EquationSpec spec = testutil::euler_spec(0.2, 1.0);
    ShootResult base = shoot_halflinear(spec, 1.0, 3000);
    REQUIRE(base.outcome == ShootOutcome::Found);
    Envelope env = build_envelope(OperatorDirection::ForwardToHalfLinear, base.trajectory,
                                  spec);
    CHECK(env.anchorWeightSum == 0.0);
    CHECK(env.lowerScale == doctest::Approx(1.0 - 1e-6));
}

TEST_CASE("forward envelope interior sum for a wider advance") {
    EquationSpec spec{ConstantFamily{1.0}, ConstantFamily{0.4}, PhiMap{1.0}, 3, 1};
    std::vector<double> vals;
    for (Index n = 1; n <= 30; ++n) vals.push_back(std::exp(-0.3 * static_cast<double>(n)));
    Trajectory base = Trajectory::from_values(1, std::move(vals), spec);
    Envelope env = build_envelope(OperatorDirection::ForwardToHalfLinear, base, spec);
    CHECK(env.anchorWeightSum == doctest::Approx(0.8));  // b_1 + b_2
}

TEST_CASE("base normalization records the scale factor") {
    Trajectory t = factorial_exact(44);
    std::vector<double> scaled = t.values;
    for (double& v : scaled) v *= 40.0;
    Trajectory big = Trajectory::from_values(1, std::move(scaled), factorial_spec());
    Envelope env = build_envelope(OperatorDirection::ForwardToHalfLinear, big,
                                  factorial_spec());
    CHECK(env.scaleApplied == doctest::Approx(40.0));
    CHECK(env.base.values.front() == doctest::Approx(1.0));
    // dividing by the recorded factor restores the unscaled base exactly,
    // so the normalized anchor quasidifference is scale-invariant
    CHECK(env.anchorQuasidiff == doctest::Approx(-1.0));
}

TEST_CASE("envelope bases must be positive and strictly decreasing") {
    EquationSpec spec = factorial_spec();
    CHECK_THROWS_AS(
        build_envelope(OperatorDirection::ForwardToHalfLinear,
                       Trajectory::from_values(1, {1.0, 0.5, 0.6, 0.2}, spec), spec),
        ConfigurationError);
    CHECK_THROWS_AS(
        build_envelope(OperatorDirection::ForwardToHalfLinear,
                       Trajectory::from_values(1, {1.0, -0.5}, spec), spec),
        ConfigurationError);
}

TEST_CASE("forward image of the upper boundary reproduces the base quasidifference") {
    Envelope env = factorial_envelope();
    const Index N = 40;
    std::vector<double> upper;
    for (Index n = 1; n <= N; ++n) upper.push_back(env.upper(n));

    std::vector<double> z = apply_forward(upper, env, N);
    Trajectory zt = Trajectory::from_values(1, z, halflinear_reduction(factorial_spec()));
    for (Index n = 1; n < N; ++n) {
        CHECK(std::fabs(zt.quasidiff_at(n) - env.base.quasidiff_at(n)) <= 1e-10);
    }
}

TEST_CASE("forward operator maps the order interval into itself, monotonically") {
    Envelope env = factorial_envelope();
    const Index N = 40;
    const std::size_t W = static_cast<std::size_t>(N);

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> u(W);
        for (std::size_t m = 0; m < W; ++m) {
            const Index n = 1 + static_cast<Index>(m);
            const double lo = env.lower(n);
            const double hi = env.upper(n);
            u[m] = lo + (hi - lo) * unit(rng);
        }
        std::vector<double> z = apply_forward(u, env, N);
        for (std::size_t m = 0; m < W; ++m) {
            const Index n = 1 + static_cast<Index>(m);
            CHECK(z[m] >= env.lower(n) * (1.0 - 1e-9));
            CHECK(z[m] <= env.upper(n) * (1.0 + 1e-9));
        }

        // monotonicity: pointwise larger inputs give pointwise larger images
        std::vector<double> bumped(W);
        for (std::size_t m = 0; m < W; ++m) {
            const Index n = 1 + static_cast<Index>(m);
            bumped[m] = u[m] + 0.5 * (env.upper(n) - u[m]);
        }
        std::vector<double> zb = apply_forward(bumped, env, N);
        for (std::size_t m = 0; m < W; ++m) {
            CHECK(zb[m] >= z[m] * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("operator application rejects an envelope of the other direction") {
    Envelope fwd = factorial_envelope();
    std::vector<double> u(40, 0.1);
    CHECK_THROWS_AS(apply_reverse(u, fwd, 40), ConfigurationError);

    EquationSpec spec = advanced_square_spec(0.2);
    ShootResult shot = shoot_halflinear(halflinear_reduction(spec), 1.0, 4000);
    REQUIRE(shot.outcome == ShootOutcome::Found);
    Envelope rev = build_envelope(OperatorDirection::ReverseToAdvanced, shot.trajectory, spec);
    std::vector<double> w(37, 0.1);
    CHECK_THROWS_AS(apply_forward(w, rev, 40), ConfigurationError);
}

TEST_CASE("forward iteration converges to a solution of the reduced equation") {
    Envelope env = factorial_envelope();
    IterateOptions opts;
    opts.seed = IterationSeed::Upper;
    opts.tol = 1e-12;
    opts.maxIter = 200;
    FixedPointRun run = iterate_operator(env, opts, 40);

    CHECK(run.converged);
    CHECK(run.iterations <= 120);
    CHECK(run.residuals.back() < 1e-12);
    CHECK(run.equationResidualRel <= 1e-9);
    CHECK(run.classification.verdict == TrajectoryClass::Intermediate);
    CHECK(run.targetSpec.p == 1);
    for (double v : run.envelopeViolations) CHECK(v <= 1e-12);

    // anchor data survive the iteration: the fixed point's quasidifference
    // at the anchor equals the base's
    CHECK(run.solution.quasidiff_at(1) == doctest::Approx(-1.0).epsilon(1e-10));

    // one more application leaves the fixed point essentially unchanged
    std::vector<double> again = apply_forward(run.fixedPoint, env, 40);
    for (std::size_t m = 0; m < again.size(); ++m) {
        CHECK(std::fabs(again[m] - run.fixedPoint[m]) <= 10.0 * opts.tol);
    }
}

TEST_CASE("seeding from the lower boundary or midpoint reaches the same fixed point") {
    // the lower boundary's image at the window end is several times smaller
    // than the anchor scale, so it needs a longer window than the upper seed
    // to keep the truncation remainder below the gate
    Envelope env = build_envelope(OperatorDirection::ForwardToHalfLinear,
                                  testutil::factorial_exact(74), factorial_spec());
    IterateOptions upper;
    upper.tol = 1e-12;
    IterateOptions lower = upper;
    lower.seed = IterationSeed::Lower;
    IterateOptions mid = upper;
    mid.seed = IterationSeed::Midpoint;

    FixedPointRun a = iterate_operator(env, upper, 70);
    FixedPointRun b = iterate_operator(env, lower, 70);
    FixedPointRun c = iterate_operator(env, mid, 70);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    REQUIRE(c.converged);
    for (std::size_t m = 0; m < a.fixedPoint.size(); ++m) {
        CHECK(a.fixedPoint[m] == doctest::Approx(b.fixedPoint[m]).epsilon(1e-8));
        CHECK(a.fixedPoint[m] == doctest::Approx(c.fixedPoint[m]).epsilon(1e-8));
    }
}

TEST_CASE("truncation bound gates a too-short forward window") {
    Envelope env = factorial_envelope();
    // window end 4 leaves a remainder comparable to the window-end value
    std::vector<double> u;
    for (Index n = 1; n <= 4; ++n) u.push_back(env.upper(n));
    CHECK_THROWS_AS(apply_forward(u, env, 4), TruncationError);
}

TEST_CASE("reverse pipeline rebuilds an advanced solution from the reduced one") {
    EquationSpec spec = advanced_square_spec(0.2);  // a_n = (n-1)^2, p = 2, from n = 2
    EquationSpec reduced = halflinear_reduction(spec);
    CHECK(reduced.p == 1);
    CHECK(coeff_eval(reduced.a, 5) == 25.0);  // weight reads a_{n+1} = n^2

    ShootResult shot = shoot_halflinear(reduced, 1.0, 12000);
    REQUIRE(shot.outcome == ShootOutcome::Found);

    Envelope env = build_envelope(OperatorDirection::ReverseToAdvanced, shot.trajectory,
                                  spec);
    CHECK(env.anchorIndex == 4);
    CHECK(env.anchorWeightSum == doctest::Approx(0.2));  // single interior coefficient
    // the shot base decays like n^m with m the recessive root of
    // m(m+1) + 0.2 = 0, so the anchor quasidifference is about
    // 16 * ((5/2)^m - (4/2)^m) = -1.443 and the scale 1.443 / 1.243
    CHECK(env.upperScale == doctest::Approx(1.161).epsilon(0.02));

    IterateOptions opts;
    opts.tol = 1e-6;
    FixedPointRun run = iterate_operator(env, opts, 800);
    CHECK(run.converged);
    CHECK(run.iterations <= 60);
    CHECK(run.equationResidualMax <= 1e-5);
    CHECK(run.targetSpec.p == 2);
    CHECK(run.tailBound > 0.0);

    // the rebuilt window is positive, strictly decreasing, and sits inside
    // the reverse order interval
    const auto& v = run.solution.values;
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(v[i] > 0.0);
        if (i > 0) CHECK(v[i] < v[i - 1]);
        const Index n = 4 + static_cast<Index>(i);
        CHECK(v[i] >= env.lower(n) * env.scaleApplied * (1.0 - 1e-6));
        CHECK(v[i] <= env.upper(n) * env.scaleApplied * (1.0 + 1e-6));
    }
}

TEST_CASE("reverse envelope requires the anchor to dominate the interior sum") {
    EquationSpec gentle = advanced_square_spec(0.2);
    EquationSpec harsh = advanced_square_spec(10.0);  // interior sum 10 > |q1|
    ShootResult shot = shoot_halflinear(halflinear_reduction(gentle), 1.0, 4000);
    REQUIRE(shot.outcome == ShootOutcome::Found);
    CHECK_THROWS_AS(
        build_envelope(OperatorDirection::ReverseToAdvanced, shot.trajectory, harsh),
        HypothesisError);
}

TEST_CASE("summed decay tail is positive and decreasing in the start index") {
    Trajectory base = factorial_exact(44);
    EquationSpec spec = factorial_spec();
    double prev = std::numeric_limits<double>::infinity();
    for (Index n = 5; n <= 12; ++n) {
        const double t = tail_estimate(base, spec, n);
        CHECK(t > 0.0);
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("summed decay tail drops the coefficient bound when the advance is one") {
    EquationSpec lowSpec = testutil::euler_spec(0.2, 1.0);
    EquationSpec highSpec = testutil::euler_spec(0.9, 1.0);
    ShootResult shot = shoot_halflinear(lowSpec, 1.0, 3000);
    REQUIRE(shot.outcome == ShootOutcome::Found);
    // p = 1: B(p-1) vanishes, so the bound is insensitive to the coefficients
    const double a = tail_estimate(shot.trajectory, lowSpec, 10);
    const double b = tail_estimate(shot.trajectory, highSpec, 10);
    CHECK(a == b);
}

TEST_CASE("summed decay tail expects a normalized base") {
    Trajectory t = factorial_exact(44);
    std::vector<double> scaled = t.values;
    for (double& v : scaled) v *= 3.0;
    Trajectory big = Trajectory::from_values(1, std::move(scaled), factorial_spec());
    CHECK_THROWS_AS(tail_estimate(big, factorial_spec(), 5), ConfigurationError);
}

TEST_CASE("iteration options are validated") {
    Envelope env = factorial_envelope();
    IterateOptions bad;
    bad.damping = 0.0;
    CHECK_THROWS_AS(iterate_operator(env, bad, 40), ConfigurationError);
    bad.damping = 1.5;
    CHECK_THROWS_AS(iterate_operator(env, bad, 40), ConfigurationError);
    IterateOptions badTol;
    badTol.tol = -1.0;
    CHECK_THROWS_AS(iterate_operator(env, badTol, 40), ConfigurationError);
    IterateOptions badIter;
    badIter.maxIter = 0;
    CHECK_THROWS_AS(iterate_operator(env, badIter, 40), ConfigurationError);
}
