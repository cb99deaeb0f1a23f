#pragma once

// Shared fixtures for the test suites: small closed-form equations whose
// solutions are checkable by hand.

#include <cmath>
#include <vector>

#include "halflin/halflin.hpp"

namespace testutil {

using namespace halflin;

/// a_n = (n+1)!, b_n = (n+2)!, alpha = 1, p = 2, n0 = 1. The sequence
/// x_n = 1/n! solves it: the quasidifference is exactly -n and every load
/// term b_n * phi(x_{n+2}) is exactly 1.
inline EquationSpec factorial_spec() {
    return EquationSpec{FactorialShiftFamily{1}, FactorialShiftFamily{2}, PhiMap{1.0}, 2, 1};
}

/// Euler-type half-linear equation: a_n = n^(1+alpha), b_n = gamma, p = 1.
inline EquationSpec euler_spec(double gamma, double alpha) {
    return EquationSpec{PowerShiftFamily{1.0, 0, 1.0 + alpha}, ConstantFamily{gamma},
                        PhiMap{alpha}, 1, 1};
}

/// a_n = 2^n tabulated on [1, len], b = 1, alpha = 1, p = 1. The inner
/// remainder sums are exact powers of two, so both criterion series telescope
/// to 1.
inline EquationSpec geometric_spec(halflin::Index len = 102) {
    std::vector<double> pows(static_cast<std::size_t>(len));
    for (std::size_t i = 0; i < pows.size(); ++i) {
        pows[i] = std::ldexp(1.0, static_cast<int>(i) + 1);
    }
    return EquationSpec{TableFamily{1, std::move(pows)}, ConstantFamily{1.0}, PhiMap{1.0}, 1,
                        1};
}

/// The advanced equation with a_n = (n-1)^2 from startIndex 2, p = 2,
/// constant coefficient.
inline EquationSpec advanced_square_spec(double b) {
    return EquationSpec{PowerShiftFamily{1.0, -1, 2.0}, ConstantFamily{b}, PhiMap{1.0}, 2, 2};
}

/// Simulates the factorial equation from its exact seed (1, 1/2).
inline Trajectory factorial_trajectory(halflin::Index horizon) {
    InitialData init{1, {1.0, 0.5}, false};
    return simulate(factorial_spec(), init, horizon);
}

/// The closed-form solution x_n = 1/n! assembled by cumulative division.
/// The marched trajectory loses the solution once values sink below the
/// two-step solver's absolute tolerance, so window tests past n ~ 14 need
/// this exact base.
inline Trajectory factorial_exact(halflin::Index horizon) {
    std::vector<double> vals;
    double v = 1.0;
    for (halflin::Index n = 1; n <= horizon; ++n) {
        if (n > 1) v /= static_cast<double>(n);
        vals.push_back(v);
    }
    return Trajectory::from_values(1, std::move(vals), factorial_spec());
}

}  // namespace testutil
