#pragma once

#include "halflin/coefficients.hpp"
#include "halflin/phi.hpp"

namespace halflin {

/// The tuple (a, b, alpha, p, n0) defining the advanced-argument difference
/// equation
///
///   Delta(a_n * Phi(Delta x_n)) + b_n * Phi(x_{n+p}) = 0,   n >= n0,
///
/// with Phi(u) = |u|^alpha sgn(u). With p = 1 (after shifting the weight by
/// p-1) the same type carries the half-linear reduction of the equation.
struct EquationSpec {
    CoefficientSequence a;
    CoefficientSequence b;
    PhiMap phi;
    Index p;           // advance; p >= 1 (delay arguments are rejected)
    Index startIndex;  // n0 >= 1

    double alpha() const { return phi.alpha; }
};

/// Throws ConfigurationError naming the offending field when the spec is
/// not admissible (p < 1, startIndex < 1, or a/b not evaluable and strictly
/// positive from startIndex on).
void validate_spec(const EquationSpec& spec);

/// The half-linear reduction: same b and exponent, weight shifted to
/// a_{n+p-1}, advance 1. A positive decaying solution of the original
/// equation corresponds to one of this reduced equation and vice versa.
EquationSpec halflinear_reduction(const EquationSpec& spec);

}  // namespace halflin
