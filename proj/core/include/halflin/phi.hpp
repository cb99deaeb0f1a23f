#pragma once

#include "halflin/errors.hpp"

namespace halflin {

/// The signed power map Phi(u) = |u|^alpha * sgn(u) together with its
/// exponent. Phi is odd, strictly increasing, and bijective on the reals;
/// phi_star (exponent 1/alpha) is its inverse.
struct PhiMap {
    double alpha;

    explicit PhiMap(double a);
};

/// |u|^alpha * sgn(u). Exact zero maps to exact zero for every alpha.
double phi(double u, const PhiMap& map);

/// |u|^(1/alpha) * sgn(u); inverse of phi: phi_star(phi(u)) == u.
double phi_star(double u, const PhiMap& map);

/// Subadditivity constant: 1 for alpha >= 1, else 2^((1-alpha)/alpha).
/// Satisfies phi_star(X+Y) <= sigma_alpha(alpha) * (phi_star(X) + phi_star(Y))
/// for X, Y >= 0.
double sigma_alpha(double alpha);

}  // namespace halflin
