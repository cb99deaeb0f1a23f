#include "halflin/phi.hpp"

#include <cmath>
#include <string>

namespace halflin {

namespace {

void require_finite(double u, const char* what) {
    if (!std::isfinite(u)) {
        throw DomainError(std::string(what) + ": input is not finite");
    }
}

double signed_pow(double u, double exponent) {
    if (u == 0.0) return 0.0;
    // fast paths for the exponents the solvers hit in inner loops
    if (exponent == 1.0) return u;
    if (exponent == 2.0) return u * std::fabs(u);
    if (exponent == 0.5) return std::copysign(std::sqrt(std::fabs(u)), u);
    double magnitude = std::pow(std::fabs(u), exponent);
    if (!std::isfinite(magnitude)) {
        throw OverflowError("signed power map overflowed at input " + std::to_string(u));
    }
    return std::copysign(magnitude, u);
}

}  // namespace

PhiMap::PhiMap(double a) : alpha(a) {
    if (!std::isfinite(a) || a <= 0.0) {
        throw ConfigurationError("alpha must be a positive finite real");
    }
}

double phi(double u, const PhiMap& map) {
    require_finite(u, "phi");
    return signed_pow(u, map.alpha);
}

double phi_star(double u, const PhiMap& map) {
    require_finite(u, "phi_star");
    return signed_pow(u, 1.0 / map.alpha);
}

double sigma_alpha(double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0) {
        throw ConfigurationError("sigma_alpha: alpha must be a positive finite real");
    }
    if (alpha >= 1.0) return 1.0;
    return std::exp2((1.0 - alpha) / alpha);
}

}  // namespace halflin
