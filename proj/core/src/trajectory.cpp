#include "halflin/trajectory.hpp"

#include <cmath>

namespace halflin {

double Trajectory::value_at(Index n) const {
    Index offset = n - startIndex;
    if (offset < 0 || offset >= static_cast<Index>(values.size())) {
        throw IndexError("trajectory value index " + std::to_string(n) +
                         " outside window [" + std::to_string(startIndex) + ", " +
                         std::to_string(endIndex()) + "]");
    }
    return values[static_cast<std::size_t>(offset)];
}

double Trajectory::quasidiff_at(Index n) const {
    Index offset = n - startIndex;
    if (offset < 0 || offset >= static_cast<Index>(quasidiff.size())) {
        throw IndexError("quasidifference index " + std::to_string(n) +
                         " outside window [" + std::to_string(startIndex) + ", " +
                         std::to_string(endIndex() - 1) + "]");
    }
    return quasidiff[static_cast<std::size_t>(offset)];
}

std::vector<double> quasidifference(const std::vector<double>& values, Index startIndex,
                                    const EquationSpec& spec) {
    if (values.size() < 2) {
        throw ConfigurationError("quasidifference needs at least two values");
    }
    std::vector<double> result(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        Index n = startIndex + static_cast<Index>(i);
        double weight = coeff_eval(spec.a, n);
        result[i] = weight * phi(values[i + 1] - values[i], spec.phi);
        if (!std::isfinite(result[i])) {
            throw OverflowError("quasidifference is not finite at index " + std::to_string(n));
        }
    }
    return result;
}

Trajectory Trajectory::from_values(Index startIndex, std::vector<double> values,
                                   const EquationSpec& spec) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw OverflowError("trajectory value is not finite at index " +
                                std::to_string(startIndex + static_cast<Index>(i)));
        }
    }
    Trajectory traj;
    traj.startIndex = startIndex;
    traj.quasidiff = quasidifference(values, startIndex, spec);
    traj.values = std::move(values);
    return traj;
}

}  // namespace halflin
