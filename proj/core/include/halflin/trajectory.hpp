#pragma once

#include <vector>

#include "halflin/equation.hpp"

namespace halflin {

/// A finite window of solution values x_n on [startIndex, startIndex+N-1]
/// together with the derived quasidifference
///
///   x^{[1]}_n = a_n * Phi(x_{n+1} - x_n)
///
/// on the interior indices [startIndex, startIndex+N-2].
struct Trajectory {
    Index startIndex = 1;
    std::vector<double> values;
    std::vector<double> quasidiff;  // derived; size values.size()-1

    Index endIndex() const {
        return startIndex + static_cast<Index>(values.size()) - 1;
    }
    std::size_t size() const { return values.size(); }

    double value_at(Index n) const;
    double quasidiff_at(Index n) const;

    /// Builds the trajectory and derives the quasidifference from the spec's
    /// weight. Throws OverflowError (naming the index) on non-finite entries
    /// and ConfigurationError when fewer than two values are given.
    static Trajectory from_values(Index startIndex, std::vector<double> values,
                                  const EquationSpec& spec);
};

/// a_n * Phi(x_{n+1} - x_n) for each interior index of `values` anchored at
/// `startIndex`. Requires at least two values.
std::vector<double> quasidifference(const std::vector<double>& values, Index startIndex,
                                    const EquationSpec& spec);

}  // namespace halflin
