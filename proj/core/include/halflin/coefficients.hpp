#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "halflin/errors.hpp"

namespace halflin {

using Index = std::int64_t;

/// value > 0 at every index.
struct ConstantFamily {
    double value;
};

/// coef * (n + shift)^exponent; requires n + shift >= 1 at every evaluated
/// index and coef > 0.
struct PowerShiftFamily {
    double coef;
    Index shift;
    double exponent;
};

/// (n + shift)!; requires n + shift >= 1 at every evaluated index.
struct FactorialShiftFamily {
    Index shift;
};

/// Explicit positive values on [startIndex, startIndex + size - 1].
struct TableFamily {
    Index startIndex;
    std::vector<double> values;
};

/// A symbolic coefficient family evaluable at integer indices, strictly
/// positive on its admissible domain.
using CoefficientSequence =
    std::variant<ConstantFamily, PowerShiftFamily, FactorialShiftFamily, TableFamily>;

/// Throws ConfigurationError naming the offending field if the family cannot
/// be strictly positive and finite on its admissible domain.
void validate_family(const CoefficientSequence& seq, const std::string& name);

/// First index at which the family may be evaluated.
Index first_admissible_index(const CoefficientSequence& seq);

/// Last admissible index (tables end; unbounded families report a sentinel
/// of std::numeric_limits<Index>::max()).
Index last_admissible_index(const CoefficientSequence& seq);

/// Family value at n. Throws IndexError below/above the admissible domain and
/// OverflowError (naming the index) when the linear-scale value leaves
/// double range.
double coeff_eval(const CoefficientSequence& seq, Index n);

/// Natural logarithm of the family value at n; factorial families use a
/// log-factorial accumulation so the result stays finite far beyond linear-
/// scale overflow. Same domain errors as coeff_eval.
double coeff_log_eval(const CoefficientSequence& seq, Index n);

/// Evaluate the family at n + delta (a shifted view). Used for the
/// half-linear reduction weight a_{n+p-1}.
CoefficientSequence shift_family(const CoefficientSequence& seq, Index delta);

/// One-line description for reports ("constant 0.2", "(n-1)^2", ...).
std::string describe_family(const CoefficientSequence& seq);

}  // namespace halflin
