#include "halflin/equation.hpp"

namespace halflin {

void validate_spec(const EquationSpec& spec) {
    if (spec.p < 1) {
        throw ConfigurationError("p must be >= 1 (delay arguments are not supported)");
    }
    if (spec.startIndex < 1) {
        throw ConfigurationError("startIndex must be >= 1");
    }
    validate_family(spec.a, "a");
    validate_family(spec.b, "b");
    if (first_admissible_index(spec.a) > spec.startIndex) {
        throw ConfigurationError("a is not evaluable at startIndex " +
                                 std::to_string(spec.startIndex));
    }
    if (first_admissible_index(spec.b) > spec.startIndex) {
        throw ConfigurationError("b is not evaluable at startIndex " +
                                 std::to_string(spec.startIndex));
    }
}

EquationSpec halflinear_reduction(const EquationSpec& spec) {
    EquationSpec reduced{shift_family(spec.a, spec.p - 1), spec.b, spec.phi, 1,
                         spec.startIndex};
    return reduced;
}

}  // namespace halflin
