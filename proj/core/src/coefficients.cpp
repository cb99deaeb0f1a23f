#include "halflin/coefficients.hpp"

#include <cmath>
#include <sstream>

namespace halflin {

namespace {

constexpr Index kUnbounded = std::numeric_limits<Index>::max();

[[noreturn]] void below_domain(Index n) {
    throw IndexError("coefficient index " + std::to_string(n) +
                     " is below the family's admissible domain");
}

double factorial_linear(Index m, Index originalIndex) {
    // m! by direct product; exact in double up to 18! and correctly within
    // a few ulp beyond, overflowing past 170!.
    double acc = 1.0;
    for (Index i = 2; i <= m; ++i) {
        acc *= static_cast<double>(i);
        if (!std::isfinite(acc)) {
            throw OverflowError("factorial coefficient overflowed at index " +
                                std::to_string(originalIndex));
        }
    }
    return acc;
}

double log_factorial(Index m) {
    // accumulated log-factorial; lgamma(m+1) == log(m!)
    return std::lgamma(static_cast<double>(m) + 1.0);
}

}  // namespace

void validate_family(const CoefficientSequence& seq, const std::string& name) {
    if (const auto* c = std::get_if<ConstantFamily>(&seq)) {
        if (!std::isfinite(c->value) || c->value <= 0.0) {
            throw ConfigurationError(name + ".value must be a positive finite real");
        }
    } else if (const auto* p = std::get_if<PowerShiftFamily>(&seq)) {
        if (!std::isfinite(p->coef) || p->coef <= 0.0) {
            throw ConfigurationError(name + ".coef must be a positive finite real");
        }
        if (!std::isfinite(p->exponent)) {
            throw ConfigurationError(name + ".exponent must be finite");
        }
    } else if (const auto* t = std::get_if<TableFamily>(&seq)) {
        if (t->values.empty()) {
            throw ConfigurationError(name + ".values must be non-empty");
        }
        for (std::size_t i = 0; i < t->values.size(); ++i) {
            if (!std::isfinite(t->values[i]) || t->values[i] <= 0.0) {
                throw ConfigurationError(name + ".values[" + std::to_string(i) +
                                         "] must be a positive finite real");
            }
        }
    }
    // FactorialShiftFamily has no tunable fields to validate.
}

Index first_admissible_index(const CoefficientSequence& seq) {
    if (std::holds_alternative<ConstantFamily>(seq)) {
        return std::numeric_limits<Index>::min() / 2;
    }
    if (const auto* p = std::get_if<PowerShiftFamily>(&seq)) {
        return 1 - p->shift;
    }
    if (const auto* f = std::get_if<FactorialShiftFamily>(&seq)) {
        return 1 - f->shift;
    }
    return std::get<TableFamily>(seq).startIndex;
}

Index last_admissible_index(const CoefficientSequence& seq) {
    if (const auto* t = std::get_if<TableFamily>(&seq)) {
        return t->startIndex + static_cast<Index>(t->values.size()) - 1;
    }
    return kUnbounded;
}

double coeff_eval(const CoefficientSequence& seq, Index n) {
    if (const auto* c = std::get_if<ConstantFamily>(&seq)) {
        return c->value;
    }
    if (const auto* p = std::get_if<PowerShiftFamily>(&seq)) {
        Index base = n + p->shift;
        if (base < 1) below_domain(n);
        double value = p->coef * std::pow(static_cast<double>(base), p->exponent);
        if (!std::isfinite(value)) {
            throw OverflowError("power coefficient overflowed at index " + std::to_string(n));
        }
        if (value <= 0.0) {
            throw OverflowError("power coefficient underflowed to zero at index " +
                                std::to_string(n));
        }
        return value;
    }
    if (const auto* f = std::get_if<FactorialShiftFamily>(&seq)) {
        Index m = n + f->shift;
        if (m < 1) below_domain(n);
        return factorial_linear(m, n);
    }
    const auto& t = std::get<TableFamily>(seq);
    if (n < t.startIndex) below_domain(n);
    Index offset = n - t.startIndex;
    if (offset >= static_cast<Index>(t.values.size())) {
        throw IndexError("coefficient index " + std::to_string(n) +
                         " is past the end of the table family");
    }
    return t.values[static_cast<std::size_t>(offset)];
}

double coeff_log_eval(const CoefficientSequence& seq, Index n) {
    if (const auto* f = std::get_if<FactorialShiftFamily>(&seq)) {
        Index m = n + f->shift;
        if (m < 1) below_domain(n);
        return log_factorial(m);
    }
    if (const auto* p = std::get_if<PowerShiftFamily>(&seq)) {
        Index base = n + p->shift;
        if (base < 1) below_domain(n);
        return std::log(p->coef) + p->exponent * std::log(static_cast<double>(base));
    }
    return std::log(coeff_eval(seq, n));
}

CoefficientSequence shift_family(const CoefficientSequence& seq, Index delta) {
    if (std::holds_alternative<ConstantFamily>(seq)) {
        return seq;
    }
    if (const auto* p = std::get_if<PowerShiftFamily>(&seq)) {
        return PowerShiftFamily{p->coef, p->shift + delta, p->exponent};
    }
    if (const auto* f = std::get_if<FactorialShiftFamily>(&seq)) {
        return FactorialShiftFamily{f->shift + delta};
    }
    const auto& t = std::get<TableFamily>(seq);
    return TableFamily{t.startIndex - delta, t.values};
}

std::string describe_family(const CoefficientSequence& seq) {
    std::ostringstream out;
    if (const auto* c = std::get_if<ConstantFamily>(&seq)) {
        out << "constant " << c->value;
    } else if (const auto* p = std::get_if<PowerShiftFamily>(&seq)) {
        out << p->coef << "*(n";
        if (p->shift >= 0) out << "+" << p->shift;
        else out << p->shift;
        out << ")^" << p->exponent;
    } else if (const auto* f = std::get_if<FactorialShiftFamily>(&seq)) {
        out << "(n";
        if (f->shift >= 0) out << "+" << f->shift;
        else out << f->shift;
        out << ")!";
    } else {
        const auto& t = std::get<TableFamily>(seq);
        out << "table[" << t.startIndex << ".."
            << t.startIndex + static_cast<Index>(t.values.size()) - 1 << "]";
    }
    return out.str();
}

}  // namespace halflin
