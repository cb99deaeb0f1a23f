#include <doctest.h>

#include <cmath>
#include <string>

#include "halflin/coefficients.hpp"

using namespace halflin;

TEST_CASE("factorial family evaluates exactly in the integer-safe range") {
    FactorialShiftFamily plain{0};
    CoefficientSequence seq = plain;
    CHECK(coeff_eval(seq, 1) == 1.0);
    CHECK(coeff_eval(seq, 5) == 120.0);
    // 18! is below 2^53, hence exactly representable
    CHECK(coeff_eval(seq, 18) == 6402373705728000.0);

    CoefficientSequence shifted = FactorialShiftFamily{2};
    CHECK(coeff_eval(shifted, 1) == 6.0);   // (1+2)!
    CHECK(coeff_eval(shifted, 3) == 120.0); // (3+2)!
}

TEST_CASE("factorial overflow names the failing index") {
    CoefficientSequence seq = FactorialShiftFamily{0};
    CHECK(std::isfinite(coeff_eval(seq, 170)));
    CHECK_THROWS_WITH_AS(coeff_eval(seq, 171), doctest::Contains("171"), OverflowError);
    // the log-scale view stays finite far beyond
    CHECK(coeff_log_eval(seq, 171) == doctest::Approx(std::lgamma(172.0)));
    CHECK(std::isfinite(coeff_log_eval(seq, 5000)));
}

TEST_CASE("power family respects its domain") {
    CoefficientSequence sq = PowerShiftFamily{1.0, -1, 2.0};  // (n-1)^2
    CHECK(coeff_eval(sq, 2) == 1.0);
    CHECK(coeff_eval(sq, 5) == 16.0);
    CHECK(first_admissible_index(sq) == 2);
    CHECK_THROWS_AS(coeff_eval(sq, 1), IndexError);

    CoefficientSequence cubic = PowerShiftFamily{2.0, 0, 3.0};
    CHECK(coeff_eval(cubic, 3) == doctest::Approx(54.0));
    CHECK(coeff_log_eval(cubic, 3) == doctest::Approx(std::log(54.0)));
}

TEST_CASE("table family ends where its data end") {
    CoefficientSequence tab = TableFamily{3, {1.5, 2.5, 3.5}};
    CHECK(first_admissible_index(tab) == 3);
    CHECK(last_admissible_index(tab) == 5);
    CHECK(coeff_eval(tab, 4) == 2.5);
    CHECK_THROWS_AS(coeff_eval(tab, 2), IndexError);
    CHECK_THROWS_AS(coeff_eval(tab, 6), IndexError);
}

TEST_CASE("family validation names the offending field") {
    CHECK_THROWS_WITH_AS(validate_family(ConstantFamily{-0.5}, "b"), doctest::Contains("b"),
                         ConfigurationError);
    CHECK_THROWS_AS(validate_family(ConstantFamily{0.0}, "a"), ConfigurationError);
    CHECK_THROWS_AS(validate_family(PowerShiftFamily{-2.0, 0, 1.0}, "a"), ConfigurationError);
    CHECK_THROWS_AS(validate_family(TableFamily{1, {}}, "b"), ConfigurationError);
    CHECK_THROWS_AS(validate_family(TableFamily{1, {1.0, -1.0}}, "b"), ConfigurationError);
    CHECK_NOTHROW(validate_family(ConstantFamily{0.25}, "b"));
}

TEST_CASE("shifted views evaluate the family at n + delta") {
    CoefficientSequence sq = PowerShiftFamily{1.0, 0, 2.0};  // n^2
    CoefficientSequence view = shift_family(sq, 1);
    for (Index n = 1; n <= 20; ++n) {
        CHECK(coeff_eval(view, n) == coeff_eval(sq, n + 1));
    }

    CoefficientSequence fac = FactorialShiftFamily{1};
    CoefficientSequence facView = shift_family(fac, 1);
    CHECK(coeff_eval(facView, 1) == 6.0);  // (1+1+1)!

    CoefficientSequence tab = TableFamily{1, {10.0, 20.0, 30.0}};
    CoefficientSequence tabView = shift_family(tab, 2);
    CHECK(first_admissible_index(tabView) == -1);
    CHECK(coeff_eval(tabView, 0) == 20.0);  // original index 2

    CoefficientSequence c = ConstantFamily{0.7};
    CHECK(coeff_eval(shift_family(c, 5), 1) == 0.7);
}

TEST_CASE("unbounded families report the sentinel end") {
    CHECK(last_admissible_index(ConstantFamily{1.0}) == std::numeric_limits<Index>::max());
    CHECK(last_admissible_index(FactorialShiftFamily{0}) ==
          std::numeric_limits<Index>::max());
}

TEST_CASE("descriptions are human-readable") {
    CHECK(!describe_family(ConstantFamily{0.2}).empty());
    CHECK(!describe_family(PowerShiftFamily{1.0, -1, 2.0}).empty());
    CHECK(!describe_family(FactorialShiftFamily{1}).empty());
    CHECK(!describe_family(TableFamily{1, {1.0}}).empty());
}
