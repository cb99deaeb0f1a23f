#include <doctest.h>

#include "helpers.hpp"

using namespace halflin;

TEST_CASE("quasidifference derivation uses the weight at each index") {
    // a_n = n^2, alpha = 1: x^{[1]}_n = n^2 (x_{n+1} - x_n)
    EquationSpec spec{PowerShiftFamily{1.0, 0, 2.0}, ConstantFamily{1.0}, PhiMap{1.0}, 1, 1};
    Trajectory t = Trajectory::from_values(1, {4.0, 3.0, 1.0, 0.5}, spec);
    REQUIRE(t.quasidiff.size() == 3);
    CHECK(t.quasidiff_at(1) == doctest::Approx(-1.0));   // 1 * (3-4)
    CHECK(t.quasidiff_at(2) == doctest::Approx(-8.0));   // 4 * (1-3)
    CHECK(t.quasidiff_at(3) == doctest::Approx(-4.5));   // 9 * (0.5-1)
    CHECK(t.value_at(3) == 1.0);
    CHECK(t.startIndex == 1);
    CHECK(t.endIndex() == 4);
}

TEST_CASE("accessors reject indices outside the window") {
    EquationSpec spec{ConstantFamily{1.0}, ConstantFamily{1.0}, PhiMap{1.0}, 1, 1};
    Trajectory t = Trajectory::from_values(3, {2.0, 1.0, 0.5}, spec);
    CHECK_THROWS_AS(t.value_at(2), IndexError);
    CHECK_THROWS_AS(t.value_at(6), IndexError);
    CHECK_THROWS_AS(t.quasidiff_at(5), IndexError);  // last interior index is 4
    CHECK_NOTHROW(t.quasidiff_at(4));
}

TEST_CASE("construction rejects bad inputs") {
    EquationSpec spec{ConstantFamily{1.0}, ConstantFamily{1.0}, PhiMap{1.0}, 1, 1};
    CHECK_THROWS_AS(Trajectory::from_values(1, {1.0}, spec), ConfigurationError);
    CHECK_THROWS_AS(
        Trajectory::from_values(1, {1.0, std::numeric_limits<double>::quiet_NaN()}, spec),
        OverflowError);
}

TEST_CASE("nonlinear exponents enter the quasidifference") {
    EquationSpec spec{ConstantFamily{2.0}, ConstantFamily{1.0}, PhiMap{2.0}, 1, 1};
    Trajectory t = Trajectory::from_values(1, {1.0, 0.5, 0.25}, spec);
    CHECK(t.quasidiff_at(1) == doctest::Approx(-0.5));     // 2 * phi(-1/2) = -2/4
    CHECK(t.quasidiff_at(2) == doctest::Approx(-0.125));   // 2 * phi(-1/4)
}
