#include <doctest.h>

#include <cmath>

#include "helpers.hpp"

using namespace halflin;
using testutil::factorial_spec;
using testutil::factorial_trajectory;

TEST_CASE("explicit march reproduces a hand-computed window (advance 1)") {
    // a = b = 1, alpha = 1: q_1 = x_2 - x_1 = -1/2; q_2 = q_1 - x_2 = -1;
    // x_3 = x_2 + q_2 = -1/2.
    EquationSpec spec{ConstantFamily{1.0}, ConstantFamily{1.0}, PhiMap{1.0}, 1, 1};
    InitialData init{1, {1.0, 0.5}, false};
    Trajectory t = simulate(spec, init, 3);
    REQUIRE(t.size() == 3);
    CHECK(t.value_at(3) == doctest::Approx(-0.5));

    // same march seeded by the quasidifference pair (x_1, q_1)
    InitialData qinit{1, {1.0, -0.5}, true};
    Trajectory t2 = simulate(spec, qinit, 3);
    CHECK(t2.value_at(2) == doctest::Approx(0.5));
    CHECK(t2.value_at(3) == doctest::Approx(-0.5));
}

TEST_CASE("single-step solve reproduces a hand-computed window (advance 2)") {
    // a = b = 1, alpha = 1, x_1 = 1, x_2 = 1/2:
    //   n=1: (x_3 - 1/2) + x_3 = (1/2 - 1)  =>  x_3 = 0
    //   n=2: (x_4 - 0) + x_4 = (0 - 1/2)    =>  x_4 = -1/4
    EquationSpec spec{ConstantFamily{1.0}, ConstantFamily{1.0}, PhiMap{1.0}, 2, 1};
    InitialData init{1, {1.0, 0.5}, false};
    Trajectory t = simulate(spec, init, 4);
    CHECK(t.value_at(3) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(std::fabs(t.value_at(3)) < 1e-10);
    CHECK(t.value_at(4) == doctest::Approx(-0.25));
}

TEST_CASE("explicit advanced solve reproduces a hand-computed window (advance 3)") {
    // a = b = 1, alpha = 1, seed (1, 1/2, 1/4):
    //   q_1 = -1/2, q_2 = -1/4, so x_4 = q_1 - q_2 = -1/4.
    EquationSpec spec{ConstantFamily{1.0}, ConstantFamily{1.0}, PhiMap{1.0}, 3, 1};
    InitialData init{1, {1.0, 0.5, 0.25}, false};
    Trajectory t = simulate(spec, init, 6);
    CHECK(t.value_at(4) == doctest::Approx(-0.25));
}

TEST_CASE("factorial equation follows 1/n! with tiny scaled residuals") {
    Trajectory t = factorial_trajectory(44);
    REQUIRE(t.endIndex() == 44);

    double fact = 1.0;
    for (Index n = 1; n <= 14; ++n) {
        fact *= static_cast<double>(n);
        const double expected = 1.0 / fact;
        CHECK(t.value_at(n) == doctest::Approx(expected).epsilon(1e-9));
    }
    for (Index n = 1; n <= 14; ++n) {
        CHECK(t.quasidiff_at(n) ==
              doctest::Approx(-static_cast<double>(n)).epsilon(1e-9));
    }

    auto scaled = residual_scaled(factorial_spec(), t);
    for (double r : scaled) CHECK(std::fabs(r) <= 1e-12);
}

TEST_CASE("residuals vanish on solutions and flag non-solutions") {
    EquationSpec spec{ConstantFamily{1.0}, ConstantFamily{1.0}, PhiMap{1.0}, 1, 1};
    InitialData init{1, {1.0, 0.5}, false};
    Trajectory t = simulate(spec, init, 30);
    for (double r : residual(spec, t)) CHECK(std::fabs(r) <= 1e-12);

    Trajectory bogus = Trajectory::from_values(1, {1.0, 0.9, 0.8, 0.7}, spec);
    auto rs = residual(spec, bogus);
    REQUIRE(!rs.empty());
    CHECK(std::fabs(rs.front()) > 0.1);  // 0.9-0.8 - (0.9-1.0)... plus load 0.8
}

TEST_CASE("initial data validation") {
    EquationSpec spec{ConstantFamily{1.0}, ConstantFamily{1.0}, PhiMap{1.0}, 2, 1};
    // advance-2 regime needs exactly two consecutive values
    CHECK_THROWS_AS(simulate(spec, InitialData{1, {1.0}, false}, 10), ConfigurationError);
    CHECK_THROWS_AS(simulate(spec, InitialData{1, {1.0, 0.5, 0.2}, false}, 10),
                    ConfigurationError);
    // start index must match the spec
    CHECK_THROWS_AS(simulate(spec, InitialData{2, {1.0, 0.5}, false}, 10),
                    ConfigurationError);
    // horizon must leave room to march
    CHECK_THROWS_AS(simulate(spec, InitialData{1, {1.0, 0.5}, false}, 2),
                    ConfigurationError);
    // entries must be finite
    CHECK_THROWS_AS(
        simulate(spec, InitialData{1, {1.0, std::numeric_limits<double>::infinity()}, false},
                 10),
        ConfigurationError);
}

TEST_CASE("residual alignment helpers") {
    EquationSpec spec = factorial_spec();
    Trajectory t = factorial_trajectory(20);
    CHECK(residual_start(t) == 1);
    CHECK(residual_count(spec, t) == t.size() - 2);  // needs n+2 and n+p = n+2
}
