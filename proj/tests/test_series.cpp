#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <utility>

#include "halflin/series.hpp"

using namespace halflin;

namespace {

// record sums of a closed-form S(n) at log-spaced checkpoints including the
// dyadic anchors N/4, N/2, N
std::pair<std::vector<Index>, std::vector<double>> sample(Index N,
                                                          double (*S)(double)) {
    std::vector<Index> idx;
    std::vector<double> sums;
    for (int i = 0; i <= 40; ++i) {
        Index n = static_cast<Index>(
            std::llround(std::exp(std::log(10.0) +
                                  (std::log(static_cast<double>(N)) - std::log(10.0)) * i / 40.0)));
        if (!idx.empty() && idx.back() >= n) continue;
        idx.push_back(n);
        sums.push_back(S(static_cast<double>(n)));
    }
    for (Index anchor : {N / 4, N / 2, N}) {
        if (std::find(idx.begin(), idx.end(), anchor) == idx.end()) {
            auto pos = std::lower_bound(idx.begin(), idx.end(), anchor);
            sums.insert(sums.begin() + (pos - idx.begin()), S(static_cast<double>(anchor)));
            idx.insert(pos, anchor);
        }
    }
    return {idx, sums};
}

}  // namespace

TEST_CASE("logarithmic growth is detected with its slope") {
    auto [idx, sums] = sample(100000, +[](double n) { return 3.0 + 0.5 * std::log(n); });
    SeriesVerdict v = fit_partial_sums(idx, sums, 0.05);
    CHECK(v.verdict == SeriesDecision::DivergesLikely);
    CHECK(v.model.kind == GrowthKind::Logarithmic);
    CHECK(v.model.parameter == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("power decay toward a limit is convergent") {
    auto [idx, sums] = sample(10000, +[](double n) { return 2.0 - 1.0 / n; });
    SeriesVerdict v = fit_partial_sums(idx, sums, 0.05);
    CHECK(v.verdict == SeriesDecision::ConvergesLikely);
    CHECK(v.model.kind == GrowthKind::Power);
    CHECK(v.model.parameter == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("power growth is divergent with its exponent") {
    auto [idx, sums] = sample(100000, +[](double n) { return std::sqrt(n); });
    SeriesVerdict v = fit_partial_sums(idx, sums, 0.05);
    CHECK(v.verdict == SeriesDecision::DivergesLikely);
    CHECK(v.model.kind == GrowthKind::Power);
    CHECK(v.model.parameter == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("settled sums short-circuit as bounded") {
    auto [idx, sums] = sample(10000, +[](double n) { return 1.0 - std::exp2(-n); });
    SeriesVerdict v = fit_partial_sums(idx, sums, 0.05);
    CHECK(v.verdict == SeriesDecision::ConvergesLikely);
    CHECK(v.model.kind == GrowthKind::BoundedCauchy);
    CHECK(v.model.parameter == doctest::Approx(1.0));
}

TEST_CASE("erratic sums stay inconclusive") {
    // a staircase: long flat plateaus broken by widely spaced jumps; no
    // smooth growth model tracks it within the fit gate
    std::vector<Index> idx;
    std::vector<double> sums;
    double s = 0.0;
    for (Index n = 1; n <= 64; ++n) {
        if (n > 1 && n % 16 == 1) s += 100.0;
        idx.push_back(n);
        sums.push_back(s);
    }
    SeriesVerdict v = fit_partial_sums(idx, sums, 0.05);
    CHECK(v.verdict == SeriesDecision::Inconclusive);
}

TEST_CASE("accumulation driver classifies familiar series") {
    // harmonic: diverges logarithmically with unit slope
    SeriesVerdict h = accumulate_and_fit(1, 200000,
                                         [](Index n) { return 1.0 / static_cast<double>(n); });
    CHECK(h.verdict == SeriesDecision::DivergesLikely);
    CHECK(h.model.kind == GrowthKind::Logarithmic);
    CHECK(h.model.parameter == doctest::Approx(1.0).epsilon(0.02));

    // squares reciprocal: converges
    SeriesVerdict sq = accumulate_and_fit(1, 100000, [](Index n) {
        return 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    });
    CHECK(sq.verdict == SeriesDecision::ConvergesLikely);

    // geometric growth: diverges with ratio near 1.05
    SeriesVerdict g = accumulate_and_fit(1, 400, [](Index n) {
        return std::pow(1.05, static_cast<double>(n));
    });
    CHECK(g.verdict == SeriesDecision::DivergesLikely);
    CHECK(g.model.kind == GrowthKind::Geometric);
    CHECK(g.model.parameter == doctest::Approx(1.05).epsilon(0.01));

    // geometric decay: converges
    SeriesVerdict gd = accumulate_and_fit(1, 200, [](Index n) {
        return std::pow(0.98, static_cast<double>(n));
    });
    CHECK(gd.verdict == SeriesDecision::ConvergesLikely);
}

TEST_CASE("recorded checkpoints are ordered and end at the horizon") {
    SeriesVerdict v = accumulate_and_fit(1, 5000, [](Index) { return 1e-9; });
    REQUIRE(!v.indices.empty());
    CHECK(v.indices.back() == 5000);
    for (std::size_t i = 1; i < v.indices.size(); ++i) {
        CHECK(v.indices[i] > v.indices[i - 1]);
        CHECK(v.partialSums[i] >= v.partialSums[i - 1]);
    }
}

TEST_CASE("driver input validation") {
    CHECK_THROWS_AS(accumulate_and_fit(10, 12, [](Index) { return 1.0; }),
                    ConfigurationError);
    CHECK_THROWS_AS(accumulate_and_fit(1, 100,
                                       [](Index n) {
                                           return n == 50
                                                      ? std::numeric_limits<double>::infinity()
                                                      : 1.0;
                                       }),
                    OverflowError);
    CHECK_THROWS_AS(fit_partial_sums({1, 2}, {1.0, 2.0}, 0.05), ConfigurationError);
}
