#include "halflin/series.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace halflin {

namespace {

struct Candidate {
    GrowthModel model;
    bool valid = false;
};

}  // namespace

std::string GrowthModel::description() const {
    std::ostringstream out;
    switch (kind) {
        case GrowthKind::BoundedCauchy:
            out << "bounded, settled near " << parameter;
            break;
        case GrowthKind::Logarithmic:
            out << "logarithmic, slope " << parameter << " per ln n";
            break;
        case GrowthKind::Power:
            out << "power, exponent " << parameter;
            break;
        case GrowthKind::Geometric:
            out << "geometric, term ratio " << parameter;
            break;
    }
    out << " (fit residual " << residual << ")";
    return out.str();
}

const char* to_string(SeriesDecision decision) {
    switch (decision) {
        case SeriesDecision::ConvergesLikely: return "ConvergesLikely";
        case SeriesDecision::DivergesLikely: return "DivergesLikely";
        default: return "Inconclusive";
    }
}

const char* to_string(GrowthKind kind) {
    switch (kind) {
        case GrowthKind::BoundedCauchy: return "bounded-Cauchy";
        case GrowthKind::Logarithmic: return "logarithmic";
        case GrowthKind::Power: return "power";
        default: return "geometric";
    }
}

SeriesVerdict fit_partial_sums(std::vector<Index> indices, std::vector<double> sums,
                               double residualGate) {
    if (indices.size() != sums.size() || indices.size() < 3) {
        throw ConfigurationError("growth fit needs at least three recorded partial sums");
    }

    SeriesVerdict out;
    out.indices = std::move(indices);
    out.partialSums = std::move(sums);

    const Index N = out.indices.back();
    const double S3 = out.partialSums.back();

    // dyadic anchors: the recorded checkpoints nearest N/4 and N/2
    auto nearest = [&](Index target) {
        std::size_t best = 0;
        Index bestDist = std::numeric_limits<Index>::max();
        for (std::size_t i = 0; i + 1 < out.indices.size(); ++i) {
            Index d = std::llabs(out.indices[i] - target);
            if (d < bestDist) {
                bestDist = d;
                best = i;
            }
        }
        return best;
    };
    const std::size_t i1 = nearest(N / 4);
    const std::size_t i2 = nearest(N / 2);
    const Index n1 = out.indices[i1];
    const Index n2 = out.indices[i2];
    const double S1 = out.partialSums[i1];
    const double S2 = out.partialSums[i2];

    if (!(n1 < n2 && n2 < N)) {
        out.verdict = SeriesDecision::Inconclusive;
        out.model = GrowthModel{GrowthKind::BoundedCauchy, S3, 1.0};
        return out;
    }

    const double D1 = S2 - S1;
    const double D2 = S3 - S2;
    const double spread = S3 - S1;

    // already numerically settled: Cauchy blocks below noise level
    if (std::fabs(spread) <= 1e-6 * std::max(1.0, std::fabs(S3))) {
        out.model = GrowthModel{GrowthKind::BoundedCauchy, S3,
                                std::fabs(spread) / std::max(1.0, std::fabs(S3))};
        out.verdict = SeriesDecision::ConvergesLikely;
        return out;
    }

    // residual of a predictor over the last two dyadic blocks [n1, N]
    auto residual_of = [&](const std::function<double(Index)>& predict) {
        double worst = 0.0;
        for (std::size_t j = 0; j < out.indices.size(); ++j) {
            if (out.indices[j] < n1) continue;
            double p = predict(out.indices[j]);
            if (!std::isfinite(p)) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, std::fabs(p - out.partialSums[j]) / std::fabs(spread));
        }
        return worst;
    };

    std::vector<Candidate> candidates;

    {  // flat: S(n) = S3
        Candidate c;
        c.model.kind = GrowthKind::BoundedCauchy;
        c.model.parameter = S3;
        c.model.residual = residual_of([&](Index) { return S3; });
        c.valid = true;
        candidates.push_back(c);
    }

    if (D2 != 0.0) {  // logarithmic: S(n) = S3 + B ln(n / N)
        const double B = D2 / std::log(static_cast<double>(N) / static_cast<double>(n2));
        Candidate c;
        c.model.kind = GrowthKind::Logarithmic;
        c.model.parameter = B;
        c.model.residual = residual_of([&](Index n) {
            return S3 + B * std::log(static_cast<double>(n) / static_cast<double>(N));
        });
        c.valid = true;
        candidates.push_back(c);
    }

    if (D1 > 0.0 && D2 > 0.0) {  // power: S(n) = S3 + C (n^q - N^q)
        double q = std::log2(D2 / D1);
        q = std::clamp(q, -50.0, 50.0);
        if (std::fabs(q) >= 1e-12) {
            const double Nq = std::pow(static_cast<double>(N), q);
            const double n2q = std::pow(static_cast<double>(n2), q);
            if (std::isfinite(Nq) && std::isfinite(n2q) && Nq != n2q) {
                const double C = D2 / (Nq - n2q);
                Candidate c;
                c.model.kind = GrowthKind::Power;
                c.model.parameter = q;
                c.model.residual = residual_of([&](Index n) {
                    return S3 + C * (std::pow(static_cast<double>(n), q) - Nq);
                });
                c.valid = true;
                candidates.push_back(c);
            }
        }
    }

    if (D1 > 0.0 && D2 > 0.0 && N - n2 > 0) {  // geometric: terms ~ K r^k
        // with dyadic blocks, D2/D1 = u(u+1) where u = r^(n2-n1)
        const double rho = D2 / D1;
        const double u = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * rho));
        if (u > 0.0 && std::fabs(u - 1.0) > 1e-9) {
            const double lnr = std::log(u) / static_cast<double>(n2 - n1);
            // S(n) = S3 - D2 * (R(n+1) - R(N+1)) / (R(n2+1) - R(N+1)),
            // R(m) = exp((m - n2) lnr), kept anchored to avoid overflow
            auto R = [&](Index m) { return std::exp(static_cast<double>(m - n2) * lnr); };
            const double den = R(n2 + 1) - R(N + 1);
            if (den != 0.0 && std::isfinite(den)) {
                Candidate c;
                c.model.kind = GrowthKind::Geometric;
                c.model.parameter = std::exp(lnr);
                c.model.residual = residual_of(
                    [&](Index n) { return S3 - D2 * (R(n + 1) - R(N + 1)) / den; });
                c.valid = true;
                candidates.push_back(c);
            }
        }
    }

    // pick the best-fitting model
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i].model.residual < candidates[best].model.residual) best = i;
    }
    GrowthModel model = candidates[best].model;

    // a power exponent indistinguishable from zero is logarithmic growth
    if (model.kind == GrowthKind::Power && std::fabs(model.parameter) < 0.05) {
        model.kind = GrowthKind::Logarithmic;
        model.parameter = D2 / std::log(static_cast<double>(N) / static_cast<double>(n2));
    }

    out.model = model;
    if (!(model.residual <= residualGate)) {
        out.verdict = SeriesDecision::Inconclusive;
        return out;
    }

    switch (model.kind) {
        case GrowthKind::BoundedCauchy:
            out.verdict = SeriesDecision::ConvergesLikely;
            break;
        case GrowthKind::Logarithmic:
            out.verdict = model.parameter > 0.0 ? SeriesDecision::DivergesLikely
                                                : SeriesDecision::ConvergesLikely;
            break;
        case GrowthKind::Power:
            if (model.parameter >= 0.05) out.verdict = SeriesDecision::DivergesLikely;
            else if (model.parameter <= -0.05) out.verdict = SeriesDecision::ConvergesLikely;
            else out.verdict = SeriesDecision::Inconclusive;
            break;
        case GrowthKind::Geometric:
            out.verdict = model.parameter > 1.0 ? SeriesDecision::DivergesLikely
                                                : SeriesDecision::ConvergesLikely;
            break;
    }
    return out;
}

SeriesVerdict accumulate_and_fit(Index from, Index to, const std::function<double(Index)>& term,
                                 double residualGate) {
    if (to < from + 4) {
        throw ConfigurationError("series accumulation needs at least five terms");
    }

    // checkpoints: dyadic anchors near to/4 and to/2 plus ~64 log-spaced points
    std::set<Index> marks;
    Index a1 = std::max(from + 2, to / 4);
    Index a2 = std::max(a1 + 1, to / 2);
    if (to - a2 < 2 || a2 - a1 < 2) {  // tiny range: range-relative anchors
        a1 = from + (to - from) / 4;
        a2 = from + (to - from) / 2;
    }
    marks.insert(a1);
    marks.insert(a2);
    marks.insert(to);
    const double lf = std::log(static_cast<double>(std::max<Index>(from, 1)));
    const double lt = std::log(static_cast<double>(to));
    for (int i = 0; i <= 64; ++i) {
        Index n = static_cast<Index>(std::llround(std::exp(lf + (lt - lf) * i / 64.0)));
        n = std::clamp(n, from, to);
        marks.insert(n);
    }

    std::vector<Index> indices;
    std::vector<double> sums;
    indices.reserve(marks.size());
    sums.reserve(marks.size());

    double acc = 0.0;
    auto mark = marks.begin();
    for (Index n = from; n <= to; ++n) {
        double t = term(n);
        if (!std::isfinite(t)) {
            throw OverflowError("series term is not finite at index " + std::to_string(n));
        }
        acc += t;
        if (!std::isfinite(acc)) {
            throw OverflowError("partial sum overflowed at index " + std::to_string(n));
        }
        while (mark != marks.end() && *mark == n) {
            indices.push_back(n);
            sums.push_back(acc);
            ++mark;
        }
    }

    return fit_partial_sums(std::move(indices), std::move(sums), residualGate);
}

}  // namespace halflin
