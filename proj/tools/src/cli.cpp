#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"

#include "halflin/halflin.hpp"

namespace halflin::cli {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// config access helpers: every failure names the full dotted key path
// ---------------------------------------------------------------------------

[[noreturn]] void fail(const std::string& message) { throw ConfigurationError(message); }

std::string joined(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) fail("unrecognized key '" + joined(path, it.key()) + "'");
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail("missing required key '" + joined(path, key) + "'");
    return *it;
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail("'" + path + "' must be a number");
    return v.get<double>();
}

Index as_index(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail("'" + path + "' must be an integer");
    return v.get<Index>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) fail("'" + path + "' must be a boolean");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail("'" + path + "' must be a string");
    return v.get<std::string>();
}

const json& as_object(const json& v, const std::string& path) {
    if (!v.is_object()) fail("'" + path + "' must be an object");
    return v;
}

std::vector<double> as_number_array(const json& v, const std::string& path) {
    if (!v.is_array()) fail("'" + path + "' must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& e : v) out.push_back(as_number(e, path));
    return out;
}

double number_or(const json& obj, const std::string& path, const char* key, double dflt) {
    const json* v = find(obj, key);
    return v ? as_number(*v, joined(path, key)) : dflt;
}

Index index_or(const json& obj, const std::string& path, const char* key, Index dflt) {
    const json* v = find(obj, key);
    return v ? as_index(*v, joined(path, key)) : dflt;
}

bool bool_or(const json& obj, const std::string& path, const char* key, bool dflt) {
    const json* v = find(obj, key);
    return v ? as_bool(*v, joined(path, key)) : dflt;
}

json load_json_file(const std::string& filePath, const char* what) {
    std::ifstream in(filePath);
    if (!in) fail(std::string(what) + " '" + filePath + "' cannot be opened");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(std::string(what) + " '" + filePath + "' is not valid JSON: " + e.what());
    }
}

// ---------------------------------------------------------------------------
// trajectory ingestion (--seed-from and table fromFile)
// ---------------------------------------------------------------------------

struct SeedData {
    Index startIndex = 1;
    std::vector<double> values;
};

SeedData load_seed(const std::string& filePath) {
    json j = load_json_file(filePath, "seed file");
    const json* t = nullptr;
    if (const json* results = find(j, "results")) {
        if (const json* traj = find(*results, "trajectory")) t = traj;
        else if (const json* sol = find(*results, "solution")) t = sol;
    }
    if (!t && find(j, "trajectory")) t = find(j, "trajectory");
    if (!t && find(j, "values")) t = &j;
    if (!t) {
        fail("seed file '" + filePath +
             "' carries no trajectory (expected results.trajectory, results.solution, "
             "trajectory, or top-level values)");
    }
    SeedData seed;
    const std::string path = filePath + ":trajectory";
    seed.startIndex = index_or(*t, path, "startIndex", 1);
    seed.values = as_number_array(require(*t, path, "values"), joined(path, "values"));
    return seed;
}

// ---------------------------------------------------------------------------
// coefficient family and equation parsing
// ---------------------------------------------------------------------------

CoefficientSequence parse_family(const json& j, const std::string& path) {
    as_object(j, path);
    std::string fam = as_string(require(j, path, "family"), joined(path, "family"));
    CoefficientSequence seq;
    if (fam == "constant") {
        check_keys(j, path, {"family", "value"});
        seq = ConstantFamily{as_number(require(j, path, "value"), joined(path, "value"))};
    } else if (fam == "power") {
        check_keys(j, path, {"family", "coef", "shift", "exponent"});
        seq = PowerShiftFamily{
            number_or(j, path, "coef", 1.0),
            index_or(j, path, "shift", 0),
            as_number(require(j, path, "exponent"), joined(path, "exponent"))};
    } else if (fam == "factorial") {
        check_keys(j, path, {"family", "shift"});
        seq = FactorialShiftFamily{index_or(j, path, "shift", 0)};
    } else if (fam == "table") {
        check_keys(j, path, {"family", "startIndex", "values", "fromFile"});
        const json* values = find(j, "values");
        const json* fromFile = find(j, "fromFile");
        if (values && fromFile) {
            fail("'" + path + "' must give either values or fromFile, not both");
        }
        if (fromFile) {
            SeedData seed = load_seed(as_string(*fromFile, joined(path, "fromFile")));
            Index start = index_or(j, path, "startIndex", seed.startIndex);
            seq = TableFamily{start, std::move(seed.values)};
        } else if (values) {
            seq = TableFamily{index_or(j, path, "startIndex", 1),
                              as_number_array(*values, joined(path, "values"))};
        } else {
            fail("missing required key '" + joined(path, "values") + "'");
        }
    } else if (fam == "geometric") {
        // sugar for an explicit table: first, first*ratio, first*ratio^2, ...
        check_keys(j, path, {"family", "first", "ratio", "length", "startIndex"});
        double first = as_number(require(j, path, "first"), joined(path, "first"));
        double ratio = as_number(require(j, path, "ratio"), joined(path, "ratio"));
        Index length = as_index(require(j, path, "length"), joined(path, "length"));
        if (length < 1) fail("'" + joined(path, "length") + "' must be at least 1");
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(length));
        double v = first;
        for (Index k = 0; k < length; ++k) {
            values.push_back(v);
            v *= ratio;
        }
        seq = TableFamily{index_or(j, path, "startIndex", 1), std::move(values)};
    } else {
        fail("'" + joined(path, "family") +
             "' must be one of constant|power|factorial|table|geometric");
    }
    validate_family(seq, path);
    return seq;
}

EquationSpec parse_equation(const json& cfg) {
    const json& eq = as_object(require(cfg, "", "equation"), "equation");
    check_keys(eq, "equation", {"a", "b", "alpha", "p", "startIndex"});
    CoefficientSequence a = parse_family(require(eq, "equation", "a"), "equation.a");
    CoefficientSequence b = parse_family(require(eq, "equation", "b"), "equation.b");
    double alpha = number_or(eq, "equation", "alpha", 1.0);
    EquationSpec spec{std::move(a), std::move(b), PhiMap{alpha},
                      index_or(eq, "equation", "p", 1),
                      index_or(eq, "equation", "startIndex", 1)};
    validate_spec(spec);
    return spec;
}

InitialData parse_initial(const json& block, const std::string& path, const EquationSpec& spec) {
    const json& ini = as_object(require(block, path, "initial"), joined(path, "initial"));
    const std::string ipath = joined(path, "initial");
    check_keys(ini, ipath, {"startIndex", "values", "quasidiffSeed"});
    InitialData init;
    init.startIndex = index_or(ini, ipath, "startIndex", spec.startIndex);
    init.segment = as_number_array(require(ini, ipath, "values"), joined(ipath, "values"));
    init.quasidiffSeed = bool_or(ini, ipath, "quasidiffSeed", false);
    return init;
}

// ---------------------------------------------------------------------------
// output rendering
// ---------------------------------------------------------------------------

struct OutputSpec {
    std::string format = "csv";  // csv | json
    std::string path = "-";      // "-" = stdout
    int precision = 17;          // CSV significant digits
};

OutputSpec parse_output(const json& cfg) {
    OutputSpec out;
    const json* blk = find(cfg, "output");
    if (!blk) return out;
    as_object(*blk, "output");
    check_keys(*blk, "output", {"format", "path", "precision"});
    if (const json* f = find(*blk, "format")) out.format = as_string(*f, "output.format");
    if (const json* p = find(*blk, "path")) out.path = as_string(*p, "output.path");
    Index prec = index_or(*blk, "output", "precision", 17);
    if (prec < 1 || prec > 17) fail("'output.precision' must be between 1 and 17");
    out.precision = static_cast<int>(prec);
    if (out.format != "csv" && out.format != "json") {
        fail("'output.format' must be csv or json");
    }
    return out;
}

std::string fmt_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

/// A command's tabular rendering: one header row, then data rows. Cells are
/// already formatted strings; empty cells stay empty.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    static void emit_cell(std::ostringstream& os, const std::string& cell) {
        if (cell.find_first_of(",\"\n") == std::string::npos) {
            os << cell;
            return;
        }
        os << '"';
        for (char c : cell) {
            if (c == '"') os << '"';
            os << c;
        }
        os << '"';
    }

    std::string render() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) os << ',';
            emit_cell(os, header[i]);
        }
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) os << ',';
                emit_cell(os, row[i]);
            }
            os << '\n';
        }
        return os.str();
    }
};

json trajectory_json(const Trajectory& t) {
    return json{{"startIndex", t.startIndex}, {"values", t.values}, {"quasidiff", t.quasidiff}};
}

json classification_json(const ClassificationReport& r) {
    json j{{"verdict", to_string(r.verdict)},
           {"tailValue", r.tailValue},
           {"tailQuasidiff", r.tailQuasidiff},
           {"quasidiffSlope", r.quasidiffSlope},
           {"trend", r.trend},
           {"epsX", r.epsX},
           {"qMin", r.qMin},
           {"burnIn", r.burnIn}};
    j["lastSignChange"] = r.lastSignChange ? json(*r.lastSignChange) : json(nullptr);
    return j;
}

json series_json(const SeriesVerdict& s) {
    return json{{"indices", s.indices},
                {"partialSums", s.partialSums},
                {"verdict", to_string(s.verdict)},
                {"model",
                 json{{"kind", to_string(s.model.kind)},
                      {"parameter", s.model.parameter},
                      {"residual", s.model.residual}}}};
}

// ---------------------------------------------------------------------------
// command implementations
// ---------------------------------------------------------------------------

struct CommandContext {
    EquationSpec spec;
    std::optional<SeedData> seed;  // --seed-from payload, when given
    int precision = 17;
    std::ostream* notes = nullptr;  // informational notes (nullptr when --quiet)
};

struct CommandResult {
    json results;
    CsvTable csv;
    int exitCode = 0;
};

CommandResult cmd_simulate(const json& cfg, const CommandContext& ctx) {
    const json& blk = as_object(require(cfg, "", "simulate"), "simulate");
    check_keys(blk, "simulate", {"horizon", "initial"});
    Index horizon = as_index(require(blk, "simulate", "horizon"), "simulate.horizon");
    InitialData init = parse_initial(blk, "simulate", ctx.spec);

    Trajectory traj = simulate(ctx.spec, init, horizon);
    std::vector<double> res = residual(ctx.spec, traj);
    Index resStart = residual_start(traj);

    CommandResult out;
    out.results = json{{"trajectory", trajectory_json(traj)},
                       {"residual", res},
                       {"residualStart", resStart}};

    out.csv.header = {"n", "x", "quasidiff", "residual"};
    for (std::size_t i = 0; i < traj.values.size(); ++i) {
        Index n = traj.startIndex + static_cast<Index>(i);
        std::vector<std::string> row(4);
        row[0] = std::to_string(n);
        row[1] = fmt_double(traj.values[i], ctx.precision);
        if (i < traj.quasidiff.size()) row[2] = fmt_double(traj.quasidiff[i], ctx.precision);
        std::size_t k = static_cast<std::size_t>(n - resStart);
        if (n >= resStart && k < res.size()) row[3] = fmt_double(res[k], ctx.precision);
        out.csv.rows.push_back(std::move(row));
    }
    return out;
}

CommandResult cmd_classify(const json& cfg, const CommandContext& ctx) {
    const json* blk = find(cfg, "classify");
    if (blk) {
        as_object(*blk, "classify");
        check_keys(*blk, "classify", {"horizon", "initial", "epsX", "qMin", "burnIn"});
    }

    Trajectory traj;
    if (ctx.seed) {
        traj = Trajectory::from_values(ctx.seed->startIndex, ctx.seed->values, ctx.spec);
    } else {
        if (!blk) fail("command 'classify' needs a classify block or --seed-from");
        Index horizon = as_index(require(*blk, "classify", "horizon"), "classify.horizon");
        traj = simulate(ctx.spec, parse_initial(*blk, "classify", ctx.spec), horizon);
    }

    ClassifyOptions opts;
    if (blk) {
        if (const json* v = find(*blk, "epsX")) opts.epsX = as_number(*v, "classify.epsX");
        if (const json* v = find(*blk, "qMin")) opts.qMin = as_number(*v, "classify.qMin");
        if (const json* v = find(*blk, "burnIn")) opts.burnIn = as_index(*v, "classify.burnIn");
    }
    ClassificationReport rep = classify(traj, ctx.spec, opts);

    CommandResult out;
    out.results = classification_json(rep);
    out.results["window"] = json{{"startIndex", traj.startIndex},
                                 {"endIndex", traj.endIndex()},
                                 {"length", traj.size()}};

    out.csv.header = {"verdict",       "tailValue", "tailQuasidiff", "quasidiffSlope",
                      "lastSignChange", "epsX",      "qMin",          "burnIn",
                      "trend"};
    out.csv.rows.push_back(
        {to_string(rep.verdict), fmt_double(rep.tailValue, ctx.precision),
         fmt_double(rep.tailQuasidiff, ctx.precision),
         fmt_double(rep.quasidiffSlope, ctx.precision),
         rep.lastSignChange ? std::to_string(*rep.lastSignChange) : std::string(),
         fmt_double(rep.epsX, ctx.precision), fmt_double(rep.qMin, ctx.precision),
         std::to_string(rep.burnIn), rep.trend});
    return out;
}

bool has_factorial(const CoefficientSequence& seq) {
    return std::holds_alternative<FactorialShiftFamily>(seq);
}

/// Log-scale criterion diagnostics: both series' terms are assembled in log
/// scale (log-sum-exp for the inner sums), so factorial-weight equations stay
/// analyzable far past linear-scale overflow. The terms are then rebuilt as
/// exp(log term) - convergent contributions that underflow to zero are
/// harmless - and the partial sums run through the ordinary growth fit. A
/// term too large even for exp() marks its series divergent outright.
json log_scale_criteria(const EquationSpec& spec, Index N, bool shifted, double fitGate) {
    const double alpha = spec.alpha();
    CoefficientSequence weight = shifted ? shift_family(spec.a, spec.p - 1) : spec.a;
    Index n0 = spec.startIndex;
    if (N < n0 + 10) fail("'criteria.N' must be at least startIndex + 10");

    auto lse_add = [](double acc, double term) {
        if (acc == -std::numeric_limits<double>::infinity()) return term;
        double hi = std::max(acc, term), lo = std::min(acc, term);
        return hi + std::log1p(std::exp(lo - hi));
    };

    const std::size_t count = static_cast<std::size_t>(N - n0);  // indices n0 .. N-1

    // first series: log term_n = log b_n + alpha * log sum_{k>n} (1/weight_k)^(1/alpha),
    // inner tails accumulated in one backward pass
    std::vector<double> logFirst(count);
    {
        double logTail = -std::numeric_limits<double>::infinity();
        for (Index k = N; k >= n0 + 1; --k) {
            logTail = lse_add(logTail, -coeff_log_eval(weight, k) / alpha);
            // after adding index k the tail equals sum_{j > k-1}
            logFirst[static_cast<std::size_t>(k - 1 - n0)] =
                coeff_log_eval(spec.b, k - 1) + alpha * logTail;
        }
    }

    // second series: log term_n = (log sum_{k<=n} b_k - log weight_{n+1}) / alpha
    std::vector<double> logSecond(count);
    {
        double logSumB = -std::numeric_limits<double>::infinity();
        for (Index n = n0; n <= N - 1; ++n) {
            logSumB = lse_add(logSumB, coeff_log_eval(spec.b, n));
            logSecond[static_cast<std::size_t>(n - n0)] =
                (logSumB - coeff_log_eval(weight, n + 1)) / alpha;
        }
    }

    constexpr double kExpCap = 700.0;  // exp() overflows just past this
    auto fit_exp_terms = [&](const std::vector<double>& logTerms) {
        SeriesVerdict v = accumulate_and_fit(
            n0, N - 1,
            [&](Index n) {
                double lt = logTerms[static_cast<std::size_t>(n - n0)];
                return std::exp(std::min(lt, kExpCap));
            },
            fitGate);
        double maxLog = *std::max_element(logTerms.begin(), logTerms.end());
        if (maxLog > kExpCap) v.verdict = SeriesDecision::DivergesLikely;
        return v;
    };
    SeriesVerdict first = fit_exp_terms(logFirst);
    SeriesVerdict second = fit_exp_terms(logSecond);

    ExistenceVerdict combined = ExistenceVerdict::Inconclusive;
    if (first.verdict == SeriesDecision::ConvergesLikely &&
        second.verdict == SeriesDecision::ConvergesLikely) {
        combined = ExistenceVerdict::NoIntermediate;
    } else if (first.verdict == SeriesDecision::DivergesLikely ||
               second.verdict == SeriesDecision::DivergesLikely) {
        combined = ExistenceVerdict::IntermediateIfNonosc;
    }

    // keep a compact log-term table (about 24 log-spaced rows) for inspection
    json checkpoints = json::array(), ltFirst = json::array(), ltSecond = json::array();
    Index last = 0;
    for (int i = 0; i <= 24; ++i) {
        double t = static_cast<double>(i) / 24.0;
        Index n = n0 - 1 +
                  static_cast<Index>(std::llround(std::pow(static_cast<double>(N - n0), t)));
        n = std::clamp<Index>(n, n0, N - 1);
        if (i > 0 && n <= last) continue;
        last = n;
        checkpoints.push_back(n);
        ltFirst.push_back(logFirst[static_cast<std::size_t>(n - n0)]);
        ltSecond.push_back(logSecond[static_cast<std::size_t>(n - n0)]);
    }

    return json{{"logScale", true},
                {"checkpoints", checkpoints},
                {"logTermsFirst", ltFirst},
                {"logTermsSecond", ltSecond},
                {"first", series_json(first)},
                {"second", series_json(second)},
                {"combined", to_string(combined)},
                {"shifted", shifted}};
}

CommandResult cmd_criteria(const json& cfg, const CommandContext& ctx) {
    const json& blk = as_object(require(cfg, "", "criteria"), "criteria");
    check_keys(blk, "criteria", {"N", "shifted", "fitGate", "logScale"});
    Index N = as_index(require(blk, "criteria", "N"), "criteria.N");
    bool shifted = bool_or(blk, "criteria", "shifted", ctx.spec.p > 1);
    double fitGate = number_or(blk, "criteria", "fitGate", 0.05);
    bool logScale = bool_or(blk, "criteria", "logScale", false);
    if (fitGate <= 0.0) fail("'criteria.fitGate' must be positive");

    CommandResult out;
    if ((has_factorial(ctx.spec.a) || has_factorial(ctx.spec.b)) && N > 50 && !logScale) {
        throw OverflowError(
            "criterion terms for a factorial family leave useful double range past "
            "index 50 (requested N = " + std::to_string(N) +
            "); set criteria.logScale for log-scale diagnostics");
    }

    if (logScale) {
        out.results = log_scale_criteria(ctx.spec, N, shifted, fitGate);
        out.csv.header = {"n", "logTermFirst", "logTermSecond", "combined"};
        const auto& cps = out.results["checkpoints"];
        for (std::size_t i = 0; i < cps.size(); ++i) {
            out.csv.rows.push_back(
                {std::to_string(cps[i].get<Index>()),
                 fmt_double(out.results["logTermsFirst"][i].get<double>(), ctx.precision),
                 fmt_double(out.results["logTermsSecond"][i].get<double>(), ctx.precision),
                 out.results["combined"].get<std::string>()});
        }
        return out;
    }

    CriterionReport rep = criterion_series(ctx.spec, N, shifted);
    // re-fit with the configured gate when it differs from the default
    if (fitGate != 0.05) {
        rep.first = fit_partial_sums(rep.first.indices, rep.first.partialSums, fitGate);
        rep.second = fit_partial_sums(rep.second.indices, rep.second.partialSums, fitGate);
    }
    out.results = json{{"first", series_json(rep.first)},
                       {"second", series_json(rep.second)},
                       {"combined", to_string(rep.combined)},
                       {"shifted", rep.shifted},
                       {"warnings", rep.warnings}};

    out.csv.header = {"series", "N", "partialSum", "verdict", "model", "combined"};
    auto emit = [&](const char* name, const SeriesVerdict& s) {
        for (std::size_t i = 0; i < s.indices.size(); ++i) {
            out.csv.rows.push_back({name, std::to_string(s.indices[i]),
                                    fmt_double(s.partialSums[i], ctx.precision),
                                    to_string(s.verdict), to_string(s.model.kind),
                                    to_string(rep.combined)});
        }
    };
    emit("first", rep.first);
    emit("second", rep.second);
    return out;
}

CommandResult cmd_shoot(const json& cfg, const CommandContext& ctx) {
    const json& blk = as_object(require(cfg, "", "shoot"), "shoot");
    check_keys(blk, "shoot", {"horizon", "xStart", "maxBisections"});
    Index horizon = as_index(require(blk, "shoot", "horizon"), "shoot.horizon");
    double xStart = number_or(blk, "shoot", "xStart", 1.0);
    Index maxBis = index_or(blk, "shoot", "maxBisections", 80);

    EquationSpec target = ctx.spec;
    bool reduced = false;
    if (ctx.spec.p != 1) {
        target = halflinear_reduction(ctx.spec);
        reduced = true;
        if (ctx.notes) {
            *ctx.notes << "note: shooting on the half-linear reduction (weight "
                       << describe_family(target.a) << ")\n";
        }
    }
    ShootResult r = shoot_halflinear(target, xStart, horizon, static_cast<int>(maxBis));

    CommandResult out;
    json scan = json::array();
    for (const auto& [c, crossed] : r.scan) scan.push_back(json{{"c", c}, {"crossed", crossed}});
    out.results = json{{"outcome", to_string(r.outcome)},
                       {"criticalQuasidiff", r.criticalQuasidiff},
                       {"bracket", json::array({r.bracket.first, r.bracket.second})},
                       {"bisections", r.bisections},
                       {"reduced", reduced},
                       {"classification", classification_json(r.classification)},
                       {"scan", scan},
                       {"trajectory", trajectory_json(r.trajectory)}};

    out.csv.header = {"outcome",   "criticalQuasidiff", "bracketLow", "bracketHigh",
                      "bisections", "verdict",           "tailValue",  "tailQuasidiff"};
    out.csv.rows.push_back({to_string(r.outcome),
                            fmt_double(r.criticalQuasidiff, ctx.precision),
                            fmt_double(r.bracket.first, ctx.precision),
                            fmt_double(r.bracket.second, ctx.precision),
                            std::to_string(r.bisections),
                            to_string(r.classification.verdict),
                            fmt_double(r.classification.tailValue, ctx.precision),
                            fmt_double(r.classification.tailQuasidiff, ctx.precision)});
    return out;
}

CommandResult cmd_fixedpoint(const json& cfg, const CommandContext& ctx) {
    const json& blk = as_object(require(cfg, "", "fixedpoint"), "fixedpoint");
    check_keys(blk, "fixedpoint",
               {"direction", "window", "seed", "tol", "maxIter", "damping", "base"});

    std::string dirName =
        as_string(require(blk, "fixedpoint", "direction"), "fixedpoint.direction");
    OperatorDirection direction;
    if (dirName == "forward") direction = OperatorDirection::ForwardToHalfLinear;
    else if (dirName == "reverse") direction = OperatorDirection::ReverseToAdvanced;
    else fail("'fixedpoint.direction' must be forward or reverse");

    Index window = as_index(require(blk, "fixedpoint", "window"), "fixedpoint.window");

    IterateOptions opts;
    std::string seedName = "upper";
    if (const json* s = find(blk, "seed")) seedName = as_string(*s, "fixedpoint.seed");
    if (seedName == "upper") opts.seed = IterationSeed::Upper;
    else if (seedName == "lower") opts.seed = IterationSeed::Lower;
    else if (seedName == "midpoint") opts.seed = IterationSeed::Midpoint;
    else fail("'fixedpoint.seed' must be upper, lower, or midpoint");
    opts.tol = number_or(blk, "fixedpoint", "tol", 1e-6);
    opts.maxIter = static_cast<int>(index_or(blk, "fixedpoint", "maxIter", 200));
    opts.damping = number_or(blk, "fixedpoint", "damping", 0.5);

    // base trajectory: a known decaying solution. Forward direction needs a
    // solution of the advanced equation itself; reverse needs one of its
    // half-linear reduction (which base.shoot can construct).
    Trajectory base;
    if (ctx.seed) {
        EquationSpec baseSpec = direction == OperatorDirection::ForwardToHalfLinear
                                    ? ctx.spec
                                    : halflinear_reduction(ctx.spec);
        base = Trajectory::from_values(ctx.seed->startIndex, ctx.seed->values, baseSpec);
    } else if (const json* baseBlk = find(blk, "base")) {
        as_object(*baseBlk, "fixedpoint.base");
        check_keys(*baseBlk, "fixedpoint.base", {"shoot"});
        const json& sh =
            as_object(require(*baseBlk, "fixedpoint.base", "shoot"), "fixedpoint.base.shoot");
        check_keys(sh, "fixedpoint.base.shoot", {"horizon", "xStart", "maxBisections"});
        if (direction == OperatorDirection::ForwardToHalfLinear && ctx.spec.p != 1) {
            fail("'fixedpoint.base.shoot' constructs a solution of the reduced equation; "
                 "the forward direction with p > 1 needs --seed-from instead");
        }
        Index horizon =
            as_index(require(sh, "fixedpoint.base.shoot", "horizon"), "fixedpoint.base.shoot.horizon");
        double xStart = number_or(sh, "fixedpoint.base.shoot", "xStart", 1.0);
        Index maxBis = index_or(sh, "fixedpoint.base.shoot", "maxBisections", 80);
        ShootResult sr = shoot_halflinear(halflinear_reduction(ctx.spec), xStart, horizon,
                                          static_cast<int>(maxBis));
        if (sr.outcome != ShootOutcome::Found) {
            throw DivergenceError(std::string("base shoot did not find a decaying solution "
                                              "(outcome ") + to_string(sr.outcome) + ")");
        }
        base = std::move(sr.trajectory);
        if (ctx.notes) {
            *ctx.notes << "note: base from shoot, critical quasidifference "
                       << fmt_double(sr.criticalQuasidiff, 6) << ", window ["
                       << base.startIndex << ", " << base.endIndex() << "]\n";
        }
    } else {
        fail("command 'fixedpoint' needs a base trajectory: --seed-from PATH or a "
             "fixedpoint.base.shoot block");
    }

    Envelope env = build_envelope(direction, base, ctx.spec);
    FixedPointRun run = iterate_operator(env, opts, window);

    CommandResult out;
    out.results = json{
        {"converged", run.converged},
        {"iterations", run.iterations},
        {"residuals", run.residuals},
        {"envelopeViolations", run.envelopeViolations},
        {"tailBound", run.tailBound},
        {"truncationIndex", run.truncationIndex},
        {"equationResidualMax", run.equationResidualMax},
        {"equationResidualRel", run.equationResidualRel},
        {"classification", classification_json(run.classification)},
        {"fixedPoint", run.fixedPoint},
        {"solution", trajectory_json(run.solution)},
        {"envelope",
         json{{"direction", to_string(env.direction)},
              {"anchorIndex", env.anchorIndex},
              {"anchorQuasidiff", env.anchorQuasidiff},
              {"anchorWeightSum", env.anchorWeightSum},
              {"lowerScale", env.lowerScale},
              {"upperScale", env.upperScale},
              {"scaleApplied", env.scaleApplied}}},
        {"target",
         json{{"a", describe_family(run.targetSpec.a)},
              {"b", describe_family(run.targetSpec.b)},
              {"alpha", run.targetSpec.alpha()},
              {"p", run.targetSpec.p},
              {"startIndex", run.targetSpec.startIndex}}}};

    out.csv.header = {"converged",          "iterations", "finalResidual",
                      "tailBound",          "truncationIndex",
                      "equationResidualMax", "equationResidualRel", "verdict"};
    out.csv.rows.push_back(
        {run.converged ? "true" : "false", std::to_string(run.iterations),
         run.residuals.empty() ? std::string()
                               : fmt_double(run.residuals.back(), ctx.precision),
         fmt_double(run.tailBound, ctx.precision), std::to_string(run.truncationIndex),
         fmt_double(run.equationResidualMax, ctx.precision),
         fmt_double(run.equationResidualRel, ctx.precision),
         to_string(run.classification.verdict)});

    out.exitCode = run.converged ? 0 : 3;
    if (!run.converged && ctx.notes) {
        *ctx.notes << "note: iteration did not converge within " << opts.maxIter
                   << " iterations (last residual "
                   << (run.residuals.empty() ? std::string("n/a")
                                             : fmt_double(run.residuals.back(), 6))
                   << ")\n";
    }
    return out;
}

CommandResult cmd_sweep(const json& cfg, const CommandContext& ctx) {
    const json& blk = as_object(require(cfg, "", "sweep"), "sweep");
    check_keys(blk, "sweep",
               {"gammaGrid", "horizon", "criteriaN", "xStart", "shifted", "maxBisections"});
    std::vector<double> grid =
        as_number_array(require(blk, "sweep", "gammaGrid"), "sweep.gammaGrid");
    if (grid.empty()) fail("'sweep.gammaGrid' must not be empty");
    for (double g : grid) {
        if (!(g > 0.0) || !std::isfinite(g)) fail("'sweep.gammaGrid' entries must be positive");
    }
    Index horizon = as_index(require(blk, "sweep", "horizon"), "sweep.horizon");
    Index criteriaN = index_or(blk, "sweep", "criteriaN", horizon);
    double xStart = number_or(blk, "sweep", "xStart", 1.0);
    bool shifted = bool_or(blk, "sweep", "shifted", ctx.spec.p > 1);
    Index maxBis = index_or(blk, "sweep", "maxBisections", 80);

    if (!std::holds_alternative<PowerShiftFamily>(ctx.spec.a)) {
        fail("'sweep' needs a power-family weight 'equation.a' (Euler form); "
             "the constant coefficient b is replaced by each grid gamma");
    }
    double threshold = euler_threshold(ctx.spec.alpha());

    struct Row {
        double gamma = 0.0;
        bool belowThreshold = false;
        ShootOutcome outcome = ShootOutcome::BracketFailure;
        double criticalQuasidiff = 0.0;
        TrajectoryClass classVerdict = TrajectoryClass::Inconclusive;
        ExistenceVerdict criterionVerdict = ExistenceVerdict::Inconclusive;
    };

    auto worker = [&](double gamma) {
        EquationSpec s = ctx.spec;
        s.b = ConstantFamily{gamma};
        EquationSpec red = s.p == 1 ? s : halflinear_reduction(s);
        ShootResult sr = shoot_halflinear(red, xStart, horizon, static_cast<int>(maxBis));
        CriterionReport cr = criterion_series(s, criteriaN, shifted);
        Row row;
        row.gamma = gamma;
        row.belowThreshold = gamma <= threshold;
        row.outcome = sr.outcome;
        row.criticalQuasidiff = sr.criticalQuasidiff;
        row.classVerdict = sr.classification.verdict;
        row.criterionVerdict = cr.combined;
        return row;
    };

    // fan out one task per grid point; collecting in grid order keeps the
    // report deterministic regardless of completion order
    std::vector<std::future<Row>> futures;
    futures.reserve(grid.size());
    for (double gamma : grid) {
        futures.push_back(std::async(std::launch::async, worker, gamma));
    }

    CommandResult out;
    json rows = json::array();
    out.csv.header = {"gamma",   "threshold",        "belowThreshold", "shootOutcome",
                      "criticalQuasidiff", "classifyVerdict", "criterionVerdict"};
    for (auto& f : futures) {
        Row row = f.get();
        rows.push_back(json{{"gamma", row.gamma},
                            {"belowThreshold", row.belowThreshold},
                            {"shootOutcome", to_string(row.outcome)},
                            {"criticalQuasidiff", row.criticalQuasidiff},
                            {"classifyVerdict", to_string(row.classVerdict)},
                            {"criterionVerdict", to_string(row.criterionVerdict)}});
        out.csv.rows.push_back({fmt_double(row.gamma, ctx.precision),
                                fmt_double(threshold, ctx.precision),
                                row.belowThreshold ? "true" : "false",
                                to_string(row.outcome),
                                fmt_double(row.criticalQuasidiff, ctx.precision),
                                to_string(row.classVerdict),
                                to_string(row.criterionVerdict)});
    }
    out.results = json{{"threshold", threshold}, {"rows", rows}};
    return out;
}

// ---------------------------------------------------------------------------
// driver
// ---------------------------------------------------------------------------

const std::initializer_list<const char*> kCommands = {"simulate", "classify", "criteria",
                                                      "shoot",    "fixedpoint", "sweep"};

int run_config(const json& cfg, const std::string& seedFromPath,
               const std::string& formatOverride, const std::string& outputOverride,
               bool quiet, std::ostream& out, std::ostream& err) {
    as_object(cfg, "config");
    if (const json* schema = find(cfg, "schema")) {
        std::string s = as_string(*schema, "schema");
        if (s != "halflin-config/1") {
            fail("'schema' must be \"halflin-config/1\" (got \"" + s + "\")");
        }
    }
    std::string command = as_string(require(cfg, "", "command"), "command");
    bool known = false;
    for (const char* c : kCommands) known = known || command == c;
    if (!known) {
        fail("'command' must be one of simulate|classify|criteria|shoot|fixedpoint|sweep "
             "(got \"" + command + "\")");
    }
    // only the active command's block is admissible next to the shared keys
    check_keys(cfg, "", {"schema", "command", "equation", "output", command.c_str()});

    OutputSpec output = parse_output(cfg);
    if (!formatOverride.empty()) {
        if (formatOverride != "csv" && formatOverride != "json") {
            fail("--format must be csv or json");
        }
        output.format = formatOverride;
    }
    if (!outputOverride.empty()) output.path = outputOverride;

    CommandContext ctx{parse_equation(cfg), std::nullopt, output.precision,
                       quiet ? nullptr : &err};
    if (!seedFromPath.empty()) ctx.seed = load_seed(seedFromPath);

    CommandResult result;
    if (command == "simulate") result = cmd_simulate(cfg, ctx);
    else if (command == "classify") result = cmd_classify(cfg, ctx);
    else if (command == "criteria") result = cmd_criteria(cfg, ctx);
    else if (command == "shoot") result = cmd_shoot(cfg, ctx);
    else if (command == "fixedpoint") result = cmd_fixedpoint(cfg, ctx);
    else result = cmd_sweep(cfg, ctx);

    std::string payload;
    if (output.format == "json") {
        json envelope{{"schema", "halflin-output/1"},
                      {"command", command},
                      {"inputs", cfg},
                      {"results", result.results}};
        if (!seedFromPath.empty()) envelope["inputs"]["seedFrom"] = seedFromPath;
        payload = envelope.dump(2);
        payload.push_back('\n');
    } else {
        payload = result.csv.render();
    }

    if (output.path == "-") {
        out << payload;
    } else {
        std::ofstream file(output.path);
        if (!file) fail("cannot open output file '" + output.path + "'");
        file << payload;
        if (!file.good()) fail("writing output file '" + output.path + "' failed");
        if (!quiet) err << "wrote " << output.path << "\n";
    }
    return result.exitCode;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::string configPath, outputOverride, formatOverride, seedFrom;
    bool quiet = false;

    CLI::App app{"decaying-solution toolkit for advanced half-linear difference equations"};
    app.add_option("--config", configPath, "run configuration file (JSON)")->required();
    app.add_option("--output", outputOverride,
                   "destination path; overrides output.path ('-' = stdout)");
    app.add_option("--format", formatOverride, "csv or json; overrides output.format");
    app.add_option("--seed-from", seedFrom,
                   "trajectory JSON ingested as the classify window or fixed-point base");
    app.add_flag("--quiet", quiet, "suppress informational notes on stderr");

    std::vector<const char*> argv;
    argv.push_back("halflin-cli");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        json cfg = load_json_file(configPath, "config file");
        return run_config(cfg, seedFrom, formatOverride, outputOverride, quiet, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.category()) {
            case ErrorCategory::Configuration: return 1;
            case ErrorCategory::Numeric: return 2;
            case ErrorCategory::NonConvergence: return 3;
        }
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace halflin::cli
