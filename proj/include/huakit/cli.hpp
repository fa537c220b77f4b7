#pragma once

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "huakit/campaign.hpp"
#include "huakit/opconvex.hpp"
#include "huakit/serialize.hpp"

namespace huakit::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUnexpectedFails = 1;
inline constexpr int kUsage = 2;
inline constexpr int kBudgetExhausted = 3;

enum class Format { Human, Json, Csv };

namespace detail {

inline std::string sci(double x) {
    if (!std::isfinite(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

inline std::string full(double x) {
    if (!std::isfinite(x)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline Format parse_format(const std::string& name, const std::string& out_path) {
    std::string n = name;
    if (n.empty()) {
        if (out_path.ends_with(".json")) n = "json";
        else if (out_path.ends_with(".csv")) n = "csv";
        else n = "human";
    }
    if (n == "human") return Format::Human;
    if (n == "json") return Format::Json;
    if (n == "csv") return Format::Csv;
    throw LookupError("unknown format '" + name + "' (expected json, csv or human)");
}

inline std::uint64_t default_seed() {
    const char* env = std::getenv("HUA_KIT_SEED");
    if (!env || !*env) return 1;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (errno != 0 || *end != '\0' || env[0] == '-') throw LookupError(std::string("HUA_KIT_SEED is not a seed: '") + env + "'");
    return v;
}

inline std::vector<InequalityId> parse_inequalities(const std::vector<std::string>& names) {
    std::vector<InequalityId> out;
    for (const std::string& n : names) {
        if (n == "all") {
            out.assign(std::begin(kAllInequalities), std::end(kAllInequalities));
            continue;
        }
        const InequalityId id = parse_inequality(n);
        if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    }
    return out;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw PreconditionError("failed writing '" + path + "'");
}

inline json read_json(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot open '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw PreconditionError("'" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace detail

/// Column-aligned table of summary rows; gaps to 3 significant digits.
inline std::string render_table(const json& doc) {
    std::vector<std::vector<std::string>> cells{
        {"inequality", "variant", "dim", "trials", "holds", "equal", "fails", "min_gap", "threshold", "direction", "seed", ""}};
    for (const json& r : doc.at("results")) {
        const CampaignRow row = campaign_row_from_json(r);
        cells.push_back({row.inequality, row.variant, std::to_string(row.dim), std::to_string(row.trials),
                         std::to_string(row.holds), std::to_string(row.equalities), std::to_string(row.fails),
                         detail::sci(row.min_gap), detail::sci(row.threshold), row.direction, std::to_string(row.seed),
                         row.flag});
    }
    std::vector<std::size_t> width(cells.front().size(), 0);
    for (const auto& line : cells)
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    std::string out;
    for (const auto& line : cells) {
        std::string text;
        for (std::size_t c = 0; c < line.size(); ++c) {
            text += line[c];
            if (c + 1 < line.size()) text += std::string(width[c] - line[c].size() + 2, ' ');
        }
        while (!text.empty() && text.back() == ' ') text.pop_back();
        out += text + "\n";
    }
    return out;
}

inline std::string render_csv(const json& doc) {
    std::string out =
        "inequality,variant,dim,trials,holds,equalities,fails,errors,min_gap,threshold,seed,worst_label,worst_index,"
        "direction,flag\n";
    for (const json& r : doc.at("results")) {
        const CampaignRow row = campaign_row_from_json(r);
        out += row.inequality + "," + row.variant + "," + std::to_string(row.dim) + "," + std::to_string(row.trials) + "," +
               std::to_string(row.holds) + "," + std::to_string(row.equalities) + "," + std::to_string(row.fails) + "," +
               std::to_string(row.errors) + "," + detail::full(row.min_gap) + "," + detail::full(row.threshold) + "," +
               std::to_string(row.seed) + "," + row.worst_label + "," + std::to_string(row.worst_index) + "," +
               row.direction + "," + row.flag + "\n";
    }
    return out;
}

inline std::string render(const json& doc, Format format) {
    switch (format) {
        case Format::Json: return dump(doc);
        case Format::Csv: return render_csv(doc);
        case Format::Human: return render_table(doc);
    }
    return {};
}

struct VerifyArgs {
    std::vector<std::string> ineq{"all"};
    std::vector<std::size_t> dims{1, 2, 4, 8};
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    double tol_rel = TolerancePolicy{}.rel;
    double tol_abs = TolerancePolicy{}.abs;
    std::string function;
    std::string out;
    std::string format;
    unsigned workers = 1;
    bool timing = false;
};

inline int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    CampaignConfig config;
    config.inequalities = detail::parse_inequalities(a.ineq);
    config.dims = a.dims;
    config.trials = a.trials;
    config.seed = a.seed;
    config.tol = TolerancePolicy(a.tol_rel, a.tol_abs);
    if (!a.function.empty()) {
        catalog(a.function);  // reject unknown tags before running anything
        config.function = a.function;
    }
    config.workers = a.workers;
    const Format format = detail::parse_format(a.format, a.out);

    const auto t0 = std::chrono::steady_clock::now();
    CampaignSummary summary = run_campaign(config);
    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const json doc = to_json(summary, a.timing);
    const std::string text = render(doc, format);
    if (a.out.empty()) {
        out << text;
    } else {
        detail::write_text(a.out, text);
    }
    if (format == Format::Human || !a.out.empty()) {
        char line[160];
        std::snprintf(line, sizeof line, "%zu rows, %zu fails, seed %" PRIu64 ", %.2f s\n", summary.rows.size(),
                      summary.total_fails(), config.seed, summary.wall_seconds);
        if (format != Format::Human && !a.out.empty()) out << render_table(doc);
        out << line;
    }
    return summary.total_fails() == 0 ? kOk : kUnexpectedFails;
}

struct FalsifyArgs {
    std::string function;
    std::size_t dim = 2;
    std::size_t terms = 1;
    std::size_t budget = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    double tol_rel = TolerancePolicy{}.rel;
    double tol_abs = TolerancePolicy{}.abs;
    bool probe = false;
    std::string out;
    std::string format;
    std::string replay;
};

inline void describe(const Counterexample& cx, std::size_t evaluations, std::ostream& out) {
    char line[256];
    std::snprintf(line, sizeof line, "counterexample for %s: violation %s (gap %s, threshold %s), %s strategy, restart %" PRIu64
                  ", worker %u, %zu evaluations\n",
                  cx.f.tag().c_str(), detail::sci(cx.violation).c_str(), detail::sci(cx.gap).c_str(),
                  detail::sci(cx.threshold).c_str(), cx.strategy.c_str(), cx.index, cx.worker, evaluations);
    out << line;
}

/// Re-evaluates an archived counterexample and, if the search settings were
/// stored, re-runs the search. Both must agree with the archive to 1e-12.
inline int cmd_replay(const FalsifyArgs& a, std::ostream& out) {
    const ArchivedCounterexample archived = counterexample_from_json(detail::read_json(a.replay));
    const Counterexample& cx = archived.cx;
    const TolerancePolicy tol = archived.search ? archived.search->tol : TolerancePolicy{};
    auto agrees = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); };

    const OrderReport again = reevaluate(cx, tol);
    bool ok = agrees(again.gap, cx.gap) && again.verdict == Verdict::Fails;
    out << "replay " << a.replay << ": stored gap " << detail::full(cx.gap) << ", re-evaluated " << detail::full(again.gap)
        << (agrees(again.gap, cx.gap) ? " (match)" : " (MISMATCH)") << "\n";
    if (archived.search && std::holds_alternative<OperatorHuaInstance>(cx.instance)) {
        const FalsifyResult rerun = falsify_hua_converse(cx.f, *archived.search);
        const bool same = rerun.counterexample && agrees(rerun.counterexample->gap, cx.gap) &&
                          rerun.counterexample->index == cx.index && rerun.counterexample->worker == cx.worker;
        out << "search rerun: " << (rerun.counterexample ? "gap " + detail::full(rerun.counterexample->gap) : "no violation")
            << (same ? " (match)" : " (MISMATCH)") << "\n";
        ok = ok && same;
    }
    return ok ? kOk : kUnexpectedFails;
}

inline int cmd_falsify(const FalsifyArgs& a, std::ostream& out) {
    if (!a.replay.empty()) return cmd_replay(a, out);
    if (a.function.empty()) throw LookupError("falsify: --function is required");
    const ScalarFunction f = catalog(a.function);
    const Format format = detail::parse_format(a.format, a.out);
    if (format == Format::Csv) throw LookupError("falsify: csv output is not supported");

    FalsifyOptions opt;
    opt.dim = a.dim;
    opt.terms = a.terms;
    opt.budget = a.budget;
    opt.seed = a.seed;
    opt.workers = a.workers;
    opt.probe_positive_at_zero = a.probe;
    opt.tol = TolerancePolicy(a.tol_rel, a.tol_abs);

    const auto t0 = std::chrono::steady_clock::now();
    const FalsifyResult result = falsify_hua_converse(f, opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!result.counterexample) {
        out << "no violation for " << f.tag() << " in " << result.evaluations << " evaluations (dim " << opt.dim
            << ", seed " << opt.seed << ")\n";
        return kBudgetExhausted;
    }
    const std::string doc = dump(to_json(*result.counterexample, result.options));
    if (format == Format::Json && a.out.empty()) {
        out << doc;
    } else {
        if (!a.out.empty()) detail::write_text(a.out, doc);
        describe(*result.counterexample, result.evaluations, out);
        char line[64];
        std::snprintf(line, sizeof line, "%.2f s\n", secs);
        out << line;
    }
    return kOk;
}

struct ReportArgs {
    std::vector<std::string> inputs;
    std::string out;
    std::string format;
};

inline int cmd_report(const ReportArgs& a, std::ostream& out) {
    std::vector<json> docs;
    for (const std::string& path : a.inputs) docs.push_back(detail::read_json(path));
    const json merged = merge_summaries(docs);
    const std::string text = render(merged, detail::parse_format(a.format, a.out));
    if (a.out.empty()) out << text;
    else detail::write_text(a.out, text);
    return kOk;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Numerical verification of Hua-type inequalities", "hua_kit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    VerifyArgs va;
    FalsifyArgs fa;
    ReportArgs ra;
    std::string seed_error;
    try {
        va.seed = fa.seed = detail::default_seed();
    } catch (const Error& e) {
        seed_error = e.what();
    }

    auto* verify = app.add_subcommand("verify", "run seeded verification campaigns");
    verify->add_option("--ineq", va.ineq, "inequality ids or 'all'")->delimiter(',');
    verify->add_option("--dims", va.dims, "comma-separated dimensions")->delimiter(',')->check(CLI::PositiveNumber);
    verify->add_option("--trials", va.trials, "instances per (variant, dim)")->check(CLI::PositiveNumber);
    verify->add_option("--seed", va.seed, "master seed (default $HUA_KIT_SEED or 1)");
    verify->add_option("--tol-rel", va.tol_rel)->check(CLI::NonNegativeNumber);
    verify->add_option("--tol-abs", va.tol_abs)->check(CLI::NonNegativeNumber);
    verify->add_option("--function", va.function, "function tag for operator-hua, hpj-jensen, pecaric-hua");
    verify->add_option("--out", va.out, "output file");
    verify->add_option("--format", va.format, "json | csv | human (default from --out extension)");
    verify->add_option("--workers", va.workers, "worker threads")->check(CLI::PositiveNumber);
    verify->add_flag("--timing", va.timing, "include wall time in JSON");

    auto* falsify = app.add_subcommand("falsify", "search for operator Hua violations");
    falsify->add_option("--function", fa.function, "function tag");
    falsify->add_option("--dim,--dims", fa.dim, "matrix dimension")->check(CLI::PositiveNumber);
    falsify->add_option("--terms", fa.terms, "number of (A_i, C_i) pairs")->check(CLI::PositiveNumber);
    falsify->add_option("--budget", fa.budget, "total evaluations")->check(CLI::PositiveNumber);
    falsify->add_option("--seed", fa.seed, "master seed (default $HUA_KIT_SEED or 1)");
    falsify->add_option("--workers", fa.workers)->check(CLI::PositiveNumber);
    falsify->add_option("--tol-rel", fa.tol_rel)->check(CLI::NonNegativeNumber);
    falsify->add_option("--tol-abs", fa.tol_abs)->check(CLI::NonNegativeNumber);
    falsify->add_flag("--probe-positive-at-zero", fa.probe, "also search the substitution family when f(0) > 0");
    falsify->add_option("--out", fa.out, "write the counterexample JSON here");
    falsify->add_option("--format", fa.format, "json | human");
    falsify->add_option("--replay", fa.replay, "re-check an archived counterexample");

    auto* report = app.add_subcommand("report", "merge summary files into one table");
    report->add_option("inputs", ra.inputs, "summary JSON files")->required();
    report->add_option("--out", ra.out);
    report->add_option("--format", ra.format, "human | json | csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (!seed_error.empty() && ((verify->parsed() && verify->count("--seed") == 0) ||
                                    (falsify->parsed() && falsify->count("--seed") == 0))) {
            throw LookupError(seed_error);
        }
        if (verify->parsed()) return cmd_verify(va, out);
        if (falsify->parsed()) return cmd_falsify(fa, out);
        return cmd_report(ra, out);
    } catch (const LookupError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUnexpectedFails;
    }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"hua_kit"};
    for (const auto& s : args) argv.push_back(s.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace huakit::cli
