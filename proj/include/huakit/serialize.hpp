#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include <json.hpp>

#include "huakit/campaign.hpp"
#include "huakit/error.hpp"
#include "huakit/opconvex.hpp"

// JSON documents.
//
// Summary (schema "hua-kit/summary", version 1):
//   { schema, schema_version, tool_version,
//     config: { inequalities[], dims[], trials, seed, tol_rel, tol_abs, function|null },
//     results: [ { inequality, variant, dim, trials, holds, equalities, fails, errors,
//                  min_gap, threshold, seed, worst_label, worst_index, direction, flag? } ],
//     wall_seconds? }
// `holds` includes `equalities`; holds + fails = trials. min_gap is null when
// every trial errored. Merged reports replace `config` by `sources`, the list
// of input configs.
//
// Counterexample (schema "hua-kit/counterexample", version 1):
//   { schema, schema_version, tool_version, function, kind: "operator-hua" | "convexity",
//     instance, gap, threshold, violation, seed, index, worker, strategy, search{...} }
// Matrices are { rows, cols, data: [[re, im], ...] } in row-major order.

namespace huakit {

using json = nlohmann::ordered_json;

inline constexpr const char* kSummarySchema = "hua-kit/summary";
inline constexpr const char* kCounterexampleSchema = "hua-kit/counterexample";
inline constexpr int kSchemaVersion = 1;

namespace detail {

inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline double number_from(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

inline void check_schema(const json& doc, const char* schema) {
    if (!doc.is_object() || doc.value("schema", std::string()) != schema) {
        throw PreconditionError(std::string("expected a '") + schema + "' document");
    }
    const int version = doc.value("schema_version", -1);
    if (version != kSchemaVersion) {
        throw PreconditionError("schema version mismatch: document has " + std::to_string(version) + ", tool reads " +
                                std::to_string(kSchemaVersion));
    }
}

}  // namespace detail

inline json to_json(const ComplexMatrix& m) {
    json data = json::array();
    for (const Complex& z : m.entries()) data.push_back({z.real(), z.imag()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix complex_matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const json& data = j.at("data");
    if (data.size() != rows * cols) throw DimensionError("matrix JSON: data length does not match shape");
    std::vector<Complex> entries;
    entries.reserve(data.size());
    for (const json& z : data) entries.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    return ComplexMatrix(rows, cols, std::move(entries));
}

inline HermitianMatrix hermitian_from_json(const json& j) { return HermitianMatrix(complex_matrix_from_json(j)); }

inline json to_json(const CampaignRow& r) {
    json j = {{"inequality", r.inequality},
              {"variant", r.variant},
              {"dim", r.dim},
              {"trials", r.trials},
              {"holds", r.holds},
              {"equalities", r.equalities},
              {"fails", r.fails},
              {"errors", r.errors},
              {"min_gap", detail::number_or_null(r.min_gap)},
              {"threshold", r.threshold},
              {"seed", r.seed},
              {"worst_label", r.worst_label},
              {"worst_index", r.worst_index},
              {"direction", r.direction}};
    if (!r.flag.empty()) j["flag"] = r.flag;
    return j;
}

inline CampaignRow campaign_row_from_json(const json& j) {
    CampaignRow r;
    r.inequality = j.at("inequality").get<std::string>();
    r.variant = j.at("variant").get<std::string>();
    r.dim = j.at("dim").get<std::size_t>();
    r.trials = j.at("trials").get<std::size_t>();
    r.holds = j.at("holds").get<std::size_t>();
    r.equalities = j.at("equalities").get<std::size_t>();
    r.fails = j.at("fails").get<std::size_t>();
    r.errors = j.value("errors", std::size_t{0});
    r.min_gap = detail::number_from(j.at("min_gap"));
    r.threshold = j.at("threshold").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.worst_label = j.value("worst_label", std::string());
    r.worst_index = j.value("worst_index", std::uint64_t{0});
    r.direction = j.at("direction").get<std::string>();
    r.flag = j.value("flag", std::string());
    return r;
}

inline json config_to_json(const CampaignConfig& c) {
    json ineqs = json::array();
    for (InequalityId id : c.inequalities) ineqs.push_back(to_string(id));
    return {{"inequalities", std::move(ineqs)},
            {"dims", c.dims},
            {"trials", c.trials},
            {"seed", c.seed},
            {"tol_rel", c.tol.rel},
            {"tol_abs", c.tol.abs},
            {"function", c.function ? json(*c.function) : json(nullptr)}};
}

inline CampaignConfig config_from_json(const json& j) {
    CampaignConfig c;
    for (const json& name : j.at("inequalities")) c.inequalities.push_back(parse_inequality(name.get<std::string>()));
    c.dims = j.at("dims").get<std::vector<std::size_t>>();
    c.trials = j.at("trials").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.tol = TolerancePolicy(j.at("tol_rel").get<double>(), j.at("tol_abs").get<double>());
    if (!j.at("function").is_null()) c.function = j.at("function").get<std::string>();
    return c;
}

/// Wall time is left out unless asked for, so equal campaigns serialize to
/// identical bytes.
inline json to_json(const CampaignSummary& s, bool with_timing = false) {
    json results = json::array();
    for (const CampaignRow& r : s.rows) results.push_back(to_json(r));
    json doc = {{"schema", kSummarySchema},
                {"schema_version", kSchemaVersion},
                {"tool_version", kToolVersion},
                {"config", config_to_json(s.config)},
                {"results", std::move(results)}};
    if (with_timing) doc["wall_seconds"] = s.wall_seconds;
    return doc;
}

/// Serialized summary text: two-space indentation, trailing newline.
inline std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

/// Merges summary documents. Rows are keyed by (inequality, variant, dim) in
/// first-appearance order; byte-equal duplicates collapse, differing rows under
/// one key are all kept and flagged "conflict". A single input passes through
/// unchanged.
inline json merge_summaries(const std::vector<json>& docs) {
    if (docs.empty()) throw PreconditionError("report: no input summaries");
    for (const json& d : docs) detail::check_schema(d, kSummarySchema);
    if (docs.size() == 1) return docs.front();

    using Key = std::tuple<std::string, std::string, std::size_t>;
    std::vector<Key> order;
    std::map<Key, std::vector<json>> groups;
    json sources = json::array();
    for (const json& d : docs) {
        if (d.contains("config")) sources.push_back(d["config"]);
        if (d.contains("sources")) {
            for (const json& s : d["sources"]) sources.push_back(s);
        }
        for (const json& row : d.at("results")) {
            json plain = row;
            plain.erase("flag");
            Key key{plain.at("inequality").get<std::string>(), plain.at("variant").get<std::string>(),
                    plain.at("dim").get<std::size_t>()};
            auto [it, inserted] = groups.try_emplace(key);
            if (inserted) order.push_back(key);
            if (std::find(it->second.begin(), it->second.end(), plain) == it->second.end()) it->second.push_back(plain);
        }
    }
    json results = json::array();
    for (const Key& key : order) {
        const auto& rows = groups[key];
        for (json row : rows) {
            if (rows.size() > 1) row["flag"] = "conflict";
            results.push_back(std::move(row));
        }
    }
    return {{"schema", kSummarySchema},
            {"schema_version", kSchemaVersion},
            {"tool_version", kToolVersion},
            {"sources", std::move(sources)},
            {"results", std::move(results)}};
}

inline json to_json(const Counterexample& cx, const std::optional<FalsifyOptions>& search = std::nullopt) {
    json doc = {{"schema", kCounterexampleSchema},
                {"schema_version", kSchemaVersion},
                {"tool_version", kToolVersion},
                {"function", cx.f.tag()}};
    if (const auto* w = std::get_if<ConvexityWitness>(&cx.instance)) {
        doc["kind"] = "convexity";
        doc["instance"] = {{"a", to_json(w->a.matrix())}, {"b", to_json(w->b.matrix())}, {"lambda", w->lambda}};
    } else {
        const auto& h = std::get<OperatorHuaInstance>(cx.instance);
        json as = json::array(), cs = json::array();
        for (const auto& a : h.as) as.push_back(to_json(a.matrix()));
        for (const auto& c : h.cs) cs.push_back(to_json(c));
        doc["kind"] = "operator-hua";
        doc["instance"] = {{"b", to_json(h.b.matrix())}, {"as", std::move(as)}, {"cs", std::move(cs)}};
    }
    doc["gap"] = cx.gap;
    doc["threshold"] = cx.threshold;
    doc["violation"] = cx.violation;
    doc["seed"] = cx.seed;
    doc["index"] = cx.index;
    doc["worker"] = cx.worker;
    doc["strategy"] = cx.strategy;
    if (search) {
        doc["search"] = {{"dim", search->dim},
                         {"terms", search->terms},
                         {"budget", search->budget},
                         {"workers", search->workers},
                         {"local_steps", search->local_steps},
                         {"refine_steps", search->refine_steps},
                         {"probe_positive_at_zero", search->probe_positive_at_zero},
                         {"tol_rel", search->tol.rel},
                         {"tol_abs", search->tol.abs}};
    }
    return doc;
}

struct ArchivedCounterexample {
    Counterexample cx;
    std::optional<FalsifyOptions> search;
};

inline ArchivedCounterexample counterexample_from_json(const json& doc) {
    detail::check_schema(doc, kCounterexampleSchema);
    ArchivedCounterexample out;
    Counterexample& cx = out.cx;
    cx.f = catalog(doc.at("function").get<std::string>());
    const json& inst = doc.at("instance");
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "convexity") {
        cx.instance = ConvexityWitness{hermitian_from_json(inst.at("a")), hermitian_from_json(inst.at("b")),
                                       inst.at("lambda").get<double>()};
    } else if (kind == "operator-hua") {
        OperatorHuaInstance h{hermitian_from_json(inst.at("b")), {}, {}, cx.f};
        for (const json& a : inst.at("as")) h.as.push_back(hermitian_from_json(a));
        for (const json& c : inst.at("cs")) h.cs.push_back(complex_matrix_from_json(c));
        cx.instance = std::move(h);
    } else {
        throw PreconditionError("counterexample: unknown kind '" + kind + "'");
    }
    cx.gap = doc.at("gap").get<double>();
    cx.threshold = doc.at("threshold").get<double>();
    cx.violation = doc.at("violation").get<double>();
    cx.seed = doc.at("seed").get<std::uint64_t>();
    cx.index = doc.at("index").get<std::uint64_t>();
    cx.worker = doc.at("worker").get<unsigned>();
    cx.strategy = doc.at("strategy").get<std::string>();
    if (doc.contains("search")) {
        const json& s = doc["search"];
        FalsifyOptions o;
        o.dim = s.at("dim").get<std::size_t>();
        o.terms = s.at("terms").get<std::size_t>();
        o.budget = s.at("budget").get<std::size_t>();
        o.workers = s.at("workers").get<unsigned>();
        o.local_steps = s.at("local_steps").get<std::size_t>();
        o.refine_steps = s.at("refine_steps").get<std::size_t>();
        o.probe_positive_at_zero = s.at("probe_positive_at_zero").get<bool>();
        o.tol = TolerancePolicy(s.at("tol_rel").get<double>(), s.at("tol_abs").get<double>());
        o.seed = cx.seed;
        out.search = o;
    }
    return out;
}

}  // namespace huakit
