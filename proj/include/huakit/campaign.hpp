#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "huakit/error.hpp"
#include "huakit/function.hpp"
#include "huakit/instances.hpp"
#include "huakit/random.hpp"
#include "huakit/report.hpp"
#include "huakit/spectral.hpp"

namespace huakit {

inline constexpr const char* kToolVersion = "0.1.0";

/// One generator configuration of one inequality, e.g. module-hua on the
/// diagonal model with f = exp.
struct CampaignVariant {
    InequalityId id;
    std::string name;
    InstanceParams params;  ///< dim is filled in per campaign cell
};

struct CampaignConfig {
    std::vector<InequalityId> inequalities;
    std::vector<std::size_t> dims{1, 2, 4, 8};
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    TolerancePolicy tol;
    std::optional<std::string> function;  ///< catalog tag overriding the default variants
    unsigned workers = 1;
};

/// Per (inequality, variant, dim) statistics. EQUALITY verdicts are counted
/// inside `holds`; `errors` counts generator or verifier exceptions and is
/// included in `fails`.
struct CampaignRow {
    std::string inequality;
    std::string variant;
    std::size_t dim = 0;
    std::size_t trials = 0;
    std::size_t holds = 0;
    std::size_t equalities = 0;
    std::size_t fails = 0;
    std::size_t errors = 0;
    double min_gap = 0.0;
    double threshold = 0.0;  ///< threshold of the instance attaining min_gap
    std::uint64_t seed = 0;
    std::string worst_label;  ///< SeedSpec label/index reproducing the worst instance
    std::uint64_t worst_index = 0;
    std::string direction;
    std::string flag;  ///< set by report merging on conflicting rows

    bool operator==(const CampaignRow&) const = default;
};

struct CampaignSummary {
    CampaignConfig config;
    std::vector<CampaignRow> rows;
    double wall_seconds = 0.0;

    std::size_t total_fails() const {
        std::size_t n = 0;
        for (const auto& r : rows) n += r.fails;
        return n;
    }
};

/// Functions for which --function replaces the default variant list.
inline bool accepts_function_override(InequalityId id) {
    return id == InequalityId::OperatorHua || id == InequalityId::HpjJensen || id == InequalityId::PecaricHua;
}

namespace detail {

inline InstanceParams params_with(std::optional<ScalarFunction> f = std::nullopt) {
    InstanceParams p;
    p.function = std::move(f);
    return p;
}

inline std::vector<CampaignVariant> override_variant(InequalityId id, const ScalarFunction& f) {
    InstanceParams p = params_with(f);
    // Functions without a known status get the convex-side direction, so a
    // non-operator-convex f shows up as FAILS rather than a precondition error.
    if (!natural_direction(f)) p.forced = Direction::Forward;
    if (id == InequalityId::HpjJensen) {
        p.mode = f.nonpositive_at_zero() ? ContractionMode::AtMostIdentity : ContractionMode::EqualIdentity;
    }
    return {{id, f.tag(), std::move(p)}};
}

}  // namespace detail

/// Generator configurations run for an inequality. With `function` set, the
/// inequalities that take an arbitrary function get a single variant for it.
inline std::vector<CampaignVariant> campaign_variants(InequalityId id, const std::optional<ScalarFunction>& function = {}) {
    using detail::params_with;
    if (function && accepts_function_override(id)) return detail::override_variant(id, *function);

    std::vector<CampaignVariant> out;
    switch (id) {
        case InequalityId::ScalarHua: out.push_back({id, "default", {}}); break;
        case InequalityId::WangHua:
            for (double p : {0.5, 1.0, 1.5, 2.0, 3.0}) {
                InstanceParams params;
                params.p = p;
                out.push_back({id, "p=" + ScalarFunction::format_number(p), params});
            }
            break;
        case InequalityId::InnerProductHua: {
            InstanceParams weighted;
            weighted.alternate_form = true;
            out.push_back({id, "operator", {}});
            out.push_back({id, "weighted", weighted});
            break;
        }
        case InequalityId::ModuleHua:
            for (ModelKind model : {ModelKind::Full, ModelKind::Diagonal}) {
                for (const char* tag : {"shift1", "exp"}) {
                    InstanceParams params = params_with(catalog(tag));
                    params.model = model;
                    out.push_back({id, std::string(to_string(model)) + ":" + tag, params});
                }
            }
            break;
        case InequalityId::NormHua:
            for (ModelKind model : {ModelKind::Full, ModelKind::Diagonal}) {
                for (bool elementary : {false, true}) {
                    InstanceParams params;
                    params.model = model;
                    params.alternate_form = elementary;
                    out.push_back({id, std::string(to_string(model)) + (elementary ? ":elementary" : ":left"), params});
                }
            }
            break;
        case InequalityId::ModuleJensen:
            for (ModelKind model : {ModelKind::Full, ModelKind::Diagonal}) {
                for (const char* tag : {"square", "power:1.5"}) {
                    InstanceParams params = params_with(catalog(tag));
                    params.model = model;
                    out.push_back({id, std::string(to_string(model)) + ":" + tag, params});
                }
            }
            break;
        case InequalityId::ModuleHuaJensen:
            for (auto [model, tag] : {std::pair{ModelKind::Full, "square"}, std::pair{ModelKind::Full, "power:1.5"},
                                      std::pair{ModelKind::Diagonal, "square"}}) {
                InstanceParams params = params_with(catalog(tag));
                params.model = model;
                out.push_back({id, std::string(to_string(model)) + ":" + tag, params});
            }
            break;
        case InequalityId::OperatorHua:
            for (const char* tag : {"square", "power:1.5", "inverse"}) out.push_back({id, tag, params_with(catalog(tag))});
            break;
        case InequalityId::OperatorHuaCorollary:
            for (CorollaryVariant v : {CorollaryVariant::inverse(), CorollaryVariant::power(-0.5), CorollaryVariant::power(1.5),
                                       CorollaryVariant::power(2.0), CorollaryVariant::power(0.5), CorollaryVariant::log(),
                                       CorollaryVariant::power(1.0)}) {
                InstanceParams params;
                params.corollary = v;
                out.push_back({id, v.label(), params});
            }
            break;
        case InequalityId::PecaricHua:
            for (const char* tag : {"square", "cube", "exp", "inverse"}) {
                out.push_back({id, tag, params_with(catalog(tag))});
            }
            break;
        case InequalityId::HpjJensen:
            for (auto [tag, mode] : {std::pair{"square", ContractionMode::AtMostIdentity},
                                     std::pair{"power:1.5", ContractionMode::Strict},
                                     std::pair{"inverse", ContractionMode::EqualIdentity}}) {
                InstanceParams params = params_with(catalog(tag));
                params.mode = mode;
                out.push_back({id, std::string(tag) + ":" + to_string(mode), params});
            }
            break;
    }
    return out;
}

/// Seed label of a campaign cell; (seed, label, trial) reproduces an instance.
inline std::string campaign_label(const CampaignVariant& v, std::size_t dim) {
    return std::string(to_string(v.id)) + "/" + v.name + "/d" + std::to_string(dim);
}

namespace detail {

struct TrialOutcome {
    double gap = 0.0;
    double threshold = 0.0;
    Verdict verdict = Verdict::Holds;
    Direction direction = Direction::Forward;
    bool error = false;
};

inline TrialOutcome run_trial(const CampaignVariant& v, const InstanceParams& params, const SeedSpec& seed,
                              const TolerancePolicy& tol) {
    TrialOutcome out;
    try {
        const VerificationReport r = verify(random_admissible_instance(v.id, params, seed), tol);
        out.gap = r.gap;
        out.threshold = r.threshold;
        out.verdict = r.verdict;
        out.direction = r.direction;
    } catch (const Error&) {
        out.error = true;
        out.verdict = Verdict::Fails;
    }
    return out;
}

}  // namespace detail

/// Runs `trials` seeded instances of one variant at one dimension. Trials are
/// spread over `workers` threads; the reduction is sequential in trial order,
/// so the row does not depend on the worker count.
inline CampaignRow run_cell(const CampaignVariant& v, std::size_t dim, std::size_t trials, std::uint64_t seed,
                            const TolerancePolicy& tol, unsigned workers = 1) {
    if (trials == 0) throw PreconditionError("run_cell: trials must be >= 1");
    InstanceParams params = v.params;
    params.dim = dim;
    const std::string label = campaign_label(v, dim);

    std::vector<detail::TrialOutcome> outcomes(trials);
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t t = first; t < trials; t += stride) {
            outcomes[t] = detail::run_trial(v, params, SeedSpec{seed, label, t}, tol);
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(trials)));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
        for (auto& th : pool) th.join();
    }

    CampaignRow row;
    row.inequality = to_string(v.id);
    row.variant = v.name;
    row.dim = dim;
    row.trials = trials;
    row.seed = seed;
    row.worst_label = label;
    row.min_gap = std::numeric_limits<double>::infinity();
    std::optional<Direction> dir;
    bool mixed = false;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto& o = outcomes[t];
        if (o.error) {
            ++row.errors;
        } else if (!dir) {
            dir = o.direction;
        } else if (*dir != o.direction) {
            mixed = true;
        }
        if (o.verdict == Verdict::Fails) ++row.fails;
        else ++row.holds;
        if (o.verdict == Verdict::Equality) ++row.equalities;
        if (!o.error && o.gap < row.min_gap) {
            row.min_gap = o.gap;
            row.threshold = o.threshold;
            row.worst_index = t;
        }
    }
    row.direction = mixed ? "mixed" : dir ? to_string(*dir) : "none";
    return row;
}

inline CampaignSummary run_campaign(const CampaignConfig& config) {
    if (config.trials == 0) throw PreconditionError("campaign: trials must be >= 1");
    if (config.dims.empty()) throw PreconditionError("campaign: dims must be nonempty");
    if (config.inequalities.empty()) throw PreconditionError("campaign: no inequalities selected");
    for (std::size_t d : config.dims) {
        if (d == 0) throw PreconditionError("campaign: dims must be >= 1");
    }
    std::optional<ScalarFunction> f;
    if (config.function) f = catalog(*config.function);

    CampaignSummary summary;
    summary.config = config;
    for (InequalityId id : config.inequalities) {
        for (const CampaignVariant& v : campaign_variants(id, f)) {
            for (std::size_t d : config.dims) {
                summary.rows.push_back(run_cell(v, d, config.trials, config.seed, config.tol, config.workers));
            }
        }
    }
    return summary;
}

}  // namespace huakit
