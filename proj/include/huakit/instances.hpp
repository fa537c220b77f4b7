#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "huakit/error.hpp"
#include "huakit/function.hpp"
#include "huakit/inequalities.hpp"
#include "huakit/module.hpp"
#include "huakit/random.hpp"

namespace huakit {

// Random instances that satisfy their verifier's hypotheses by construction
// (no rejection sampling). Spectral conditions of the form
// "spectrum of B - sum C^* A C lies in J" are met by drawing A_i, C_i first and setting
// B := sum C_i^* A_i C_i + P with the spectrum of P in J.

enum class InequalityId {
    ScalarHua,
    WangHua,
    InnerProductHua,
    ModuleHua,
    NormHua,
    ModuleJensen,
    ModuleHuaJensen,
    OperatorHua,
    OperatorHuaCorollary,
    PecaricHua,
    HpjJensen,
};

inline constexpr InequalityId kAllInequalities[] = {
    InequalityId::ScalarHua,       InequalityId::WangHua,      InequalityId::InnerProductHua,
    InequalityId::ModuleHua,       InequalityId::NormHua,      InequalityId::ModuleJensen,
    InequalityId::ModuleHuaJensen, InequalityId::OperatorHua,  InequalityId::OperatorHuaCorollary,
    InequalityId::PecaricHua,      InequalityId::HpjJensen,
};

inline const char* to_string(InequalityId id) {
    switch (id) {
        case InequalityId::ScalarHua: return "scalar-hua";
        case InequalityId::WangHua: return "wang-hua";
        case InequalityId::InnerProductHua: return "inner-product-hua";
        case InequalityId::ModuleHua: return "module-hua";
        case InequalityId::NormHua: return "norm-hua";
        case InequalityId::ModuleJensen: return "module-jensen";
        case InequalityId::ModuleHuaJensen: return "module-hua-jensen";
        case InequalityId::OperatorHua: return "operator-hua";
        case InequalityId::OperatorHuaCorollary: return "operator-hua-corollary";
        case InequalityId::PecaricHua: return "pecaric-hua";
        case InequalityId::HpjJensen: return "hpj-jensen";
    }
    return "?";
}

inline InequalityId parse_inequality(std::string_view name) {
    for (InequalityId id : kAllInequalities) {
        if (name == to_string(id)) return id;
    }
    throw LookupError("unknown inequality id '" + std::string(name) + "'");
}

/// Knobs for the generators. Fields irrelevant to an inequality are ignored.
struct InstanceParams {
    std::size_t dim = 2;
    std::optional<ScalarFunction> function;  ///< defaulted per inequality when empty
    double p = 2.0;                          ///< wang-hua exponent
    ModelKind model = ModelKind::Full;
    bool alternate_form = false;  ///< weighted inner-product form / elementary operator T
    CorollaryVariant corollary = CorollaryVariant::inverse();
    ContractionMode mode = ContractionMode::AtMostIdentity;
    std::size_t terms = 0;  ///< number of summands; 0 draws 1..3 per instance
    std::optional<Direction> forced;
};

struct InnerProductInstance {
    ComplexMatrix a, x, y;
    double alpha = 1.0;
};

struct WeightedInnerProductInstance {
    std::vector<Complex> ws;
    std::vector<ComplexMatrix> xs;
    ComplexMatrix y;
    double alpha = 1.0;
};

struct ModuleHuaInstance {
    CentralPositive c;
    ModuleElement x, y;
    ScalarFunction f;
};

struct NormHuaInstance {
    CentralPositive c;
    ModuleElement x, y;
    LinearMap t;
    ScalarFunction f;
};

struct ModuleJensenInstance {
    HermitianMatrix t;
    ModuleElement x;
    ScalarFunction f;
};

struct ModuleHuaJensenInstance {
    HermitianMatrix s;
    std::vector<ComplexMatrix> rs;
    std::vector<HermitianMatrix> ts;
    ModuleElement x;
    ScalarFunction f;
};

struct CorollaryInstance {
    CorollaryVariant variant;
    HermitianMatrix b;
    std::vector<HermitianMatrix> as;
    std::vector<ComplexMatrix> cs;
};

struct PecaricTask {
    PecaricInstance data;
    ScalarFunction f;
    std::optional<Direction> forced;
};

struct ForcedOperatorHua {
    OperatorHuaInstance data;
    std::optional<Direction> forced;
};

struct HpjInstance {
    std::vector<HermitianMatrix> as;
    std::vector<ComplexMatrix> es;
    ScalarFunction f;
    ContractionMode mode;
    std::optional<Direction> forced;
};

using AdmissibleInstance =
    std::variant<HuaScalarInstance, WangHuaInstance, InnerProductInstance, WeightedInnerProductInstance,
                 ModuleHuaInstance, NormHuaInstance, ModuleJensenInstance, ModuleHuaJensenInstance, ForcedOperatorHua,
                 CorollaryInstance, PecaricTask, HpjInstance>;

namespace detail {

inline std::size_t draw_terms(const InstanceParams& params, Stream& rng) {
    if (params.terms) return params.terms;
    return 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
}

inline ModuleElement random_module_element(ModelKind kind, std::size_t m, std::size_t k, Stream& rng) {
    return {kind, random_gaussian_matrix(m, k, rng)};
}

/// Random element rescaled to norm in (0.1, 1].
inline ModuleElement random_unit_ball_element(ModelKind kind, std::size_t m, std::size_t k, Stream& rng) {
    ModuleElement x = random_module_element(kind, m, k, rng);
    const double target = rng.uniform(0.1, 1.0);
    return x * Complex(target / module_norm(x));
}

inline CentralPositive random_central(ModelKind kind, std::size_t k, Stream& rng) {
    if (kind == ModelKind::Full) return CentralPositive::scalar(kind, k, rng.uniform(0.0, 3.0));
    std::vector<Complex> d(k);
    for (Complex& z : d) z = rng.uniform(0.0, 3.0);
    return CentralPositive::make(AlgebraElement::diagonal(std::move(d)));
}

inline std::vector<double> window_points(std::size_t n, const Interval& w, Stream& rng) {
    std::vector<double> out(n);
    for (double& t : out) t = rng.uniform(w.lo, w.hi);
    return out;
}

inline ScalarFunction function_or(const InstanceParams& params, ScalarFunction fallback) {
    return params.function ? *params.function : std::move(fallback);
}

}  // namespace detail

/// Module models use m = dim + 1 rows over a k = dim algebra.
inline std::size_t module_rows(std::size_t dim) { return dim + 1; }

inline AdmissibleInstance random_admissible_instance(InequalityId id, const InstanceParams& params, Stream& rng) {
    const std::size_t dim = params.dim;
    if (dim == 0) throw PreconditionError("random_admissible_instance: dim must be >= 1");
    switch (id) {
        case InequalityId::ScalarHua: {
            HuaScalarInstance inst;
            inst.delta = rng.uniform(0.1, 5.0);
            inst.alpha = rng.uniform(0.1, 5.0);
            inst.xs.resize(dim);
            for (double& x : inst.xs) x = 0.5 * inst.delta * rng.gaussian();
            return inst;
        }
        case InequalityId::WangHua: {
            if (!(params.p > 0.0)) throw PreconditionError("wang-hua generator: p must be positive");
            WangHuaInstance inst;
            inst.delta = rng.uniform(0.1, 5.0);
            inst.alpha = rng.uniform(0.1, 5.0);
            inst.p = params.p;
            std::vector<double> w(dim + 1);
            double total = 0.0;
            for (double& v : w) total += (v = rng.uniform(0.0, 1.0) + 1e-3);
            inst.xs.resize(dim);
            for (std::size_t i = 0; i < dim; ++i) inst.xs[i] = inst.delta * w[i + 1] / total;
            return inst;
        }
        case InequalityId::InnerProductHua: {
            if (params.alternate_form) {
                constexpr std::size_t h = 2;
                WeightedInnerProductInstance inst;
                for (std::size_t i = 0; i < dim; ++i) {
                    inst.ws.push_back(rng.complex_gaussian());
                    inst.xs.push_back(random_gaussian_matrix(h, 1, rng));
                }
                inst.y = random_gaussian_matrix(h, 1, rng);
                inst.alpha = rng.uniform(0.1, 5.0);
                return inst;
            }
            InnerProductInstance inst;
            inst.a = random_gaussian_matrix(dim, dim, rng) * Complex(rng.uniform(0.1, 3.0) / std::sqrt(double(dim)));
            inst.x = random_gaussian_matrix(dim, 1, rng);
            inst.y = random_gaussian_matrix(dim, 1, rng);
            inst.alpha = rng.uniform(0.1, 5.0);
            return inst;
        }
        case InequalityId::ModuleHua: {
            const std::size_t m = module_rows(dim);
            CentralPositive c = detail::random_central(params.model, dim, rng);
            ModuleElement x = detail::random_module_element(params.model, m, dim, rng);
            ModuleElement y = detail::random_module_element(params.model, m, dim, rng);
            return ModuleHuaInstance{std::move(c), std::move(x), std::move(y),
                                     detail::function_or(params, ScalarFunction::affine(1.0, 1.0))};
        }
        case InequalityId::NormHua: {
            const std::size_t m = module_rows(dim);
            CentralPositive c = detail::random_central(params.model, dim, rng);
            ModuleElement x = detail::random_module_element(params.model, m, dim, rng);
            ModuleElement y = detail::random_module_element(params.model, m, dim, rng);
            LinearMap t;
            if (params.alternate_form) {
                ModuleElement u = detail::random_module_element(params.model, m, dim, rng);
                ModuleElement v = detail::random_module_element(params.model, m, dim, rng);
                t = ElementaryOperator{std::move(u), std::move(v)};
            } else {
                t = random_gaussian_matrix(m, m, rng) * Complex(1.0 / std::sqrt(double(m)));
            }
            return NormHuaInstance{std::move(c), std::move(x), std::move(y), std::move(t),
                                   detail::function_or(params, ScalarFunction::affine(1.0, 1.0))};
        }
        case InequalityId::ModuleJensen: {
            const std::size_t m = module_rows(dim);
            ScalarFunction f = detail::function_or(params, ScalarFunction::square());
            HermitianMatrix t = random_hermitian_in_interval(m, f.window(), rng);
            ModuleElement x = detail::random_unit_ball_element(params.model, m, dim, rng);
            return ModuleJensenInstance{std::move(t), std::move(x), std::move(f)};
        }
        case InequalityId::ModuleHuaJensen: {
            const std::size_t m = module_rows(dim);
            ScalarFunction f = detail::function_or(params, ScalarFunction::square());
            const std::size_t terms = detail::draw_terms(params, rng);
            ModuleHuaJensenInstance inst{HermitianMatrix::zero(m), {}, {}, ModuleElement::zero(params.model, m, dim), f};
            HermitianMatrix s = random_hermitian_in_interval(m, f.window(), rng);
            for (std::size_t i = 0; i < terms; ++i) {
                inst.ts.push_back(random_hermitian_in_interval(m, f.window(), rng));
                inst.rs.push_back(random_gaussian_matrix(m, m, rng) * Complex(rng.uniform(0.2, 1.0) / std::sqrt(double(m))));
                s = s + inst.ts.back().congruence(inst.rs.back());
            }
            inst.s = std::move(s);
            inst.x = detail::random_unit_ball_element(params.model, m, dim, rng);
            return inst;
        }
        case InequalityId::OperatorHua: {
            ScalarFunction f = detail::function_or(params, ScalarFunction::square());
            const std::size_t terms = detail::draw_terms(params, rng);
            OperatorHuaInstance inst{HermitianMatrix::zero(dim), {}, {}, f};
            HermitianMatrix b = random_hermitian_in_interval(dim, f.window(), rng);
            for (std::size_t i = 0; i < terms; ++i) {
                inst.as.push_back(random_hermitian_in_interval(dim, f.window(), rng));
                inst.cs.push_back(random_gaussian_matrix(dim, dim, rng) * Complex(rng.uniform(0.1, 1.5) / std::sqrt(double(dim))));
                b = b + inst.as.back().congruence(inst.cs.back());
            }
            inst.b = std::move(b);
            return ForcedOperatorHua{std::move(inst), params.forced};
        }
        case InequalityId::OperatorHuaCorollary: {
            const Interval window = Interval::closed(0.2, 3.0);
            const std::size_t terms = detail::draw_terms(params, rng);
            CorollaryInstance inst{params.corollary, HermitianMatrix::zero(dim), {}, {}};
            HermitianMatrix b = random_hermitian_in_interval(dim, window, rng);
            for (std::size_t i = 0; i < terms; ++i) {
                inst.as.push_back(random_hermitian_in_interval(dim, window, rng));
                inst.cs.push_back(random_gaussian_matrix(dim, dim, rng) * Complex(rng.uniform(0.1, 1.5) / std::sqrt(double(dim))));
                b = b + inst.as.back().congruence(inst.cs.back());
            }
            inst.b = std::move(b);
            return inst;
        }
        case InequalityId::PecaricHua: {
            ScalarFunction f = detail::function_or(params, ScalarFunction::square());
            PecaricInstance inst;
            inst.alpha = rng.uniform(0.2, 4.0);
            const auto targets = detail::window_points(dim, f.window(), rng);
            const double rest = rng.uniform(f.window().lo, f.window().hi);
            double sum = 0.0;
            for (double a : targets) {
                inst.xs.push_back(a / inst.alpha);
                sum += inst.xs.back();
            }
            inst.delta = rest + sum;
            return PecaricTask{std::move(inst), std::move(f), params.forced};
        }
        case InequalityId::HpjJensen: {
            ScalarFunction f = detail::function_or(params, ScalarFunction::square());
            ContractionMode mode = params.mode;
            if (mode != ContractionMode::EqualIdentity && !f.nonpositive_at_zero()) {
                throw PreconditionError("hpj-jensen generator: mode '" + std::string(to_string(mode)) + "' needs f(0) <= 0, " +
                                        f.tag() + " does not qualify");
            }
            const std::size_t terms = detail::draw_terms(params, rng);
            HpjInstance inst{{}, random_contraction_family(dim, terms, mode, rng), f, mode, params.forced};
            for (std::size_t i = 0; i < terms; ++i) inst.as.push_back(random_hermitian_in_interval(dim, f.window(), rng));
            return inst;
        }
    }
    throw LookupError("random_admissible_instance: unhandled inequality");
}

inline AdmissibleInstance random_admissible_instance(InequalityId id, const InstanceParams& params, const SeedSpec& seed) {
    Stream rng(seed);
    return random_admissible_instance(id, params, rng);
}

/// Runs the matching verifier on a generated instance.
inline VerificationReport verify(const AdmissibleInstance& instance, const TolerancePolicy& tol = {}) {
    struct Visitor {
        const TolerancePolicy& tol;
        VerificationReport operator()(const HuaScalarInstance& i) const { return scalar_hua(i, tol); }
        VerificationReport operator()(const WangHuaInstance& i) const { return wang_hua(i, tol); }
        VerificationReport operator()(const InnerProductInstance& i) const {
            return inner_product_hua(i.a, i.x, i.y, i.alpha, tol);
        }
        VerificationReport operator()(const WeightedInnerProductInstance& i) const {
            return weighted_inner_product_hua(i.ws, i.xs, i.y, i.alpha, tol);
        }
        VerificationReport operator()(const ModuleHuaInstance& i) const { return module_hua(i.c, i.x, i.y, i.f, tol); }
        VerificationReport operator()(const NormHuaInstance& i) const { return norm_hua(i.c, i.x, i.y, i.t, i.f, tol); }
        VerificationReport operator()(const ModuleJensenInstance& i) const { return module_jensen(i.t, i.x, i.f, tol); }
        VerificationReport operator()(const ModuleHuaJensenInstance& i) const {
            return module_hua_jensen(i.s, i.rs, i.ts, i.x, i.f, tol);
        }
        VerificationReport operator()(const ForcedOperatorHua& i) const { return operator_hua(i.data, tol, i.forced); }
        VerificationReport operator()(const CorollaryInstance& i) const {
            return operator_hua_corollary(i.variant, i.b, i.as, i.cs, tol);
        }
        VerificationReport operator()(const PecaricTask& i) const { return pecaric_hua(i.data, i.f, tol, i.forced); }
        VerificationReport operator()(const HpjInstance& i) const { return hpj_jensen(i.as, i.es, i.f, i.mode, tol, i.forced); }
    };
    return std::visit(Visitor{tol}, instance);
}

}  // namespace huakit
