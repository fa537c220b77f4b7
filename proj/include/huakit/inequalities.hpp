#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "huakit/error.hpp"
#include "huakit/function.hpp"
#include "huakit/matrix.hpp"
#include "huakit/module.hpp"
#include "huakit/random.hpp"
#include "huakit/report.hpp"
#include "huakit/spectral.hpp"

namespace huakit {

// One verifier per Hua-type inequality. Each evaluates both sides literally,
// compares them (Loewner order for operators, plain order for scalars) and
// returns a VerificationReport.
//
// Report convention: `lhs` is the side the inequality asserts to be the
// larger one when direction is FORWARD (smaller when REVERSED). For the
// Jensen-type statements f(...) <= <...f(...)...> this means `lhs` holds the
// right-hand expression as usually typeset.

// ---------------------------------------------------------------------------
// Scalar Hua and its p-power generalization
// ---------------------------------------------------------------------------

struct HuaScalarInstance {
    double delta = 1.0;
    double alpha = 1.0;
    std::vector<double> xs;
};

/// (delta - sum x)^2 + alpha sum x^2 >= alpha / (n + alpha) delta^2.
/// EQUALITY is certified by x_i = delta / (n + alpha) (within tol.abs).
inline VerificationReport scalar_hua(const HuaScalarInstance& inst, const TolerancePolicy& tol = {}) {
    if (!(inst.delta > 0.0) || !(inst.alpha > 0.0)) throw PreconditionError("scalar_hua: delta and alpha must be positive");
    if (inst.xs.empty()) throw PreconditionError("scalar_hua: need n >= 1");
    const double n = static_cast<double>(inst.xs.size());
    double sum = 0.0, sum_sq = 0.0;
    for (double x : inst.xs) {
        sum += x;
        sum_sq += x * x;
    }
    const double lhs = (inst.delta - sum) * (inst.delta - sum) + inst.alpha * sum_sq;
    const double rhs = inst.alpha / (n + inst.alpha) * inst.delta * inst.delta;
    VerificationReport r = detail::make_scalar_report("scalar-hua", lhs, rhs, Direction::Forward, tol);
    if (r.verdict != Verdict::Fails) {
        const double optimum = inst.delta / (n + inst.alpha);
        bool at_optimum = true;
        for (double x : inst.xs) at_optimum = at_optimum && std::abs(x - optimum) <= tol.abs;
        r.verdict = at_optimum ? Verdict::Equality : Verdict::Holds;
    }
    return r;
}

struct WangHuaInstance {
    double delta = 1.0;
    double alpha = 1.0;
    double p = 2.0;
    std::vector<double> xs;
};

namespace detail {
inline double real_power(double x, double p) { return p == 2.0 ? x * x : (p == 1.0 ? x : std::pow(x, p)); }
}  // namespace detail

/// (delta - sum x)^p + alpha^{p-1} sum x^p  vs  (alpha/(n+alpha))^{p-1} delta^p;
/// ">=" for p >= 1 and "<=" for 0 < p < 1.
inline VerificationReport wang_hua(const WangHuaInstance& inst, const TolerancePolicy& tol = {}) {
    if (!(inst.delta > 0.0) || !(inst.alpha > 0.0)) throw PreconditionError("wang_hua: delta and alpha must be positive");
    if (!(inst.p > 0.0)) throw PreconditionError("wang_hua: p must be positive");
    if (inst.xs.empty()) throw PreconditionError("wang_hua: need n >= 1");
    double sum = 0.0;
    for (double x : inst.xs) {
        if (x < 0.0) throw PreconditionError("wang_hua: x_i must be nonnegative");
        sum += x;
    }
    if (sum > inst.delta * (1.0 + tol.rel) + tol.abs) throw PreconditionError("wang_hua: sum of x_i exceeds delta");
    const double n = static_cast<double>(inst.xs.size());
    const double p = inst.p;
    double powers = 0.0;
    for (double x : inst.xs) powers += detail::real_power(x, p);
    const double lhs = detail::real_power(std::max(inst.delta - sum, 0.0), p) + std::pow(inst.alpha, p - 1.0) * powers;
    const double rhs = std::pow(inst.alpha / (n + inst.alpha), p - 1.0) * detail::real_power(inst.delta, p);
    return detail::make_scalar_report("wang-hua", lhs, rhs, p >= 1.0 ? Direction::Forward : Direction::Reversed, tol);
}

// ---------------------------------------------------------------------------
// Inner product spaces
// ---------------------------------------------------------------------------

/// ||y - A x||^2 + alpha ||x||^2 >= alpha / (||A||^2 + alpha) ||y||^2 for
/// A: C^h -> C^k given as a k x h matrix, x in C^h, y in C^k (columns).
inline VerificationReport inner_product_hua(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& y,
                                            double alpha, const TolerancePolicy& tol = {}) {
    if (!(alpha > 0.0)) throw PreconditionError("inner_product_hua: alpha must be positive");
    if (x.cols() != 1 || y.cols() != 1 || a.cols() != x.rows() || a.rows() != y.rows()) {
        throw DimensionError("inner_product_hua: A is " + a.shape() + ", x is " + x.shape() + ", y is " + y.shape());
    }
    const double norm_a = operator_norm(a);
    const double resid = (y - a * x).frobenius_norm();
    const double nx = x.frobenius_norm();
    const double ny = y.frobenius_norm();
    const double lhs = resid * resid + alpha * nx * nx;
    const double rhs = alpha / (norm_a * norm_a + alpha) * ny * ny;
    return detail::make_scalar_report("inner-product-hua", lhs, rhs, Direction::Forward, tol);
}

/// The n-fold form: A(x_1..x_n) = sum w_i x_i on H^n, so ||A||^2 = sum |w_i|^2.
inline VerificationReport weighted_inner_product_hua(const std::vector<Complex>& ws, const std::vector<ComplexMatrix>& xs,
                                                     const ComplexMatrix& y, double alpha,
                                                     const TolerancePolicy& tol = {}) {
    if (ws.empty() || ws.size() != xs.size()) throw DimensionError("weighted_inner_product_hua: need one weight per x_i");
    const std::size_t h = y.rows();
    ComplexMatrix a(h, h * ws.size());
    ComplexMatrix stacked(h * ws.size(), 1);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (xs[i].rows() != h || xs[i].cols() != 1) throw DimensionError("weighted_inner_product_hua: x_i shape");
        for (std::size_t r = 0; r < h; ++r) {
            a(r, i * h + r) = ws[i];
            stacked(i * h + r, 0) = xs[i](r, 0);
        }
    }
    VerificationReport rep = inner_product_hua(a, stacked, y, alpha, tol);
    rep.inequality = "inner-product-hua/weighted";
    return rep;
}

// ---------------------------------------------------------------------------
// Hilbert C*-module versions
// ---------------------------------------------------------------------------

namespace detail {

/// f(c) and f(c) - c for a function with f(t) >= t + M, after checking the
/// shift condition on the spectrum of c.
struct ShiftedCentral {
    AlgebraElement fc;
    AlgebraElement gap;           // f(c) - c
    AlgebraElement gap_sqrt;      // (f(c) - c)^{1/2}
    AlgebraElement gap_inv_sqrt;  // (f(c) - c)^{-1/2}
    AlgebraElement rhs_factor;    // c f(c)^{-1} (f(c) - c)^{-1}
};

inline ShiftedCentral shifted_central(const CentralPositive& c, const ScalarFunction& f, const TolerancePolicy& tol,
                                      const char* who) {
    if (!f.shift()) {
        throw PreconditionError(std::string(who) + ": function " + f.tag() + " has no declared shift M with f(t) >= t + M");
    }
    const double m = *f.shift();
    const AlgebraElement& ce = c.element();
    for (double lam : eigenvalues(ce.to_hermitian())) {
        if (!(f(lam) - lam >= m - tol.abs) || !(f(lam) > 0.0)) {
            std::ostringstream os;
            os << who << ": f(t) >= t + M fails at eigenvalue " << lam << " of c";
            throw PreconditionError(os.str());
        }
    }
    AlgebraElement fc = apply_function(ce, f, tol);
    AlgebraElement g = fc - ce;
    const ModelKind kind = ce.kind();
    auto through = [&](const AlgebraElement& a, HermitianMatrix (*op)(const HermitianMatrix&, const TolerancePolicy&)) {
        return AlgebraElement::from_hermitian(kind, op(a.to_hermitian(), tol));
    };
    AlgebraElement g_sqrt = through(g, &positive_sqrt);
    AlgebraElement g_inv_sqrt = through(g, &positive_inverse_sqrt);
    AlgebraElement rhs_factor = ce * through(fc, &positive_inverse) * through(g, &positive_inverse);
    return {std::move(fc), std::move(g), std::move(g_sqrt), std::move(g_inv_sqrt), std::move(rhs_factor)};
}

inline void require_same_shape(const ModuleElement& x, const ModuleElement& y, const char* who) {
    detail::require_same_model(x.kind(), y.kind(), who);
    if (x.m() != y.m() || x.k() != y.k()) throw DimensionError(std::string(who) + ": module element shapes differ");
}

}  // namespace detail

/// |y (f(c)-c)^{-1/2} - x (f(c)-c)^{1/2}|^2 + c |x|^2  >=  c f(c)^{-1} (f(c)-c)^{-1} |y|^2
/// for positive central c and f(t) >= t + M. EQUALITY iff y = x f(c).
inline VerificationReport module_hua(const CentralPositive& c, const ModuleElement& x, const ModuleElement& y,
                                     const ScalarFunction& f, const TolerancePolicy& tol = {}) {
    detail::require_same_shape(x, y, "module_hua");
    detail::require_same_model(x.kind(), c.element().kind(), "module_hua");
    if (c.element().dim() != x.k()) throw DimensionError("module_hua: c does not act on the module");
    const auto sc = detail::shifted_central(c, f, tol, "module_hua");

    const ModuleElement z = right_action(y, sc.gap_inv_sqrt) - right_action(x, sc.gap_sqrt);
    const AlgebraElement lhs = inner_product(z, z) + c.element() * inner_product(x, x);
    const AlgebraElement rhs = sc.rhs_factor * inner_product(y, y);

    VerificationReport r = detail::make_report("module-hua", lhs.to_hermitian(), rhs.to_hermitian(), Direction::Forward, tol);
    if (r.verdict != Verdict::Fails) {
        const ModuleElement xf = right_action(x, sc.fc);
        const double slack = tol.rel * (module_norm(y) + module_norm(xf)) + tol.abs;
        r.verdict = module_norm(y - xf) <= slack ? Verdict::Equality : Verdict::Holds;
    }
    return r;
}

/// T: X -> Y is either left multiplication by a matrix or an elementary
/// operator u (x) v. For the latter ||u|| ||v|| stands in for ||T||.
struct ElementaryOperator {
    ModuleElement u;
    ModuleElement v;
};

using LinearMap = std::variant<ComplexMatrix, ElementaryOperator>;

inline ModuleElement apply_map(const LinearMap& t, const ModuleElement& x) {
    if (const auto* m = std::get_if<ComplexMatrix>(&t)) return left_multiply(*m, x);
    const auto& e = std::get<ElementaryOperator>(t);
    return elementary_operator(e.u, e.v, x);
}

inline double map_norm(const LinearMap& t) {
    if (const auto* m = std::get_if<ComplexMatrix>(&t)) return operator_norm(*m);
    const auto& e = std::get<ElementaryOperator>(t);
    return module_norm(e.u) * module_norm(e.v);
}

/// ||y (f(c)-c)^{-1/2} - T(x) (f(c)-c)^{1/2}||^2 + ||c|| ||T||^2 ||x||^2
///   >= || c f(c)^{-1} (f(c)-c)^{-1} |y|^2 ||.
inline VerificationReport norm_hua(const CentralPositive& c, const ModuleElement& x, const ModuleElement& y,
                                   const LinearMap& t, const ScalarFunction& f, const TolerancePolicy& tol = {}) {
    const double norm_t = map_norm(t);
    if (!(norm_t > tol.abs)) throw PreconditionError("norm_hua: T must be non-zero");
    const ModuleElement tx = apply_map(t, x);
    detail::require_same_shape(tx, y, "norm_hua");
    detail::require_same_model(x.kind(), c.element().kind(), "norm_hua");
    if (c.element().dim() != x.k()) throw DimensionError("norm_hua: c does not act on the module");
    const auto sc = detail::shifted_central(c, f, tol, "norm_hua");

    const double first = module_norm(right_action(y, sc.gap_inv_sqrt) - right_action(tx, sc.gap_sqrt));
    const double nx = module_norm(x);
    const double lhs = first * first + c.element().norm() * norm_t * norm_t * nx * nx;
    const double rhs = (sc.rhs_factor * inner_product(y, y)).norm();
    VerificationReport r = detail::make_scalar_report("norm-hua", lhs, rhs, Direction::Forward, tol);
    if (std::holds_alternative<ElementaryOperator>(t)) r.inequality = "norm-hua/elementary";
    return r;
}

namespace detail {

inline void require_jensen_function(const ScalarFunction& f, const char* who) {
    if (f.status() != ConvexityStatus::OperatorConvex) {
        throw PreconditionError(std::string(who) + ": " + f.tag() + " is not flagged operator convex");
    }
    if (!f.nonpositive_at_zero()) {
        throw PreconditionError(std::string(who) + ": need 0 in the domain and f(0) <= 0 for " + f.tag());
    }
}

inline void require_unit_ball(const ModuleElement& x, const TolerancePolicy& tol, const char* who) {
    const double nx = module_norm(x);
    if (nx > 1.0 + tol.abs) {
        std::ostringstream os;
        os << who << ": ||x|| = " << nx << " exceeds 1";
        throw PreconditionError(os.str());
    }
}

}  // namespace detail

/// f(<x, T x>) <= <x, f(T) x> for ||x|| <= 1, T self-adjoint acting on the
/// module by left multiplication, f operator convex with f(0) <= 0.
inline VerificationReport module_jensen(const HermitianMatrix& t, const ModuleElement& x, const ScalarFunction& f,
                                        const TolerancePolicy& tol = {}) {
    detail::require_jensen_function(f, "module_jensen");
    detail::require_unit_ball(x, tol, "module_jensen");
    if (t.dim() != x.m()) throw DimensionError("module_jensen: T does not act on the module");
    const AlgebraElement compressed = inner_product(x, left_multiply(t.matrix(), x));
    const HermitianMatrix ft = apply_function(t, f, tol);
    const AlgebraElement major = inner_product(x, left_multiply(ft.matrix(), x));
    const AlgebraElement minor = apply_function(compressed, f, tol);
    return detail::make_report("module-jensen", major.to_hermitian(), minor.to_hermitian(), Direction::Forward, tol);
}

/// <x, [f(S - sum R_i^* T_i R_i) + sum R_i^* f(T_i) R_i] x>  >=  k^{-1} f(k <x, S x>),
/// k = (1 + sum ||R_i x||^2)^{-1}. Terms with ||R_i x|| <= tol.abs are left
/// out of k (their contribution to the left side vanishes with them).
inline VerificationReport module_hua_jensen(const HermitianMatrix& s, const std::vector<ComplexMatrix>& rs,
                                            const std::vector<HermitianMatrix>& ts, const ModuleElement& x,
                                            const ScalarFunction& f, const TolerancePolicy& tol = {}) {
    detail::require_jensen_function(f, "module_hua_jensen");
    detail::require_unit_ball(x, tol, "module_hua_jensen");
    if (rs.size() != ts.size()) throw DimensionError("module_hua_jensen: need as many R_i as T_i");
    const std::size_t m = x.m();
    if (s.dim() != m) throw DimensionError("module_hua_jensen: S does not act on the module");

    HermitianMatrix inner = s;
    HermitianMatrix major_op = HermitianMatrix::zero(m);
    double weight = 1.0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (ts[i].dim() != m || rs[i].rows() != m || rs[i].cols() != m) {
            throw DimensionError("module_hua_jensen: R_i, T_i must be m x m");
        }
        inner = inner - ts[i].congruence(rs[i]);
        major_op = major_op + apply_function(ts[i], f, tol).congruence(rs[i]);
        const double ri = module_norm(left_multiply(rs[i], x));
        if (ri > tol.abs) weight += ri * ri;
    }
    major_op = major_op + apply_function(inner, f, tol);
    const double k = 1.0 / weight;

    const AlgebraElement major = inner_product(x, left_multiply(major_op.matrix(), x));
    const AlgebraElement xsx = inner_product(x, left_multiply(s.matrix(), x));
    const AlgebraElement minor = apply_function(xsx * k, f, tol) * weight;
    return detail::make_report("module-hua-jensen", major.to_hermitian(), minor.to_hermitian(), Direction::Forward, tol);
}

// ---------------------------------------------------------------------------
// Operator Hua inequality and consequences
// ---------------------------------------------------------------------------

struct OperatorHuaInstance {
    HermitianMatrix b;
    std::vector<HermitianMatrix> as;
    std::vector<ComplexMatrix> cs;
    ScalarFunction f;
};

/// D = (I + sum C_i^* C_i)^{-1/2} and its inverse.
struct HuaNormalizer {
    HermitianMatrix d;
    HermitianMatrix d_inv;
};

inline HuaNormalizer hua_normalizer(const std::vector<ComplexMatrix>& cs, std::size_t n) {
    ComplexMatrix m = ComplexMatrix::identity(n);
    for (const auto& c : cs) m += adjoint_times(c, c);
    const auto sd = spectral_decompose(HermitianMatrix::symmetrize(m));
    return {sd.rebuild([](double t) { return 1.0 / std::sqrt(t); }), sd.rebuild([](double t) { return std::sqrt(t); })};
}

/// Direction implied by the catalog status, or nullopt when unknown.
inline std::optional<Direction> natural_direction(const ScalarFunction& f) {
    switch (f.status()) {
        case ConvexityStatus::OperatorConvex: return Direction::Forward;
        case ConvexityStatus::OperatorConcave: return Direction::Reversed;
        default: return std::nullopt;
    }
}

/// f(B - sum C_i^* A_i C_i) + sum C_i^* f(A_i) C_i  >=  D^{-1} f(D B D) D^{-1}.
/// Reversed for operator concave f. Functions that are neither need `forced`.
inline VerificationReport operator_hua(const OperatorHuaInstance& inst, const TolerancePolicy& tol = {},
                                       std::optional<Direction> forced = std::nullopt) {
    const auto dir = forced ? forced : natural_direction(inst.f);
    if (!dir) {
        throw PreconditionError("operator_hua: " + inst.f.tag() + " is neither operator convex nor concave; force a direction");
    }
    if (inst.as.size() != inst.cs.size()) throw DimensionError("operator_hua: need as many A_i as C_i");
    const std::size_t n = inst.b.dim();
    HermitianMatrix inner = inst.b;
    HermitianMatrix lhs = HermitianMatrix::zero(n);
    for (std::size_t i = 0; i < inst.as.size(); ++i) {
        if (inst.as[i].dim() != n || inst.cs[i].rows() != n || inst.cs[i].cols() != n) {
            throw DimensionError("operator_hua: A_i and C_i must match B");
        }
        inner = inner - inst.as[i].congruence(inst.cs[i]);
        lhs = lhs + apply_function(inst.as[i], inst.f, tol).congruence(inst.cs[i]);
    }
    lhs = apply_function(inner, inst.f, tol) + lhs;
    const HuaNormalizer dn = hua_normalizer(inst.cs, n);
    const HermitianMatrix rhs = apply_function(inst.b.congruence(dn.d.matrix()), inst.f, tol).congruence(dn.d_inv.matrix());
    return detail::make_report("operator-hua", std::move(lhs), rhs, *dir, tol);
}

struct CorollaryVariant {
    enum class Kind { Inverse, Power, Log };
    Kind kind = Kind::Inverse;
    double p = 1.0;

    static CorollaryVariant inverse() { return {Kind::Inverse, -1.0}; }
    static CorollaryVariant power(double p) { return {Kind::Power, p}; }
    static CorollaryVariant log() { return {Kind::Log, 0.0}; }

    std::string label() const {
        switch (kind) {
            case Kind::Inverse: return "inverse";
            case Kind::Power: return "power:" + ScalarFunction::format_number(p);
            case Kind::Log: return "log";
        }
        return "?";
    }
};

/// Items (i)-(iv): t^{-1}, t^p on [-1,0] u [1,2] (forward), t^p on (0,1)
/// (reversed), log t (reversed), for strictly positive B - sum C^*AC and A_i.
inline VerificationReport operator_hua_corollary(const CorollaryVariant& variant, const HermitianMatrix& b,
                                                 const std::vector<HermitianMatrix>& as,
                                                 const std::vector<ComplexMatrix>& cs, const TolerancePolicy& tol = {}) {
    ScalarFunction f;
    Direction dir = Direction::Forward;
    switch (variant.kind) {
        case CorollaryVariant::Kind::Inverse: f = ScalarFunction::inverse(); break;
        case CorollaryVariant::Kind::Log:
            f = ScalarFunction::log();
            dir = Direction::Reversed;
            break;
        case CorollaryVariant::Kind::Power: {
            const double p = variant.p;
            if (p < -1.0 || p > 2.0) throw PreconditionError("operator_hua_corollary: p must lie in [-1, 2]");
            f = ScalarFunction::power(p);
            if (p > 0.0 && p < 1.0) dir = Direction::Reversed;
            break;
        }
    }
    if (as.size() != cs.size()) throw DimensionError("operator_hua_corollary: need as many A_i as C_i");
    HermitianMatrix inner = b;
    for (std::size_t i = 0; i < as.size(); ++i) {
        if (eigenvalues(as[i]).front() <= tol.abs) throw PreconditionError("operator_hua_corollary: A_i must be strictly positive");
        inner = inner - as[i].congruence(cs[i]);
    }
    if (eigenvalues(inner).front() <= tol.abs) {
        throw PreconditionError("operator_hua_corollary: B - sum C^*AC must be strictly positive");
    }
    VerificationReport r = operator_hua({b, as, cs, f}, tol, dir);
    r.inequality = "operator-hua-corollary";
    return r;
}

struct PecaricInstance {
    double delta = 1.0;
    double alpha = 1.0;
    std::vector<double> xs;
};

/// f(delta - sum x) + sum alpha^{-1} f(alpha x_i) >= (alpha+n)/alpha f(alpha delta/(alpha+n))
/// for convex f; reversed for concave f.
inline VerificationReport pecaric_hua(const PecaricInstance& inst, const ScalarFunction& f, const TolerancePolicy& tol = {},
                                      std::optional<Direction> forced = std::nullopt) {
    if (!(inst.alpha > 0.0)) throw PreconditionError("pecaric_hua: alpha must be positive");
    std::optional<Direction> dir = forced;
    if (!dir) {
        if (f.is_convex()) dir = Direction::Forward;
        else if (f.status() == ConvexityStatus::OperatorConcave) dir = Direction::Reversed;
        else throw PreconditionError("pecaric_hua: convexity of " + f.tag() + " unknown; force a direction");
    }
    const double n = static_cast<double>(inst.xs.size());
    const Interval& dom = f.domain();
    auto admit = [&](double t) {
        const double v = admit_spectrum({t}, dom, tol, "pecaric_hua(" + f.tag() + ")").front();
        return v;
    };
    double sum = 0.0, tail = 0.0;
    for (double x : inst.xs) {
        sum += x;
        tail += f(admit(inst.alpha * x)) / inst.alpha;
    }
    const double lhs = f(admit(inst.delta - sum)) + tail;
    const double rhs = (inst.alpha + n) / inst.alpha * f(admit(inst.alpha * inst.delta / (inst.alpha + n)));
    return detail::make_scalar_report("pecaric-hua", lhs, rhs, *dir, tol);
}

/// f(sum E_i^* A_i E_i) <= sum E_i^* f(A_i) E_i with sum E_i^* E_i = I
/// (EqualIdentity) or <= I (other modes, which also need f(0) <= 0).
inline VerificationReport hpj_jensen(const std::vector<HermitianMatrix>& as, const std::vector<ComplexMatrix>& es,
                                     const ScalarFunction& f, ContractionMode mode, const TolerancePolicy& tol = {},
                                     std::optional<Direction> forced = std::nullopt) {
    if (as.empty() || as.size() != es.size()) throw DimensionError("hpj_jensen: need one E_i per A_i");
    const auto dir = forced ? forced : natural_direction(f);
    if (!dir) throw PreconditionError("hpj_jensen: " + f.tag() + " is neither operator convex nor concave; force a direction");
    const std::size_t n = es.front().cols();
    ComplexMatrix norm_sum(n, n);
    for (std::size_t i = 0; i < es.size(); ++i) {
        if (es[i].rows() != as[i].dim() || es[i].cols() != n) throw DimensionError("hpj_jensen: E_i shape mismatch");
        norm_sum += adjoint_times(es[i], es[i]);
    }
    const auto ev = eigenvalues(HermitianMatrix::symmetrize(norm_sum));
    const double slack = tol.rel + tol.abs;
    if (mode == ContractionMode::EqualIdentity) {
        if (std::abs(ev.front() - 1.0) > slack || std::abs(ev.back() - 1.0) > slack) {
            throw PreconditionError("hpj_jensen: sum E_i^* E_i differs from I");
        }
    } else {
        if (ev.back() > 1.0 + slack) throw PreconditionError("hpj_jensen: sum E_i^* E_i exceeds I");
        if (!forced && !f.nonpositive_at_zero()) {
            throw PreconditionError("hpj_jensen: contraction normalization needs 0 in the domain and f(0) <= 0");
        }
    }
    HermitianMatrix combined = HermitianMatrix::zero(n);
    HermitianMatrix major = HermitianMatrix::zero(n);
    for (std::size_t i = 0; i < as.size(); ++i) {
        combined = combined + as[i].congruence(es[i]);
        major = major + apply_function(as[i], f, tol).congruence(es[i]);
    }
    const HermitianMatrix minor = apply_function(combined, f, tol);
    return detail::make_report("hpj-jensen", std::move(major), minor, *dir, tol);
}

}  // namespace huakit
