#pragma once

#include <cmath>
#include <concepts>
#include <type_traits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "huakit/error.hpp"
#include "huakit/function.hpp"
#include "huakit/matrix.hpp"
#include "huakit/spectral.hpp"

namespace huakit {

// Finite-dimensional Hilbert C*-module models.
//
//   FULL(m, k):     X = m x k complex matrices over A = M_k(C), <x, y> = x^* y,
//                   right action x.a = matrix product.
//   DIAGONAL(m, k): X = m-tuples of diagonal k x k matrices over the diagonal
//                   algebra D_k. A module element is stored as an m x k matrix
//                   whose row j holds the diagonal of the j-th component;
//                   <x, y>_s = sum_j conj(x_js) y_js, and a acts slotwise.
//
// The full algebra has trivial center (scalars), the diagonal algebra is
// commutative, so DIAGONAL supplies non-scalar central elements.

enum class ModelKind { Full, Diagonal };

inline const char* to_string(ModelKind k) { return k == ModelKind::Full ? "full" : "diagonal"; }

namespace detail {

inline void require_same_model(ModelKind a, ModelKind b, const char* what) {
    if (a != b) {
        throw PreconditionError(std::string(what) + ": model mismatch (" + to_string(a) + " vs " + to_string(b) + ")");
    }
}

}  // namespace detail

/// Element of the coefficient algebra: a k x k matrix (FULL) or the k
/// diagonal entries of a diagonal matrix (DIAGONAL).
class AlgebraElement {
  public:
    static AlgebraElement full(ComplexMatrix a) {
        if (!a.is_square()) throw DimensionError("AlgebraElement: full payload must be square, got " + a.shape());
        return AlgebraElement(ModelKind::Full, std::move(a));
    }

    static AlgebraElement diagonal(std::vector<Complex> d) {
        return AlgebraElement(ModelKind::Diagonal, std::move(d));
    }

    static AlgebraElement identity(ModelKind kind, std::size_t k) {
        if (kind == ModelKind::Full) return full(ComplexMatrix::identity(k));
        return diagonal(std::vector<Complex>(k, 1.0));
    }

    static AlgebraElement from_hermitian(ModelKind kind, const HermitianMatrix& h) {
        if (kind == ModelKind::Full) return full(h.matrix());
        std::vector<Complex> d(h.dim());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = h(i, i);
        return diagonal(std::move(d));
    }

    ModelKind kind() const noexcept { return kind_; }

    std::size_t dim() const {
        return kind_ == ModelKind::Full ? std::get<ComplexMatrix>(payload_).rows()
                                        : std::get<std::vector<Complex>>(payload_).size();
    }

    const ComplexMatrix& full_payload() const { return std::get<ComplexMatrix>(payload_); }
    const std::vector<Complex>& diagonal_payload() const { return std::get<std::vector<Complex>>(payload_); }

    /// The k x k matrix this element represents.
    ComplexMatrix to_matrix() const {
        if (kind_ == ModelKind::Full) return full_payload();
        return ComplexMatrix::diagonal(std::span<const Complex>(diagonal_payload()));
    }

    /// Hermitian part (symmetrized) as a k x k matrix.
    HermitianMatrix to_hermitian() const { return HermitianMatrix::symmetrize(to_matrix()); }

    AlgebraElement adjoint() const {
        if (kind_ == ModelKind::Full) return full(full_payload().adjoint());
        auto d = diagonal_payload();
        for (Complex& z : d) z = std::conj(z);
        return diagonal(std::move(d));
    }

    /// C*-norm: operator norm (FULL) or max modulus (DIAGONAL).
    double norm() const {
        if (kind_ == ModelKind::Full) return operator_norm(full_payload());
        double m = 0.0;
        for (const Complex& z : diagonal_payload()) m = std::max(m, std::abs(z));
        return m;
    }

    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
        detail::require_same_model(a.kind_, b.kind_, "AlgebraElement *");
        if (a.kind_ == ModelKind::Full) return full(a.full_payload() * b.full_payload());
        return zip(a, b, [](Complex x, Complex y) { return x * y; });
    }

    friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
        detail::require_same_model(a.kind_, b.kind_, "AlgebraElement +");
        if (a.kind_ == ModelKind::Full) return full(a.full_payload() + b.full_payload());
        return zip(a, b, [](Complex x, Complex y) { return x + y; });
    }

    friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
        detail::require_same_model(a.kind_, b.kind_, "AlgebraElement -");
        if (a.kind_ == ModelKind::Full) return full(a.full_payload() - b.full_payload());
        return zip(a, b, [](Complex x, Complex y) { return x - y; });
    }

    friend AlgebraElement operator*(const AlgebraElement& a, Complex s) {
        if (a.kind_ == ModelKind::Full) return full(a.full_payload() * s);
        auto d = a.diagonal_payload();
        for (Complex& z : d) z *= s;
        return diagonal(std::move(d));
    }

  private:
    AlgebraElement(ModelKind kind, std::variant<ComplexMatrix, std::vector<Complex>> payload)
        : kind_(kind), payload_(std::move(payload)) {}

    template <class Op>
    static AlgebraElement zip(const AlgebraElement& a, const AlgebraElement& b, Op op) {
        const auto& x = a.diagonal_payload();
        const auto& y = b.diagonal_payload();
        if (x.size() != y.size()) throw DimensionError("AlgebraElement: diagonal length mismatch");
        std::vector<Complex> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = op(x[i], y[i]);
        return diagonal(std::move(out));
    }

    ModelKind kind_;
    std::variant<ComplexMatrix, std::vector<Complex>> payload_;
};

/// Functional calculus inside the algebra. Diagonal elements are lifted to a
/// diagonal HermitianMatrix for the domain check and evaluation.
inline AlgebraElement apply_function(const AlgebraElement& a, const ScalarFunction& f, const TolerancePolicy& tol = {}) {
    return AlgebraElement::from_hermitian(a.kind(), apply_function(a.to_hermitian(), f, tol));
}

template <class Fn>
    requires(!std::same_as<std::remove_cvref_t<Fn>, ScalarFunction>)
AlgebraElement apply_function(const AlgebraElement& a, Fn&& f) {
    return AlgebraElement::from_hermitian(a.kind(), apply_function(a.to_hermitian(), std::forward<Fn>(f)));
}

/// Positive central element of the algebra, validated on construction.
class CentralPositive {
  public:
    /// FULL: must be a nonnegative multiple of the identity. DIAGONAL: must
    /// have nonnegative real entries.
    static CentralPositive make(const AlgebraElement& c, const TolerancePolicy& tol = {}) {
        if (c.kind() == ModelKind::Full) {
            const ComplexMatrix& m = c.full_payload();
            const Complex gamma = m(0, 0);
            const double slack = tol.rel * std::abs(gamma) + tol.abs;
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) {
                    const Complex expected = i == j ? gamma : Complex{};
                    if (std::abs(m(i, j) - expected) > slack) {
                        throw PreconditionError("CentralPositive: full-model element is not a multiple of the identity");
                    }
                }
            if (std::abs(gamma.imag()) > slack || gamma.real() < -tol.abs) {
                throw PreconditionError("CentralPositive: scalar is not real nonnegative");
            }
            return CentralPositive(AlgebraElement::full(ComplexMatrix::identity(m.rows()) * std::max(gamma.real(), 0.0)));
        }
        auto d = c.diagonal_payload();
        for (Complex& z : d) {
            if (std::abs(z.imag()) > tol.rel * std::abs(z) + tol.abs || z.real() < -tol.abs) {
                throw PreconditionError("CentralPositive: diagonal entry is not real nonnegative");
            }
            z = std::max(z.real(), 0.0);
        }
        return CentralPositive(AlgebraElement::diagonal(std::move(d)));
    }

    static CentralPositive scalar(ModelKind kind, std::size_t k, double gamma) {
        return make(AlgebraElement::identity(kind, k) * gamma);
    }

    const AlgebraElement& element() const noexcept { return c_; }
    operator const AlgebraElement&() const noexcept { return c_; }

  private:
    explicit CentralPositive(AlgebraElement c) : c_(std::move(c)) {}
    AlgebraElement c_;
};

/// Element of a module model; payload is always an m x k matrix (see above).
class ModuleElement {
  public:
    ModuleElement(ModelKind kind, ComplexMatrix data) : kind_(kind), data_(std::move(data)) {}

    static ModuleElement zero(ModelKind kind, std::size_t m, std::size_t k) { return {kind, ComplexMatrix(m, k)}; }

    ModelKind kind() const noexcept { return kind_; }
    std::size_t m() const noexcept { return data_.rows(); }
    std::size_t k() const noexcept { return data_.cols(); }
    const ComplexMatrix& data() const noexcept { return data_; }

    friend ModuleElement operator+(const ModuleElement& a, const ModuleElement& b) {
        detail::require_same_model(a.kind_, b.kind_, "ModuleElement +");
        return {a.kind_, a.data_ + b.data_};
    }
    friend ModuleElement operator-(const ModuleElement& a, const ModuleElement& b) {
        detail::require_same_model(a.kind_, b.kind_, "ModuleElement -");
        return {a.kind_, a.data_ - b.data_};
    }
    friend ModuleElement operator*(const ModuleElement& a, Complex s) { return {a.kind_, a.data_ * s}; }
    friend ModuleElement operator*(Complex s, const ModuleElement& a) { return {a.kind_, a.data_ * s}; }

  private:
    ModelKind kind_;
    ComplexMatrix data_;
};

inline AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y) {
    detail::require_same_model(x.kind(), y.kind(), "inner_product");
    if (x.kind() == ModelKind::Full) return AlgebraElement::full(adjoint_times(x.data(), y.data()));
    if (x.m() != y.m() || x.k() != y.k()) throw DimensionError("inner_product: shape mismatch");
    std::vector<Complex> d(x.k());
    for (std::size_t j = 0; j < x.m(); ++j)
        for (std::size_t s = 0; s < x.k(); ++s) d[s] += std::conj(x.data()(j, s)) * y.data()(j, s);
    return AlgebraElement::diagonal(std::move(d));
}

/// |x|^2 = <x, x> as a Hermitian k x k matrix.
inline HermitianMatrix module_abs_squared(const ModuleElement& x) { return inner_product(x, x).to_hermitian(); }

inline double module_norm(const ModuleElement& x) { return std::sqrt(inner_product(x, x).norm()); }

inline ModuleElement right_action(const ModuleElement& x, const AlgebraElement& a) {
    detail::require_same_model(x.kind(), a.kind(), "right_action");
    if (x.kind() == ModelKind::Full) return {x.kind(), x.data() * a.full_payload()};
    const auto& d = a.diagonal_payload();
    if (d.size() != x.k()) throw DimensionError("right_action: diagonal length mismatch");
    ComplexMatrix out = x.data();
    for (std::size_t j = 0; j < x.m(); ++j)
        for (std::size_t s = 0; s < x.k(); ++s) out(j, s) *= d[s];
    return {x.kind(), std::move(out)};
}

/// x -> T x for an operator T acting on the m-index. Left multiplication by a
/// p x m matrix is a right-module map in both models.
inline ModuleElement left_multiply(const ComplexMatrix& t, const ModuleElement& x) { return {x.kind(), t * x.data()}; }

/// (u (x) v)(x) = u <v, x>.
inline ModuleElement elementary_operator(const ModuleElement& u, const ModuleElement& v, const ModuleElement& x) {
    detail::require_same_model(u.kind(), v.kind(), "elementary_operator");
    return right_action(u, inner_product(v, x));
}

}  // namespace huakit
