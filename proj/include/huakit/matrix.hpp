#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "huakit/error.hpp"

namespace huakit {

using Complex = std::complex<double>;

/// Dense complex matrix stored row-major. A plain value type: every
/// arithmetic operation returns a new matrix.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    /// Zero matrix of the given shape.
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_) {
            throw DimensionError("ComplexMatrix: " + std::to_string(data_.size()) +
                                 " entries for a " + std::to_string(rows_) + "x" +
                                 std::to_string(cols_) + " matrix");
        }
        for (const Complex& z : data_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw DomainError("ComplexMatrix: non-finite entry", z.real());
            }
        }
    }

    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_) {
                throw DimensionError("ComplexMatrix: ragged initializer list");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const Complex> d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    /// Column vector (n x 1).
    static ComplexMatrix column(std::span<const Complex> v) {
        return ComplexMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    Complex operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const Complex> entries() const noexcept { return data_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const Complex& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
        require_same_shape(rhs, "+");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
        require_same_shape(rhs, "-");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
        return *this;
    }

    ComplexMatrix& operator*=(Complex s) {
        for (Complex& z : data_) z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator-(ComplexMatrix m) { return m *= -1.0; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) {
            throw DimensionError("ComplexMatrix: cannot multiply " + a.shape() + " by " + b.shape());
        }
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t l = 0; l < a.cols_; ++l) {
                const Complex ail = a(i, l);
                if (ail == Complex{}) continue;
                const Complex* brow = &b.data_[l * b.cols_];
                Complex* orow = &out.data_[i * b.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += ail * brow[j];
            }
        }
        return out;
    }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  private:
    void require_same_shape(const ComplexMatrix& rhs, const char* op) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
            throw DimensionError(std::string("ComplexMatrix: shape mismatch in '") + op + "': " +
                                 shape() + " vs " + rhs.shape());
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// A^* B without forming A^*.
inline ComplexMatrix adjoint_times(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows()) {
        throw DimensionError("adjoint_times: " + a.shape() + " vs " + b.shape());
    }
    ComplexMatrix out(a.cols(), b.cols());
    for (std::size_t l = 0; l < a.rows(); ++l)
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const Complex ali = std::conj(a(l, i));
            if (ali == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += ali * b(l, j);
        }
    return out;
}

/// Self-adjoint square matrix. Construction from arbitrary data symmetrizes
/// via (M + M^*)/2, so the stored entries are exactly Hermitian.
class HermitianMatrix {
  public:
    /// Relative asymmetry accepted by the checked constructor.
    static constexpr double kAsymmetryTolerance = 1e-12;

    HermitianMatrix() = default;

    /// Checked: rejects inputs whose asymmetry exceeds 1e-12 relative to
    /// their Frobenius norm.
    explicit HermitianMatrix(const ComplexMatrix& m) : m_(symmetrized(m)) {
        const double asym = (m - m.adjoint()).frobenius_norm();
        if (asym > kAsymmetryTolerance * std::max(1.0, m.frobenius_norm())) {
            throw PreconditionError("HermitianMatrix: input is not self-adjoint (asymmetry " +
                                    std::to_string(asym) + ")");
        }
    }

    HermitianMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
        : HermitianMatrix(ComplexMatrix(rows)) {}

    /// Unchecked: projects onto the Hermitian part. For results of
    /// computations that are Hermitian up to roundoff.
    static HermitianMatrix symmetrize(const ComplexMatrix& m) {
        HermitianMatrix h;
        h.m_ = symmetrized(m);
        return h;
    }

    static HermitianMatrix identity(std::size_t n) { return symmetrize(ComplexMatrix::identity(n)); }

    static HermitianMatrix zero(std::size_t n) { return symmetrize(ComplexMatrix(n, n)); }

    static HermitianMatrix diagonal(std::span<const double> d) {
        return symmetrize(ComplexMatrix::diagonal(d));
    }

    static HermitianMatrix scalar(double s) {
        const double d[] = {s};
        return diagonal(d);
    }

    std::size_t dim() const noexcept { return m_.rows(); }
    Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const ComplexMatrix& matrix() const noexcept { return m_; }
    double frobenius_norm() const { return m_.frobenius_norm(); }

    /// X^* H X.
    HermitianMatrix congruence(const ComplexMatrix& x) const { return symmetrize(adjoint_times(x, m_ * x)); }

    friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
        return symmetrize(a.m_ + b.m_);
    }
    friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
        return symmetrize(a.m_ - b.m_);
    }
    friend HermitianMatrix operator*(const HermitianMatrix& a, double s) { return symmetrize(a.m_ * s); }
    friend HermitianMatrix operator*(double s, const HermitianMatrix& a) { return symmetrize(a.m_ * s); }
    friend ComplexMatrix operator*(const HermitianMatrix& a, const HermitianMatrix& b) { return a.m_ * b.m_; }
    friend ComplexMatrix operator*(const HermitianMatrix& a, const ComplexMatrix& b) { return a.m_ * b; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const HermitianMatrix& b) { return a * b.m_; }

    friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

  private:
    static ComplexMatrix symmetrized(const ComplexMatrix& m) {
        if (!m.is_square()) throw DimensionError("HermitianMatrix: non-square input " + m.shape());
        ComplexMatrix out(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            out(i, i) = m(i, i).real();
            for (std::size_t j = i + 1; j < m.cols(); ++j) {
                const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
                out(i, j) = z;
                out(j, i) = std::conj(z);
            }
        }
        return out;
    }

    ComplexMatrix m_;
};

}  // namespace huakit
