#pragma once

// Reference computations used by the tests. They avoid the library's
// eigensolver so they can check it.

#include <cmath>
#include <complex>
#include <vector>

#include "huakit.hpp"

namespace oracle {

using huakit::Complex;
using huakit::ComplexMatrix;
using huakit::HermitianMatrix;

inline double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

/// Eigenvalues of [[a, b], [conj b, d]] in ascending order.
inline std::pair<double, double> eig2(double a, Complex b, double d) {
    const double mid = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), std::abs(b));
    return {mid - rad, mid + rad};
}

/// Cholesky attempt on H + shift*I; succeeds iff H + shift*I is positive definite.
inline bool cholesky_ok(const HermitianMatrix& h, double shift) {
    const std::size_t n = h.dim();
    std::vector<Complex> l(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = h(j, j).real() + shift;
        for (std::size_t k = 0; k < j; ++k) diag -= std::norm(l[j * n + k]);
        if (!(diag > 0.0)) return false;
        const double ljj = std::sqrt(diag);
        l[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex s = h(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * std::conj(l[j * n + k]);
            l[i * n + j] = s / ljj;
        }
    }
    return true;
}

/// Smallest eigenvalue by bisection on Cholesky feasibility, bracketed by
/// Gershgorin discs. Independent of the Jacobi solver.
inline double min_eigenvalue(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) r += std::abs(h(i, j));
        const double c = h(i, i).real();
        lo = i == 0 ? c - r : std::min(lo, c - r);
        hi = i == 0 ? c + r : std::max(hi, c + r);
    }
    lo -= 1.0;
    // -lambda_min lies in (-hi, -lo]; find the smallest shift making H + shift I PD.
    double a = -hi, b = -lo;
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        (cholesky_ok(h, mid) ? b : a) = mid;
    }
    return -b;
}

/// Random Hermitian with Gaussian entries, built directly from the stream.
inline HermitianMatrix gaussian_hermitian(std::size_t n, huakit::Stream& rng) {
    const ComplexMatrix g = huakit::random_gaussian_matrix(n, n, rng);
    return HermitianMatrix::symmetrize(g);
}

/// Reconstructs U diag(lambda) U^* by explicit products.
inline ComplexMatrix reconstruct(const huakit::SpectralDecomposition& sd) {
    const std::size_t n = sd.eigenvalues.size();
    ComplexMatrix lam(n, n);
    for (std::size_t i = 0; i < n; ++i) lam(i, i) = sd.eigenvalues[i];
    return sd.eigenvectors * lam * sd.eigenvectors.adjoint();
}

}  // namespace oracle
