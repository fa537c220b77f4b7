#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <type_traits>
#include <numeric>
#include <sstream>
#include <vector>

#include "huakit/error.hpp"
#include "huakit/function.hpp"
#include "huakit/matrix.hpp"

namespace huakit {

/// Relative/absolute slack used by every order comparison and domain check.
struct TolerancePolicy {
    double rel = 1e-9;
    double abs = 1e-12;

    TolerancePolicy() = default;
    TolerancePolicy(double r, double a) : rel(r), abs(a) {
        if (!(std::isfinite(r) && r >= 0.0 && std::isfinite(a) && a >= 0.0)) {
            throw PreconditionError("TolerancePolicy: tolerances must be finite and nonnegative");
        }
    }
};

/// H = U diag(eigenvalues) U^*, eigenvalues ascending, U unitary.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    double min() const { return eigenvalues.front(); }
    double max() const { return eigenvalues.back(); }

    /// Rebuilds U diag(g(lambda)) U^*.
    template <class Fn>
    HermitianMatrix rebuild(Fn&& g) const {
        const std::size_t n = eigenvalues.size();
        ComplexMatrix out(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            const double w = g(eigenvalues[k]);
            if (w == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i) {
                const Complex ui = w * eigenvectors(i, k);
                for (std::size_t j = 0; j < n; ++j) out(i, j) += ui * std::conj(eigenvectors(j, k));
            }
        }
        return HermitianMatrix::symmetrize(out);
    }
};

namespace detail {

inline constexpr double kJacobiRelativeThreshold = 1e-14;
inline constexpr int kJacobiMaxSweeps = 100;

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace detail

/// Cyclic complex Jacobi. Each pivot (p, q) is annihilated by the unitary
/// G = diag(1, conj(phase)) * R(c, s), i.e. a phase change that makes a_pq
/// real followed by a real symmetric rotation.
inline SpectralDecomposition spectral_decompose(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    if (n == 0) throw DimensionError("spectral_decompose: empty matrix");
    ComplexMatrix a = h.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double target = detail::kJacobiRelativeThreshold * a.frobenius_norm();
    double off = detail::off_diagonal_norm(a);
    int sweeps = 0;
    while (off > target) {
        if (sweeps == detail::kJacobiMaxSweeps) {
            std::ostringstream os;
            os << "spectral_decompose: no convergence after " << sweeps
               << " sweeps, off-diagonal residual " << off;
            throw ConvergenceError(os.str(), off);
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const Complex phase = apq / mag;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                double t;
                if (std::abs(tau) > 1e150) {
                    t = 0.5 / tau;
                } else {
                    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex gpp = c;
                const Complex gpq = s;
                const Complex gqp = -s * std::conj(phase);
                const Complex gqq = c * std::conj(phase);

                // A <- A G
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex aip = a(i, p);
                    const Complex aiq = a(i, q);
                    a(i, p) = aip * gpp + aiq * gqp;
                    a(i, q) = aip * gpq + aiq * gqq;
                }
                // A <- G^* A
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex apj = a(p, j);
                    const Complex aqj = a(q, j);
                    a(p, j) = std::conj(gpp) * apj + std::conj(gqp) * aqj;
                    a(q, j) = std::conj(gpq) * apj + std::conj(gqq) * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                // V <- V G
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex vip = v(i, p);
                    const Complex viq = v(i, q);
                    v(i, p) = vip * gpp + viq * gqp;
                    v(i, q) = vip * gpq + viq * gqq;
                }
            }
        }
        ++sweeps;
        off = detail::off_diagonal_norm(a);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    SpectralDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

inline std::vector<double> eigenvalues(const HermitianMatrix& h) { return spectral_decompose(h).eigenvalues; }

/// Largest |eigenvalue|, i.e. the operator norm of a Hermitian matrix.
inline double spectral_norm(const HermitianMatrix& h) {
    const auto ev = eigenvalues(h);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

/// Checks each eigenvalue against f's domain; values within tol.abs outside
/// a closed endpoint are clamped onto it, open endpoints must be cleared by
/// tol.abs. Returns the (possibly clamped) eigenvalues.
inline std::vector<double> admit_spectrum(std::vector<double> ev, const Interval& domain,
                                          const TolerancePolicy& tol, const std::string& what) {
    for (double& lam : ev) {
        if (domain.contains(lam) &&
            !(!domain.lo_closed && lam <= domain.lo + tol.abs) &&
            !(!domain.hi_closed && lam >= domain.hi - tol.abs)) {
            continue;
        }
        if (domain.lo_closed && lam < domain.lo && lam >= domain.lo - tol.abs) {
            lam = domain.lo;
            continue;
        }
        if (domain.hi_closed && lam > domain.hi && lam <= domain.hi + tol.abs) {
            lam = domain.hi;
            continue;
        }
        std::ostringstream os;
        os.precision(17);
        os << what << ": eigenvalue " << lam << " outside domain " << domain.to_string();
        throw DomainError(os.str(), lam);
    }
    return ev;
}

/// f(H) = U diag(f(lambda)) U^* for an arbitrary callable, no domain check.
template <class Fn>
    requires(!std::same_as<std::remove_cvref_t<Fn>, ScalarFunction>)
HermitianMatrix apply_function(const HermitianMatrix& h, Fn&& f) {
    return spectral_decompose(h).rebuild(std::forward<Fn>(f));
}

/// Functional calculus for a catalog function, with the spectrum validated
/// against the function's domain.
inline HermitianMatrix apply_function(const HermitianMatrix& h, const ScalarFunction& f,
                                      const TolerancePolicy& tol = {}) {
    SpectralDecomposition sd = spectral_decompose(h);
    sd.eigenvalues = admit_spectrum(std::move(sd.eigenvalues), f.domain(), tol, "apply_function(" + f.tag() + ")");
    return sd.rebuild(f);
}

enum class Verdict { Holds, Equality, Fails };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "HOLDS";
        case Verdict::Equality: return "EQUALITY";
        case Verdict::Fails: return "FAILS";
    }
    return "?";
}

/// Outcome of comparing L >= R in the Loewner order.
struct OrderReport {
    double gap = 0.0;        ///< lambda_min(L - R)
    double threshold = 0.0;  ///< -(rel (|L| + |R|) + abs)
    double deviation = 0.0;  ///< lambda_max(|L - R|)
    Verdict verdict = Verdict::Holds;
};

/// Verdict rules shared by matrix and scalar comparisons.
inline OrderReport classify(double gap, double deviation, double scale, const TolerancePolicy& tol) {
    OrderReport r;
    r.gap = gap;
    r.deviation = deviation;
    const double slack = tol.rel * scale + tol.abs;
    r.threshold = -slack;
    if (gap < r.threshold) {
        r.verdict = Verdict::Fails;
    } else if (deviation <= slack) {
        r.verdict = Verdict::Equality;
    } else {
        r.verdict = Verdict::Holds;
    }
    return r;
}

inline OrderReport loewner_gap(const HermitianMatrix& l, const HermitianMatrix& r, const TolerancePolicy& tol = {}) {
    if (l.dim() != r.dim()) {
        throw DimensionError("loewner_gap: dimension mismatch " + std::to_string(l.dim()) + " vs " +
                             std::to_string(r.dim()));
    }
    const auto diff = eigenvalues(l - r);
    const double dev = std::max(std::abs(diff.front()), std::abs(diff.back()));
    return classify(diff.front(), dev, spectral_norm(l) + spectral_norm(r), tol);
}

/// Scalar version of loewner_gap.
inline OrderReport scalar_gap(double l, double r, const TolerancePolicy& tol = {}) {
    return classify(l - r, std::abs(l - r), std::abs(l) + std::abs(r), tol);
}

/// X^* X, the squared module absolute value in the full matrix model.
inline HermitianMatrix absolute_value_squared(const ComplexMatrix& x) {
    return HermitianMatrix::symmetrize(adjoint_times(x, x));
}

/// Largest singular value, sqrt(lambda_max(X^* X)).
inline double operator_norm(const ComplexMatrix& x) {
    if (x.empty()) throw DimensionError("operator_norm: empty matrix");
    const double top = eigenvalues(absolute_value_squared(x)).back();
    return std::sqrt(std::max(top, 0.0));
}

namespace detail {

inline SpectralDecomposition nonnegative_spectrum(const HermitianMatrix& h, const TolerancePolicy& tol,
                                                  const char* what) {
    SpectralDecomposition sd = spectral_decompose(h);
    sd.eigenvalues = admit_spectrum(std::move(sd.eigenvalues), Interval::nonnegative(), tol, what);
    return sd;
}

inline SpectralDecomposition positive_spectrum(const HermitianMatrix& h, const TolerancePolicy& tol,
                                               const char* what) {
    SpectralDecomposition sd = spectral_decompose(h);
    if (sd.min() <= tol.abs) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": spectrum not strictly positive, lambda_min = " << sd.min();
        throw SingularityError(os.str(), sd.min());
    }
    return sd;
}

}  // namespace detail

inline HermitianMatrix positive_sqrt(const HermitianMatrix& h, const TolerancePolicy& tol = {}) {
    return detail::nonnegative_spectrum(h, tol, "positive_sqrt").rebuild([](double t) { return std::sqrt(t); });
}

inline HermitianMatrix positive_inverse(const HermitianMatrix& h, const TolerancePolicy& tol = {}) {
    return detail::positive_spectrum(h, tol, "positive_inverse").rebuild([](double t) { return 1.0 / t; });
}

/// H^{-1/2} for strictly positive H.
inline HermitianMatrix positive_inverse_sqrt(const HermitianMatrix& h, const TolerancePolicy& tol = {}) {
    return detail::positive_spectrum(h, tol, "positive_inverse_sqrt").rebuild([](double t) {
        return 1.0 / std::sqrt(t);
    });
}

}  // namespace huakit
