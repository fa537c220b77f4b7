#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "huakit/error.hpp"
#include "huakit/function.hpp"
#include "huakit/matrix.hpp"
#include "huakit/spectral.hpp"

namespace huakit {

// Reproducible random streams.
//
// Every draw is a pure function of (master seed, stream label, index, draw
// counter):
//
//   label_hash = FNV-1a-64(label)
//   key        = mix(mix(seed + GOLDEN * label_hash) + GOLDEN2 * index)
//   draw_k     = mix(key + GOLDEN * k)              for k = 1, 2, ...
//
// where mix is the SplitMix64 finalizer and GOLDEN = 0x9e3779b97f4a7c15,
// GOLDEN2 = 0xd1b54a32d192ed03. A stream is therefore a SplitMix64 sequence
// started at `key`, and streams for different (label, index) pairs can be
// created in any order, on any thread.

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t kGolden2 = 0xd1b54a32d192ed03ULL;

constexpr std::uint64_t splitmix_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char ch : s) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

struct SeedSpec {
    std::uint64_t seed = 0;
    std::string label;
    std::uint64_t index = 0;

    std::uint64_t key() const {
        const std::uint64_t base = detail::splitmix_finalize(seed + detail::kGolden * detail::fnv1a(label));
        return detail::splitmix_finalize(base + detail::kGolden2 * index);
    }
};

class Stream {
  public:
    explicit Stream(const SeedSpec& spec) : key_(spec.key()) {}

    std::uint64_t next_u64() {
        ++counter_;
        return detail::splitmix_finalize(key_ + detail::kGolden * counter_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Box-Muller pair as one standard complex Gaussian (each part N(0, 1/2)).
    Complex complex_gaussian() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    /// Standard real Gaussian.
    double gaussian() { return std::sqrt(2.0) * complex_gaussian().real(); }

    std::uint64_t draws() const noexcept { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

inline ComplexMatrix random_gaussian_matrix(std::size_t rows, std::size_t cols, Stream& rng) {
    std::vector<Complex> data(rows * cols);
    for (Complex& z : data) z = rng.complex_gaussian();
    return ComplexMatrix(rows, cols, std::move(data));
}

/// Q factor of a Gram-Schmidt QR of g (diagonal of R kept positive, which
/// makes Q Haar-distributed when g is Gaussian).
inline ComplexMatrix orthonormalize_columns(const ComplexMatrix& g) {
    const std::size_t n = g.rows();
    ComplexMatrix q = g;
    for (std::size_t k = 0; k < g.cols(); ++k) {
        // Two passes of modified Gram-Schmidt keep Q unitary to ~1e-15.
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < k; ++j) {
                Complex dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, j)) * q(i, k);
                for (std::size_t i = 0; i < n; ++i) q(i, k) -= dot * q(i, j);
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, k));
        norm = std::sqrt(norm);
        if (!(norm > 1e-300)) throw PreconditionError("orthonormalize_columns: rank-deficient input");
        for (std::size_t i = 0; i < n; ++i) q(i, k) /= norm;
    }
    return q;
}

inline ComplexMatrix random_unitary(std::size_t n, Stream& rng) {
    return orthonormalize_columns(random_gaussian_matrix(n, n, rng));
}

/// U diag(eigs) U^* with the given eigenvector basis.
inline HermitianMatrix with_spectrum(const ComplexMatrix& u, std::span<const double> eigs) {
    const SpectralDecomposition sd{std::vector<double>(eigs.begin(), eigs.end()), u};
    return sd.rebuild([](double t) { return t; });
}

/// Haar-random eigenbasis, eigenvalues uniform in the closed interval j.
inline HermitianMatrix random_hermitian_in_interval(std::size_t n, const Interval& j, Stream& rng) {
    if (n == 0) throw DimensionError("random_hermitian_in_interval: n must be >= 1");
    if (!j.is_bounded()) throw PreconditionError("random_hermitian_in_interval: interval " + j.to_string() + " is unbounded");
    if (j.is_empty()) throw PreconditionError("random_hermitian_in_interval: empty interval");
    const ComplexMatrix u = random_unitary(n, rng);
    std::vector<double> eigs(n);
    for (double& e : eigs) e = rng.uniform(j.lo, j.hi);
    return with_spectrum(u, eigs);
}

inline HermitianMatrix random_hermitian_in_interval(std::size_t n, const Interval& j, const SeedSpec& seed) {
    Stream rng(seed);
    return random_hermitian_in_interval(n, j, rng);
}

enum class ContractionMode {
    EqualIdentity,  ///< sum E_i^* E_i = I
    AtMostIdentity, ///< sum E_i^* E_i <= I
    Strict,         ///< sum E_i^* E_i < I
};

inline const char* to_string(ContractionMode m) {
    switch (m) {
        case ContractionMode::EqualIdentity: return "equal";
        case ContractionMode::AtMostIdentity: return "leq";
        case ContractionMode::Strict: return "strict";
    }
    return "?";
}

/// Normalizes raw operators G_i to E_i = G_i S^{-1/2} W, S = sum G_i^* G_i,
/// so that sum E_i^* E_i = W^* W. W = I for EqualIdentity; otherwise
/// W = diag(sqrt(s)) V^* with s_k in (0, 1] (Strict: s_k <= 0.95).
inline std::vector<ComplexMatrix> normalize_contraction_family(const std::vector<ComplexMatrix>& raw,
                                                               ContractionMode mode, Stream& rng) {
    const std::size_t n = raw.front().cols();
    ComplexMatrix sum(n, n);
    for (const auto& g : raw) sum += adjoint_times(g, g);
    const HermitianMatrix s = HermitianMatrix::symmetrize(sum);
    const auto sd = spectral_decompose(s);
    if (!(sd.min() > 1e-10 * std::max(1.0, sd.max()))) {
        throw SingularityError("contraction family: raw sum numerically singular", sd.min());
    }
    ComplexMatrix scale = sd.rebuild([](double t) { return 1.0 / std::sqrt(t); }).matrix();
    if (mode != ContractionMode::EqualIdentity) {
        const ComplexMatrix v = random_unitary(n, rng);
        std::vector<double> root(n);
        for (double& r : root) {
            const double sk = mode == ContractionMode::Strict ? rng.uniform(0.05, 0.95) : 1.0 - rng.uniform();
            r = std::sqrt(sk);
        }
        scale = scale * (ComplexMatrix::diagonal(std::span<const double>(root)) * v.adjoint());
    }
    std::vector<ComplexMatrix> out;
    out.reserve(raw.size());
    for (const auto& g : raw) out.push_back(g * scale);
    return out;
}

inline std::vector<ComplexMatrix> random_contraction_family(std::size_t n, std::size_t count, ContractionMode mode,
                                                            Stream& rng) {
    if (count == 0) throw PreconditionError("random_contraction_family: count must be >= 1");
    constexpr int kRetryCap = 16;
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
        std::vector<ComplexMatrix> raw;
        raw.reserve(count);
        for (std::size_t i = 0; i < count; ++i) raw.push_back(random_gaussian_matrix(n, n, rng));
        try {
            return normalize_contraction_family(raw, mode, rng);
        } catch (const SingularityError&) {
            continue;
        }
    }
    throw SingularityError("random_contraction_family: retry cap reached", 0.0);
}

inline std::vector<ComplexMatrix> random_contraction_family(std::size_t n, std::size_t count, ContractionMode mode,
                                                            const SeedSpec& seed) {
    Stream rng(seed);
    return random_contraction_family(n, count, mode, rng);
}

}  // namespace huakit
