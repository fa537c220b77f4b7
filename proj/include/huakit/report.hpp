#pragma once

#include <cstdint>
#include <string>

#include "huakit/matrix.hpp"
#include "huakit/spectral.hpp"

namespace huakit {

/// FORWARD: LHS >= RHS is asserted. REVERSED: LHS <= RHS.
enum class Direction { Forward, Reversed };

inline const char* to_string(Direction d) { return d == Direction::Forward ? "forward" : "reversed"; }

/// Result of one verifier call. Scalar inequalities carry 1x1 payloads.
/// `gap` is lambda_min(LHS - RHS) for FORWARD and lambda_min(RHS - LHS)
/// for REVERSED, so a nonnegative gap always means "holds".
struct VerificationReport {
    std::string inequality;
    HermitianMatrix lhs;
    HermitianMatrix rhs;
    double gap = 0.0;
    double threshold = 0.0;
    Verdict verdict = Verdict::Holds;
    Direction direction = Direction::Forward;
    std::uint64_t seed = 0;

    bool holds() const noexcept { return verdict != Verdict::Fails; }
    bool is_equality() const noexcept { return verdict == Verdict::Equality; }

    /// Scalar LHS/RHS when the payload is 1x1.
    double lhs_scalar() const { return lhs(0, 0).real(); }
    double rhs_scalar() const { return rhs(0, 0).real(); }
};

namespace detail {

inline VerificationReport make_report(std::string id, HermitianMatrix lhs, HermitianMatrix rhs, Direction dir,
                                      const TolerancePolicy& tol) {
    const OrderReport order = dir == Direction::Forward ? loewner_gap(lhs, rhs, tol) : loewner_gap(rhs, lhs, tol);
    VerificationReport r;
    r.inequality = std::move(id);
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    r.gap = order.gap;
    r.threshold = order.threshold;
    r.verdict = order.verdict;
    r.direction = dir;
    return r;
}

inline VerificationReport make_scalar_report(std::string id, double lhs, double rhs, Direction dir,
                                             const TolerancePolicy& tol) {
    const OrderReport order = dir == Direction::Forward ? scalar_gap(lhs, rhs, tol) : scalar_gap(rhs, lhs, tol);
    VerificationReport r;
    r.inequality = std::move(id);
    r.lhs = HermitianMatrix::scalar(lhs);
    r.rhs = HermitianMatrix::scalar(rhs);
    r.gap = order.gap;
    r.threshold = order.threshold;
    r.verdict = order.verdict;
    r.direction = dir;
    return r;
}

}  // namespace detail

}  // namespace huakit
