#pragma once

#include <cstdlib>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "huakit/error.hpp"

namespace huakit {

/// Real interval with independently open or closed ends. Infinite ends are
/// always open.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_closed = false;
    bool hi_closed = false;

    static Interval closed(double a, double b) { return {a, b, std::isfinite(a), std::isfinite(b)}; }
    static Interval open(double a, double b) { return {a, b, false, false}; }
    static Interval real_line() { return {}; }
    static Interval nonnegative() { return {0.0, std::numeric_limits<double>::infinity(), true, false}; }
    static Interval positive() { return open(0.0, std::numeric_limits<double>::infinity()); }

    bool is_empty() const {
        if (lo > hi) return true;
        if (lo == hi) return !(lo_closed && hi_closed);
        return false;
    }

    bool is_bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

    bool contains(double t) const {
        const bool above = lo_closed ? t >= lo : t > lo;
        const bool below = hi_closed ? t <= hi : t < hi;
        return above && below;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << (lo_closed ? '[' : '(') << lo << ", " << hi << (hi_closed ? ']' : ')');
        return os.str();
    }

    friend bool operator==(const Interval&, const Interval&) = default;
};

enum class ConvexityStatus { OperatorConvex, OperatorConcave, ConvexNotOperatorConvex, Unknown };

inline const char* to_string(ConvexityStatus s) {
    switch (s) {
        case ConvexityStatus::OperatorConvex: return "operator-convex";
        case ConvexityStatus::OperatorConcave: return "operator-concave";
        case ConvexityStatus::ConvexNotOperatorConvex: return "convex-not-operator-convex";
        case ConvexityStatus::Unknown: return "unknown";
    }
    return "unknown";
}

enum class FunctionKind { Power, Inverse, Log, Exp, Affine, Cube, Custom };

/// A real function of one variable together with the facts the verifiers
/// need about it: its domain, a bounded sampling window inside the domain,
/// its (operator) convexity status and, when f(t) >= t + M on [0, inf) for
/// some M > 0, that shift M.
class ScalarFunction {
  public:
    FunctionKind kind() const noexcept { return kind_; }
    const std::string& tag() const noexcept { return tag_; }
    const Interval& domain() const noexcept { return domain_; }
    const Interval& window() const noexcept { return window_; }
    ConvexityStatus status() const noexcept { return status_; }
    std::optional<double> shift() const noexcept { return shift_; }
    double exponent() const noexcept { return p_; }

    double operator()(double t) const {
        switch (kind_) {
            case FunctionKind::Power:
                if (p_ == 2.0) return t * t;
                if (p_ == 1.0) return t;
                return std::pow(t, p_);
            case FunctionKind::Inverse: return 1.0 / t;
            case FunctionKind::Log: return std::log(t);
            case FunctionKind::Exp: return std::exp(t);
            case FunctionKind::Affine: return a_ * t + b_;
            case FunctionKind::Cube: return t * t * t;
            case FunctionKind::Custom: return interpolate(t);
        }
        return std::numeric_limits<double>::quiet_NaN();
    }

    /// True when 0 lies in the domain and f(0) <= 0.
    bool nonpositive_at_zero() const { return domain_.contains(0.0) && (*this)(0.0) <= 0.0; }

    bool is_convex() const {
        return status_ == ConvexityStatus::OperatorConvex ||
               status_ == ConvexityStatus::ConvexNotOperatorConvex;
    }

    /// Same function, different sampling window (must stay inside the domain).
    ScalarFunction with_window(const Interval& w) const {
        if (w.is_empty() || !w.is_bounded() || !domain_.contains(w.lo) || !domain_.contains(w.hi)) {
            throw PreconditionError("ScalarFunction: window " + w.to_string() + " not inside domain " +
                                    domain_.to_string() + " of " + tag_);
        }
        ScalarFunction f = *this;
        f.window_ = w;
        return f;
    }

    static ScalarFunction power(double p) {
        ScalarFunction f;
        f.kind_ = FunctionKind::Power;
        f.p_ = p;
        f.tag_ = "power:" + format_number(p);
        if (p > 0.0) {
            f.domain_ = Interval::nonnegative();
            f.window_ = Interval::closed(0.0, 3.0);
        } else {
            f.domain_ = Interval::positive();
            f.window_ = Interval::closed(0.2, 3.0);
        }
        if ((p >= 1.0 && p <= 2.0) || (p >= -1.0 && p <= 0.0)) {
            f.status_ = ConvexityStatus::OperatorConvex;
        } else if (p > 0.0 && p < 1.0) {
            f.status_ = ConvexityStatus::OperatorConcave;
        } else {
            f.status_ = ConvexityStatus::ConvexNotOperatorConvex;
        }
        return f;
    }

    /// t^2 on the whole real line.
    static ScalarFunction square() {
        ScalarFunction f = power(2.0);
        f.tag_ = "square";
        f.domain_ = Interval::real_line();
        f.window_ = Interval::closed(-2.0, 2.0);
        return f;
    }

    static ScalarFunction inverse() {
        ScalarFunction f;
        f.kind_ = FunctionKind::Inverse;
        f.tag_ = "inverse";
        f.domain_ = Interval::positive();
        f.window_ = Interval::closed(0.2, 3.0);
        f.status_ = ConvexityStatus::OperatorConvex;
        return f;
    }

    static ScalarFunction log() {
        ScalarFunction f;
        f.kind_ = FunctionKind::Log;
        f.tag_ = "log";
        f.domain_ = Interval::positive();
        f.window_ = Interval::closed(0.2, 3.0);
        f.status_ = ConvexityStatus::OperatorConcave;
        return f;
    }

    static ScalarFunction exp() {
        ScalarFunction f;
        f.kind_ = FunctionKind::Exp;
        f.tag_ = "exp";
        f.domain_ = Interval::real_line();
        f.window_ = Interval::closed(0.0, 1.0);
        f.status_ = ConvexityStatus::ConvexNotOperatorConvex;
        f.shift_ = 1.0;  // e^t >= t + 1
        return f;
    }

    static ScalarFunction cube() {
        ScalarFunction f;
        f.kind_ = FunctionKind::Cube;
        f.tag_ = "cube";
        f.domain_ = Interval::nonnegative();
        f.window_ = Interval::closed(0.0, 2.0);
        f.status_ = ConvexityStatus::ConvexNotOperatorConvex;
        return f;
    }

    /// a t + b on the real line. Operator convex and concave at once; flagged convex.
    static ScalarFunction affine(double a, double b) {
        ScalarFunction f;
        f.kind_ = FunctionKind::Affine;
        f.a_ = a;
        f.b_ = b;
        f.tag_ = "affine:" + format_number(a) + "," + format_number(b);
        f.domain_ = Interval::real_line();
        f.window_ = Interval::closed(-2.0, 2.0);
        f.status_ = ConvexityStatus::OperatorConvex;
        if (a >= 1.0 && b > 0.0) f.shift_ = b;
        return f;
    }

    /// Piecewise-linear interpolation of (t, f(t)) knots with strictly
    /// increasing abscissae. Convexity status is unknown.
    static ScalarFunction custom(std::vector<std::pair<double, double>> knots) {
        if (knots.size() < 2) throw PreconditionError("custom function needs at least two knots");
        for (std::size_t i = 1; i < knots.size(); ++i) {
            if (!(knots[i].first > knots[i - 1].first)) {
                throw PreconditionError("custom function knots must be strictly increasing");
            }
        }
        ScalarFunction f;
        f.kind_ = FunctionKind::Custom;
        f.tag_ = "table:";
        for (std::size_t i = 0; i < knots.size(); ++i) {
            if (i) f.tag_ += ',';
            f.tag_ += format_number(knots[i].first) + "/" + format_number(knots[i].second);
        }
        f.domain_ = Interval::closed(knots.front().first, knots.back().first);
        f.window_ = f.domain_;
        f.status_ = ConvexityStatus::Unknown;
        f.knots_ = std::move(knots);
        return f;
    }

    friend bool operator==(const ScalarFunction& a, const ScalarFunction& b) {
        return a.tag_ == b.tag_ && a.domain_ == b.domain_ && a.window_ == b.window_;
    }

    static std::string format_number(double x) {
        std::ostringstream os;
        os.precision(17);
        os << x;
        return os.str();
    }

  private:
    double interpolate(double t) const {
        if (t <= knots_.front().first) return knots_.front().second;
        if (t >= knots_.back().first) return knots_.back().second;
        std::size_t i = 1;
        while (knots_[i].first < t) ++i;
        const auto [t0, f0] = knots_[i - 1];
        const auto [t1, f1] = knots_[i];
        return f0 + (f1 - f0) * (t - t0) / (t1 - t0);
    }

    FunctionKind kind_ = FunctionKind::Affine;
    std::string tag_ = "affine:1,0";
    double p_ = 1.0;
    double a_ = 1.0;
    double b_ = 0.0;
    Interval domain_ = Interval::real_line();
    Interval window_ = Interval::closed(-2.0, 2.0);
    ConvexityStatus status_ = ConvexityStatus::OperatorConvex;
    std::optional<double> shift_;
    std::vector<std::pair<double, double>> knots_;
};

namespace detail {

inline double parse_double(std::string_view s, std::string_view context) {
    const std::string copy(s);
    char* end = nullptr;
    const double v = std::strtod(copy.c_str(), &end);
    if (copy.empty() || end != copy.c_str() + copy.size() || !std::isfinite(v)) {
        throw LookupError("bad number '" + copy + "' in function tag '" + std::string(context) + "'");
    }
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace detail

/// Looks a function up by tag. Recognized tags:
///   square, cube, exp, log, inverse, identity, shift1 (t + 1),
///   power:<p>, affine:<a>,<b>, table:<t0>/<f0>,<t1>/<f1>,...
inline ScalarFunction catalog(std::string_view tag) {
    if (tag == "square") return ScalarFunction::square();
    if (tag == "cube") return ScalarFunction::cube();
    if (tag == "exp") return ScalarFunction::exp();
    if (tag == "log") return ScalarFunction::log();
    if (tag == "inverse") return ScalarFunction::inverse();
    if (tag == "identity") return ScalarFunction::affine(1.0, 0.0);
    if (tag == "shift1") return ScalarFunction::affine(1.0, 1.0);

    const std::size_t colon = tag.find(':');
    if (colon != std::string_view::npos) {
        const std::string_view head = tag.substr(0, colon);
        const std::string_view body = tag.substr(colon + 1);
        if (head == "power") return ScalarFunction::power(detail::parse_double(body, tag));
        if (head == "affine") {
            const auto parts = detail::split(body, ',');
            if (parts.size() != 2) throw LookupError("affine tag needs a,b: '" + std::string(tag) + "'");
            return ScalarFunction::affine(detail::parse_double(parts[0], tag), detail::parse_double(parts[1], tag));
        }
        if (head == "table") {
            std::vector<std::pair<double, double>> knots;
            for (std::string_view knot : detail::split(body, ',')) {
                const auto tf = detail::split(knot, '/');
                if (tf.size() != 2) throw LookupError("table knot must be t/f: '" + std::string(knot) + "'");
                knots.emplace_back(detail::parse_double(tf[0], tag), detail::parse_double(tf[1], tag));
            }
            return ScalarFunction::custom(std::move(knots));
        }
    }
    throw LookupError("unknown function tag '" + std::string(tag) + "'");
}

}  // namespace huakit
