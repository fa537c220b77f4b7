#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "huakit/error.hpp"
#include "huakit/function.hpp"
#include "huakit/inequalities.hpp"
#include "huakit/matrix.hpp"
#include "huakit/random.hpp"
#include "huakit/spectral.hpp"

namespace huakit {

/// A, B, lambda with f((1-lambda)A + lambda B) not below (1-lambda)f(A) + lambda f(B).
struct ConvexityWitness {
    HermitianMatrix a;
    HermitianMatrix b;
    double lambda = 0.5;
};

/// A concrete instance on which an inequality that holds for operator convex
/// functions fails. `violation` is -gap.
struct Counterexample {
    ScalarFunction f;
    std::variant<ConvexityWitness, OperatorHuaInstance> instance;
    double gap = 0.0;
    double threshold = 0.0;
    double violation = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t index = 0;  ///< trial (checker) or restart (falsifier) that produced it
    unsigned worker = 0;
    std::string strategy;
};

/// (1-lambda) f(A) + lambda f(B) against f((1-lambda) A + lambda B).
inline OrderReport convexity_gap(const ScalarFunction& f, const ConvexityWitness& w, const TolerancePolicy& tol = {}) {
    const HermitianMatrix major = apply_function(w.a, f, tol) * (1.0 - w.lambda) + apply_function(w.b, f, tol) * w.lambda;
    const HermitianMatrix minor = apply_function(w.a * (1.0 - w.lambda) + w.b * w.lambda, f, tol);
    return loewner_gap(major, minor, tol);
}

/// Re-evaluates the stored instance of a counterexample.
inline OrderReport reevaluate(const Counterexample& cx, const TolerancePolicy& tol = {}) {
    if (const auto* w = std::get_if<ConvexityWitness>(&cx.instance)) return convexity_gap(cx.f, *w, tol);
    const VerificationReport r = operator_hua(std::get<OperatorHuaInstance>(cx.instance), tol, Direction::Forward);
    OrderReport o;
    o.gap = r.gap;
    o.threshold = r.threshold;
    o.verdict = r.verdict;
    return o;
}

enum class ConvexityVerdict { Consistent, Violated };

inline const char* to_string(ConvexityVerdict v) { return v == ConvexityVerdict::Consistent ? "CONSISTENT" : "VIOLATED"; }

struct ConvexityCheck {
    ConvexityVerdict verdict = ConvexityVerdict::Consistent;
    std::size_t trials = 0;
    double worst_gap = 0.0;     ///< minimum gap over all trials
    double max_abs_gap = 0.0;   ///< largest |gap| over all trials
    std::optional<Counterexample> counterexample;
};

/// Samples (A, B, lambda) with spectra in f's window and compares both sides
/// of the operator convexity inequality. The first three trials use lambda =
/// 0.5, 0.25, 0.75; later ones draw lambda uniformly.
inline ConvexityCheck check_operator_convexity(const ScalarFunction& f, std::size_t dim, std::size_t trials,
                                               std::uint64_t seed, const TolerancePolicy& tol = {}) {
    if (f.domain().is_empty() || f.window().is_empty()) throw PreconditionError("check_operator_convexity: empty domain");
    if (dim < 2) throw PreconditionError("check_operator_convexity: dim must be >= 2 (1x1 only sees scalar convexity)");
    if (trials == 0) throw PreconditionError("check_operator_convexity: trials must be >= 1");
    constexpr double kFixedLambdas[] = {0.5, 0.25, 0.75};

    ConvexityCheck out;
    out.trials = trials;
    out.worst_gap = std::numeric_limits<double>::infinity();
    const std::string label = "convexity/" + f.tag() + "/d" + std::to_string(dim);
    for (std::size_t t = 0; t < trials; ++t) {
        Stream rng(SeedSpec{seed, label, t});
        ConvexityWitness w{random_hermitian_in_interval(dim, f.window(), rng),
                           random_hermitian_in_interval(dim, f.window(), rng),
                           t < 3 ? kFixedLambdas[t] : rng.uniform()};
        const OrderReport o = convexity_gap(f, w, tol);
        out.max_abs_gap = std::max(out.max_abs_gap, std::abs(o.gap));
        if (o.gap < out.worst_gap) {
            out.worst_gap = o.gap;
            if (o.verdict == Verdict::Fails) {
                out.verdict = ConvexityVerdict::Violated;
                out.counterexample = Counterexample{f, std::move(w), o.gap, o.threshold, -o.gap, seed, t, 0, "convexity"};
            }
        }
    }
    return out;
}

struct FalsifyOptions {
    std::size_t dim = 2;
    std::size_t terms = 1;
    std::size_t budget = 100000;  ///< total operator-Hua evaluations across workers
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::size_t local_steps = 16;     ///< hill-climbing steps after each random restart
    std::size_t refine_steps = 2000;  ///< extra steps spent sharpening a found violation
    /// Also try the substitution B := sum C_i^* A_i C_i when f(0) > 0.
    bool probe_positive_at_zero = false;
    TolerancePolicy tol;
};

struct FalsifyResult {
    std::optional<Counterexample> counterexample;
    std::size_t evaluations = 0;
    FalsifyOptions options;
};

namespace detail {

// Search space: a real parameter vector theta decoded into an operator Hua
// instance whose spectral hypotheses hold for every theta.
//
// "general":      A_i = U_i diag(a) U_i^*, P likewise (eigenvalues squashed
//                 into f's window), C_i with bounded entries,
//                 B = P + sum C_i^* A_i C_i.
// "substitution": strict contraction family E_i, C_i = E_i (I - sum E^*E)^{-1/2},
//                 B = sum C_i^* A_i C_i, which turns the operator Hua inequality
//                 into f(sum (C_iD)^* A_i C_iD) <= sum (C_iD)^* f(A_i) C_iD + f(0).
enum class SearchStrategy { General, Substitution };

inline const char* to_string(SearchStrategy s) { return s == SearchStrategy::General ? "general" : "substitution"; }

class HuaSearchSpace {
  public:
    HuaSearchSpace(ScalarFunction f, std::size_t dim, std::size_t terms) : f_(std::move(f)), d_(dim), n_(terms) {}

    std::size_t spectrum_block() const { return d_ + 2 * d_ * d_; }
    std::size_t matrix_block() const { return 2 * d_ * d_; }

    std::size_t size() const {
        // A_i blocks, then C_i (general) or raw E_i (substitution) blocks, then
        // P (general) or contraction shrink + basis (substitution).
        return n_ * spectrum_block() + n_ * matrix_block() + spectrum_block();
    }

    OperatorHuaInstance decode(std::span<const double> theta, SearchStrategy s) const {
        std::size_t pos = 0;
        OperatorHuaInstance inst{HermitianMatrix::zero(d_), {}, {}, f_};
        for (std::size_t i = 0; i < n_; ++i) inst.as.push_back(spectral(theta, pos, f_.window()));
        std::vector<ComplexMatrix> raw;
        for (std::size_t i = 0; i < n_; ++i) raw.push_back(matrix(theta, pos));
        if (s == SearchStrategy::General) {
            HermitianMatrix b = spectral(theta, pos, f_.window());
            for (std::size_t i = 0; i < n_; ++i) {
                ComplexMatrix c = raw[i];
                for (std::size_t r = 0; r < d_; ++r)
                    for (std::size_t k = 0; k < d_; ++k)
                        c(r, k) = 1.5 * Complex(std::tanh(c(r, k).real()), std::tanh(c(r, k).imag()));
                b = b + inst.as[i].congruence(c);
                inst.cs.push_back(std::move(c));
            }
            inst.b = std::move(b);
            return inst;
        }
        // Strict contraction: E_i = G_i S^{-1/2} W, sum E^*E = W^*W with
        // spectrum in (0.05, 0.95).
        const HermitianMatrix w2 = spectral(theta, pos, Interval::closed(0.05, 0.95));
        ComplexMatrix sum(d_, d_);
        for (const auto& g : raw) sum += adjoint_times(g, g);
        const auto sd = spectral_decompose(HermitianMatrix::symmetrize(sum + ComplexMatrix::identity(d_) * 1e-12));
        const ComplexMatrix s_inv_sqrt = sd.rebuild([](double t) { return 1.0 / std::sqrt(t); }).matrix();
        const ComplexMatrix w = positive_sqrt(w2).matrix();
        const HermitianMatrix rest = HermitianMatrix::identity(d_) - w2;
        const ComplexMatrix m_inv_sqrt = positive_inverse_sqrt(rest).matrix();
        HermitianMatrix b = HermitianMatrix::zero(d_);
        for (std::size_t i = 0; i < n_; ++i) {
            ComplexMatrix c = raw[i] * s_inv_sqrt * w * m_inv_sqrt;
            b = b + inst.as[i].congruence(c);
            inst.cs.push_back(std::move(c));
        }
        inst.b = std::move(b);
        return inst;
    }

  private:
    ComplexMatrix matrix(std::span<const double> theta, std::size_t& pos) const {
        ComplexMatrix m(d_, d_);
        for (std::size_t r = 0; r < d_; ++r)
            for (std::size_t k = 0; k < d_; ++k) {
                m(r, k) = Complex(theta[pos], theta[pos + 1]);
                pos += 2;
            }
        return m;
    }

    HermitianMatrix spectral(std::span<const double> theta, std::size_t& pos, const Interval& window) const {
        std::vector<double> eig(d_);
        for (double& e : eig) {
            const double squash = 1.0 / (1.0 + std::exp(-theta[pos++]));
            e = window.lo + (window.hi - window.lo) * squash;
        }
        ComplexMatrix g = matrix(theta, pos);
        for (std::size_t k = 0; k < d_; ++k) g(k, k) += 1e-9;  // keep Gram-Schmidt away from exact rank loss
        return with_spectrum(orthonormalize_columns(g), eig);
    }

    ScalarFunction f_;
    std::size_t d_;
    std::size_t n_;
};

struct SearchPoint {
    std::vector<double> theta;
    SearchStrategy strategy = SearchStrategy::General;
    double gap = std::numeric_limits<double>::infinity();
    double threshold = 0.0;
    std::uint64_t restart = 0;
};

struct WorkerOutcome {
    std::optional<SearchPoint> found;
    std::size_t evaluations = 0;
};

inline WorkerOutcome run_falsify_worker(const ScalarFunction& f, const FalsifyOptions& opt, unsigned worker,
                                        std::size_t share) {
    const HuaSearchSpace space(f, opt.dim, opt.terms);
    const bool substitution_ok =
        f.domain().contains(0.0) && (f.nonpositive_at_zero() || opt.probe_positive_at_zero);
    const std::string label = "falsify/" + f.tag() + "/w" + std::to_string(worker);
    WorkerOutcome out;

    auto evaluate = [&](SearchPoint& pt) {
        ++out.evaluations;
        try {
            const VerificationReport r =
                operator_hua(space.decode(pt.theta, pt.strategy), opt.tol, Direction::Forward);
            pt.gap = r.gap;
            pt.threshold = r.threshold;
        } catch (const Error&) {
            pt.gap = std::numeric_limits<double>::infinity();
        }
    };

    auto climb = [&](SearchPoint& pt, std::size_t steps, Stream& rng) {
        double sigma = 0.5;
        for (std::size_t s = 0; s < steps && out.evaluations < share; ++s) {
            SearchPoint trial = pt;
            const std::size_t j = static_cast<std::size_t>(rng.uniform() * double(trial.theta.size()));
            trial.theta[j] += sigma * rng.gaussian();
            evaluate(trial);
            if (trial.gap < pt.gap) {
                pt = std::move(trial);
                sigma = std::min(2.0, sigma * 1.2);
            } else {
                sigma = std::max(1e-3, sigma * 0.98);
            }
        }
    };

    for (std::uint64_t restart = 0; out.evaluations < share; ++restart) {
        Stream rng(SeedSpec{opt.seed, label, restart});
        SearchPoint pt;
        pt.restart = restart;
        pt.strategy = (substitution_ok && restart % 2 == 1) ? SearchStrategy::Substitution : SearchStrategy::General;
        pt.theta.resize(space.size());
        for (double& t : pt.theta) t = 1.5 * rng.gaussian();
        evaluate(pt);
        climb(pt, opt.local_steps, rng);
        if (pt.gap < pt.threshold) {
            climb(pt, opt.refine_steps, rng);
            out.found = std::move(pt);
            break;
        }
    }
    return out;
}

}  // namespace detail

/// Searches operator Hua instances for a violation, i.e. a witness that f is
/// not operator convex. Random restarts with short hill climbs on the gap;
/// the first violation found is sharpened further and returned. The budget
/// is split evenly across workers, each with its own seed stream; the
/// reported counterexample is the deepest one over all workers (ties go to
/// the lowest worker index).
inline FalsifyResult falsify_hua_converse(const ScalarFunction& f, const FalsifyOptions& options) {
    if (options.dim == 0 || options.terms == 0) throw PreconditionError("falsify_hua_converse: dim and terms must be >= 1");
    if (!f.window().is_bounded() || f.window().is_empty()) throw PreconditionError("falsify_hua_converse: bad sampling window");
    const unsigned workers = std::max(1u, options.workers);
    std::vector<detail::WorkerOutcome> outcomes(workers);
    auto share_of = [&](unsigned w) { return options.budget / workers + (w < options.budget % workers ? 1 : 0); };
    if (workers == 1) {
        outcomes[0] = detail::run_falsify_worker(f, options, 0, share_of(0));
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] { outcomes[w] = detail::run_falsify_worker(f, options, w, share_of(w)); });
        }
        for (auto& t : pool) t.join();
    }

    FalsifyResult result;
    result.options = options;
    result.options.workers = workers;
    const detail::SearchPoint* best = nullptr;
    unsigned best_worker = 0;
    for (unsigned w = 0; w < workers; ++w) {
        result.evaluations += outcomes[w].evaluations;
        if (outcomes[w].found && (!best || outcomes[w].found->gap < best->gap)) {
            best = &*outcomes[w].found;
            best_worker = w;
        }
    }
    if (best) {
        const detail::HuaSearchSpace space(f, options.dim, options.terms);
        result.counterexample = Counterexample{f,
                                               space.decode(best->theta, best->strategy),
                                               best->gap,
                                               best->threshold,
                                               -best->gap,
                                               options.seed,
                                               best->restart,
                                               best_worker,
                                               detail::to_string(best->strategy)};
    }
    return result;
}

}  // namespace huakit
