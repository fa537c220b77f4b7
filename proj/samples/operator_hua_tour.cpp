// Verifies a few operator Hua instances for t^2, then searches for a
// violation with t^3, which is convex but not operator convex.
#include <cstdio>

#include "huakit.hpp"

int main() {
    using namespace huakit;

    InstanceParams params;
    params.dim = 3;
    params.function = ScalarFunction::square();
    for (std::uint64_t i = 0; i < 5; ++i) {
        const VerificationReport r = verify(random_admissible_instance(InequalityId::OperatorHua, params, SeedSpec{7, "tour", i}));
        std::printf("t^2  instance %llu: gap %.3e  %s\n", static_cast<unsigned long long>(i), r.gap, to_string(r.verdict));
    }

    FalsifyOptions opt;
    opt.dim = 2;
    opt.budget = 20000;
    const FalsifyResult found = falsify_hua_converse(catalog("cube"), opt);
    if (found.counterexample) {
        std::printf("t^3  violation %.3e after %zu evaluations\n", found.counterexample->violation, found.evaluations);
    } else {
        std::printf("t^3  no violation in %zu evaluations\n", found.evaluations);
    }
}
