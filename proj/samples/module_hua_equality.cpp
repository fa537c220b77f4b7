// Module Hua inequality on the diagonal model: a random pair gives a strict
// inequality, and y = x f(c) lands on equality.
#include <cstdio>

#include "huakit.hpp"

int main() {
    using namespace huakit;

    const std::size_t k = 3, m = 4;
    Stream rng(SeedSpec{11, "sample/module-hua", 0});
    const CentralPositive c = CentralPositive::make(AlgebraElement::diagonal({0.5, 1.0, 2.0}));
    const ScalarFunction f = catalog("shift1");
    const ModuleElement x{ModelKind::Diagonal, random_gaussian_matrix(m, k, rng)};
    const ModuleElement y{ModelKind::Diagonal, random_gaussian_matrix(m, k, rng)};

    const VerificationReport generic = module_hua(c, x, y, f);
    std::printf("random y:   gap %.3e  %s\n", generic.gap, to_string(generic.verdict));

    const ModuleElement tight = right_action(x, apply_function(c.element(), f));
    const VerificationReport equal = module_hua(c, x, tight, f);
    std::printf("y = x f(c): gap %.3e  %s\n", equal.gap, to_string(equal.verdict));
}
