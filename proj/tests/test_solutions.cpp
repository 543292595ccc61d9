#include <doctest.h>

#include "qhd/glrep.hpp"
#include "qhd/params.hpp"
#include "qhd/quad.hpp"

using namespace qhd;

namespace {
Params region_point(int m2, int l2) {
    return make_params({-5.3, 0.7}, m2, l2, 1.37, {-35.0, 0.5}, {0.45, 1.3});
}
}  // namespace

TEST_CASE("weight-line solutions: integrals are 1, prefactor algebra is exact") {
    QuadConfig cfg;
    // l2 = 0: the qKZ equations reduce to scalar relations for the prefactor
    const Params p = region_point(2, 0);
    const SolutionCheck qkz = check_solution(SolutionSide::qKZ, p, 0, cfg);
    CHECK(qkz.residual <= 1e-8);
    const SolutionCheck dd = check_solution(SolutionSide::dynDE, p, 0, cfg);
    CHECK(dd.residual <= 1e-8);

    // m2 = 0 on the J side
    const Params q = region_point(0, 2);
    const SolutionCheck kz = check_solution(SolutionSide::KZ_dyn, q, 0, cfg);
    CHECK(kz.residual <= 1e-8);
}

TEST_CASE("qKZ solutions from the I integrals at l2 = 1") {
    const Params p = region_point(1, 1);
    QuadConfig cfg;
    cfg.rel_tol = 1e-8;
    for (int b = 0; b <= 1; ++b) {
        const SolutionCheck r = check_solution(SolutionSide::qKZ, p, b, cfg);
        CAPTURE(b);
        CHECK(r.residual <= 1e-3);
    }
}

TEST_CASE("KZ and difference dynamical solutions from the J integrals at m2 = 1") {
    const Params p = region_point(1, 1);
    QuadConfig cfg;
    cfg.rel_tol = 1e-8;
    for (int b = 0; b <= 1; ++b) {
        const SolutionCheck r = check_solution(SolutionSide::KZ_dyn, p, b, cfg);
        CAPTURE(b);
        CHECK(r.residual <= 1e-3);
        CHECK(r.richardson_drift <= 1e-3);
    }
}

TEST_CASE("dynamical differential solutions at l2 = 1") {
    const Params p = region_point(1, 1);
    QuadConfig cfg;
    cfg.rel_tol = 1e-8;
    const SolutionCheck r = check_solution(SolutionSide::dynDE, p, 0, cfg);
    CHECK(r.residual <= 1e-3);
    CHECK(r.richardson_drift <= 1e-3);
}
