#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qhd/duality.hpp"
#include "qhd/integrals.hpp"
#include "qhd/special.hpp"

using namespace qhd;
namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

Params region_point(int m2, int l2) {
    // in-region: Re z << 0, Im mu in the strip, generic kappa, Re mu > 0
    return make_params({-5.3, 0.7}, m2, l2, 1.37, {-35.0, 0.5}, {0.45, 1.3});
}
}  // namespace

TEST_CASE("factor edge cases") {
    // X at m2 = 0 is the empty product
    const Params p0 = make_params({-0.6, 0.2}, 0, 1, 1.13, {-3.0, 0.4}, {0.4, 1.4});
    CHECK(std::abs(factors(p0, 0).X() - 1.0) < 1e-15);

    // E_b exponent at b = l2: l2^2 - l2(l2-1)/2 (middle term vanishes)
    const Params p = make_params({-0.6, 0.2}, 2, 2, 1.13, {-3.0, 0.4}, {0.4, 1.4});
    const ConnectionFactors f = factors(p, 2);
    const cplx direct = std::exp(kI * kPi * (2.0 * 2.0 - 2.0 * (2.0 - 1.0) / 2.0) / p.kappa);
    CHECK(std::abs(f.E() - direct) < 1e-13);
}

TEST_CASE("G_factor values") {
    Params p = make_params({-0.6, 0.2}, 2, 1, 1.0, {0, 0}, {0, 1});
    Params p0 = p;
    p0.m2 = 0;
    CHECK(G_factor({0.3, 0.1}, p0) == cplx(1.0));
    Params p1 = p;
    p1.m2 = 1;
    const cplx t(0.3, 0.1);
    CHECK(std::abs(G_factor(t, p1) - (t - p.m1) / (t + 1.0)) < 1e-15);
    const cplx g2 = G_factor({0.0, 0.0}, p);
    CHECK(std::abs(g2 - (-p.m1) * (1.0 - p.m1) / 2.0) < 1e-14);
    CHECK_THROWS(G_factor({-1.0, 0.0}, p));
}

TEST_CASE("S(t) = X(-t) solves the G difference equation") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int m2 = 0; m2 <= 4; ++m2) {
        Params p = make_params({-0.6, 0.2}, m2, 2, 1.13, {-3.0, 0.4}, {0.4, 1.4});
        int tested = 0;
        for (int k = 0; k < 200 && tested < 100; ++k) {
            const cplx t(u(rng), u(rng));
            double res;
            try {
                res = check_S_equation(p, t);
            } catch (const std::exception&) {
                continue;
            }
            ++tested;
            if (m2 == 0) CHECK(res == 0.0);
            else CHECK(res <= 1e-12);
        }
        CHECK(tested == 100);
    }
}

TEST_CASE("theorem 1 at (0,0): both sides are exactly the factor identity") {
    const Params p = make_params({-5.3, 0.7}, 0, 0, 1.37, {-35.0, 0.5}, {0.45, 1.3});
    QuadConfig cfg;
    const Theorem1Report rep = verify_theorem1(p, cfg);
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].residual <= 1e-10);
}

TEST_CASE("theorem 1 end-to-end at (1,1)") {
    const Params p = region_point(1, 1);
    QuadConfig cfg;
    cfg.rel_tol = 1e-8;
    const Theorem1Report rep = verify_theorem1(p, cfg);
    REQUIRE(rep.entries.size() == 4);
    for (const auto& e : rep.entries) {
        CAPTURE(e.a);
        CAPTURE(e.b);
        CHECK(e.residual <= 1e-5);
    }
}

TEST_CASE("connection matrix at (1,1): diagonal, z-periodic, Y-tracking") {
    const Params p = region_point(1, 1);
    QuadConfig cfg;
    cfg.rel_tol = 1e-8;
    const auto rep = connection_matrix(p, cfg);
    REQUIRE(rep.dim == 2);
    CHECK(rep.offdiag_over_norm <= 1e-3);
    CHECK(rep.diag_match <= 1e-4);

    // z-shift invariance (kappa-periodicity of G)
    Params pz = p;
    pz.z = p.z - p.kappa;
    const auto repz = connection_matrix(pz, cfg);
    for (int b = 0; b < 2; ++b) {
        const cplx g0 = rep.G[b][b], g1 = repz.G[b][b];
        CHECK(std::abs(g0 - g1) <= 2e-4 * std::abs(g0));
    }

    // mu-dependence matches Y: G_bb(mu) * Y(mu) is mu-independent
    Params pm = p;
    pm.mu = p.mu + cplx(0.1, 0.2);
    const auto repm = connection_matrix(pm, cfg);
    for (int b = 0; b < 2; ++b) {
        const cplx lhs = rep.G[b][b] * factors(p, b).Y();
        const cplx rhs = repm.G[b][b] * factors(pm, b).Y();
        CHECK(std::abs(lhs - rhs) <= 2e-4 * std::abs(lhs));
    }
}
