#include <doctest.h>

#include <random>

#include "qhd/params.hpp"

using namespace qhd;

TEST_CASE("make_params derives l1 and validates inputs") {
    const Params p = make_params({-0.6, 0.0}, 1, 1, 1.0, {-1.1, 0.3}, {-1.0, 1.5});
    CHECK(p.l1 == cplx(-0.6, 0.0));

    const Params q = make_params({2.0, 1.0}, 2, 0, 1.0, {0, 0}, {0, 1});
    CHECK(q.l1 == cplx(4.0, 1.0));

    const Params r = make_params({0, 0}, 0, 0, 1.0, {0, 0}, {0, 1});
    CHECK(r.l1 == cplx(0.0));
    CHECK(admissible_pairs(r).size() == 1);

    CHECK_THROWS(make_params({0, 0}, -1, 0, 1.0, {0, 0}, {0, 0}));
    CHECK_THROWS(make_params({0, 0}, 0, -2, 1.0, {0, 0}, {0, 0}));
    CHECK_THROWS(make_params({0, 0}, 0, 0, 0.0, {0, 0}, {0, 0}));
    CHECK_THROWS(make_params({0, 0}, 0, 0, -1.0, {0, 0}, {0, 0}));
}

TEST_CASE("admissible pairs enumerate the square") {
    const Params p = make_params({0, 0}, 2, 1, 1.0, {0, 0}, {0, 1});
    const auto pairs = admissible_pairs(p);
    REQUIRE(pairs.size() == 4);
    CHECK(pairs[0].a == 0);
    CHECK(pairs[3].a == 1);
    CHECK(pairs[3].b == 1);

    const Params q = make_params({1, 0}, 0, 3, 1.0, {0, 0}, {0, 1});
    CHECK(admissible_pairs(q).size() == 1);

    const Params r = make_params({0, 0}, 2, 2, 1.0, {0, 0}, {0, 1});
    CHECK(admissible_pairs(r).size() == 9);
}

TEST_CASE("dual_params swaps the tuple and routes (e^mu, z)") {
    const Params p = make_params({-5.3, 0.7}, 2, 1, 1.0, {-3, 0.4}, {-1, 1.5});
    CHECK(p.l1 == cplx(-4.3, 0.7));
    const Params d = dual_params(p);
    CHECK(d.m1 == p.l1);
    CHECK(d.m2 == p.l2);
    CHECK(d.l1 == p.m1);
    CHECK(d.l2 == p.m2);
    CHECK(d.z == std::exp(p.mu));
    CHECK(d.mu == p.z);

    // self-dual point
    const Params s = make_params({-0.6, 0}, 1, 1, 1.0, {-2, 0.3}, {-1, 1.5});
    const Params ds = dual_params(s);
    CHECK(ds.m1 == s.m1);
    CHECK(ds.m2 == s.m2);
}

TEST_CASE("dual_params is an involution on the 4-tuple, admissible set invariant") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_int_distribution<int> ui(0, 4);
    for (int k = 0; k < 50; ++k) {
        const Params p =
            make_params({u(rng), u(rng)}, ui(rng), ui(rng), 1.3, {u(rng), u(rng)}, {u(rng), 1.0});
        const Params dd = dual_params(dual_params(p));
        CHECK(dd.m1 == p.m1);
        CHECK(dd.m2 == p.m2);
        CHECK(dd.l1 == p.l1);
        CHECK(dd.l2 == p.l2);
        CHECK(admissible_max(p) == admissible_max(dual_params(p)));
    }
}

TEST_CASE("region flags") {
    Params p = make_params({-5.3, 0.7}, 2, 2, 1.37, {-35, 0.5}, {-0.8, 1.3});
    const RegionFlags f = region_flags(p);
    CHECK(f.i_side_ok);
    CHECK(f.generic_kappa_ok);

    // J-side reading of the dual tuple: arg(e^mu) in (0,2pi), Re z << 0
    const RegionFlags fd = region_flags(dual_params(p));
    CHECK(fd.j_side_ok);

    // kappa = 1 is not generic (1/kappa integral)
    Params q = make_params({-5.3, 0.7}, 2, 2, 1.0, {-35, 0.5}, {-0.8, 1.3});
    CHECK_FALSE(region_flags(q).generic_kappa_ok);

    // mu outside the strip
    Params r = make_params({-5.3, 0.7}, 2, 2, 1.37, {-35, 0.5}, {-0.8, -1.3});
    CHECK_FALSE(region_flags(r).i_side_ok);
}
