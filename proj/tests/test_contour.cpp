#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qhd/branch.hpp"
#include "qhd/contour.hpp"
#include "qhd/errors.hpp"
#include "qhd/quad.hpp"
#include "qhd/special.hpp"

using namespace qhd;
namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("paper straight-line region gives an undeformed line") {
    // Re m1 < 0, Re m2 < 0, Re z = 0
    auto [c, rep] = barnes_contour({-5.3, 0.7}, {-2.1, 0.0}, {0.0, 0.3}, 1.0, {-1.0, 1.5}, 1,
                                   1e-8, {});
    CHECK(rep.bypassed.empty());
    CHECK(rep.eps == doctest::Approx(0.5 * 2.1));
    // all segments vertical at the same abscissa
    for (const auto& seg : c.vars[0].segments) {
        CHECK(seg.kind == PathSegment::Kind::line);
        CHECK(seg.a.real() == doctest::Approx(rep.eps));
        CHECK(seg.b.real() == doctest::Approx(rep.eps));
    }
}

TEST_CASE("bypassed right-family count matches the lattice enumeration") {
    // count = ceil((eps - Re z + m2)/kappa); kappa generic so the z-anchored
    // lattices stay separated (m2/kappa integral would pinch them)
    BarnesOptions opt;
    opt.eps_hint = 0.5;
    auto [c, rep] =
        barnes_contour({-5.3, 0.7}, {2.0, 0.0}, {-30.0, 0.0}, 1.03, {-1.0, 1.5}, 1, 1e-8, opt);
    CHECK(rep.bypassed.size() == 32);  // ceil(32.5/1.03)
    (void)c;

    // m2 = 0: family anchored at z, count = ceil((eps - Re z)/kappa)
    auto [c0, rep0] =
        barnes_contour({-5.3, 0.7}, {0.0, 0.0}, {-30.0, 0.0}, 1.0, {-1.0, 1.5}, 1, 1e-8, opt);
    CHECK(rep0.bypassed.size() == 31);  // ceil(30.5/1)
    (void)c0;
}

TEST_CASE("side audit holds for every classified pole") {
    auto [c, rep] =
        barnes_contour({-5.3, 0.7}, {2.0, 0.0}, {-35.0, 0.5}, 1.37, {-0.8, 1.3}, 2, 1e-8, {});
    const Path& path = c.vars[0];
    for (const cplx& p : rep.left_points) CHECK(side_audit(path, p, false));
    for (const cplx& p : rep.right_points) CHECK(side_audit(path, p, true));
    CHECK(rep.min_clearance >= 1e-3 * 1.37);
}

TEST_CASE("pinch detection fires when lattices collide") {
    // kappa = 1 and integer m2 >= 1 collide the z-anchored families
    CHECK_THROWS_AS(
        barnes_contour({-5.3, 0.7}, {1.0, 0.0}, {-30.0, 0.0}, 1.0, {-1.0, 1.5}, 1, 1e-8, {}),
        ContourError);
}

TEST_CASE("deformation independence of a 1D Barnes integral") {
    // Cauchy: two legal abscissas give the same value
    const cplx m1(-5.3, 0.7);
    const cplx z(0.0, 0.3);
    const cplx mu(-1.0, 0.4);
    auto integrand = [&](cplx t, double) {
        // poles left at -N, z-N; right at -m1+N (Re 5.3): entire-ish test blend
        return std::exp(log_gamma(t) + log_gamma((t - z)) - log_gamma(t - m1) + mu * t);
    };
    QuadConfig cfg;
    cfg.rel_tol = 1e-11;
    BarnesOptions o1, o2;
    o1.eps_hint = 0.4;
    o2.eps_hint = 1.9;
    std::vector<PoleFamily> fams = {{cplx(0.0), -1.0, false, "L0"},
                                    {z, -1.0, false, "Lz"},
                                    {-m1, 1.0, true, "Rm"}};
    o1.t_up = o2.t_up = 34.0;
    o1.t_down = o2.t_down = 30.0;
    auto [p1, r1] = barnes_line(fams, 1.0, o1);
    auto [p2, r2] = barnes_line(fams, 1.0, o2);
    const auto v1 = integrate_path(integrand, p1, cfg);
    const auto v2 = integrate_path(integrand, p2, cfg);
    CHECK(std::abs(v1.value - v2.value) <= 1e-9 * std::abs(v1.value));
}

TEST_CASE("loops_J geometry: families, nesting, anchors") {
    const cplx z(0.07, 0.40);
    LoopOptions lo;
    lo.truncation = 8.0;

    // b = 0: single loop around 1 on the positive real direction
    Contour c1 = loops_J(z, 0, 1, 1.1, lo);
    REQUIRE(c1.vars.size() == 1);
    CHECK(std::abs(c1.vars[0].anchor_point.imag()) < 1e-12);
    CHECK(c1.vars[0].anchor_point.real() < 1.0);
    CHECK(c1.vars[0].anchor_point.real() > 0.0);

    // b = l: all loops around z along arg z
    Contour cz = loops_J(z, 2, 2, 1.1, lo);
    REQUIRE(cz.vars.size() == 2);
    for (const auto& path : cz.vars) {
        const double ratio = std::abs(path.anchor_point) / std::abs(z);
        CHECK(ratio > 0.0);
        CHECK(ratio < 1.0);
        CHECK(arg_in(path.anchor_point, 0.0) == doctest::Approx(arg_in(z, 0.0)));
    }
    // nesting: inner radius < outer radius
    const double r0 = std::abs(cz.vars[0].anchor_point - z);
    const double r1 = std::abs(cz.vars[1].anchor_point - z);
    CHECK(r0 < r1);
    CHECK(r1 == doctest::Approx(2.0 * r0));

    CHECK_THROWS_AS(loops_J({2.0, 0.0}, 0, 1, 1.0, lo), RegionError);  // arg z = 0
}

TEST_CASE("loops_B basics and the empty contour") {
    Contour c0 = loops_B(0, 10.0, 1.0);
    CHECK(c0.vars.empty());
    Contour c1 = loops_B(1, 10.0, 1.0);
    REQUIRE(c1.vars.size() == 1);
    Contour c2 = loops_B(2, 10.0, 1.0);
    REQUIRE(c2.vars.size() == 2);
    CHECK(std::abs(c2.vars[0].anchor_point) < std::abs(c2.vars[1].anchor_point));
}

TEST_CASE("branch state: init conventions and winding") {
    Params p = make_params({-0.6, 0.0}, 1, 1, 1.0, {-2.0, 0.0}, {-1.0, 1.5});
    // t = 0.5: arg(1-t) = 0; z = -2: arg(z-t) = pi
    BranchState st = init_branch({0.5, 0.0}, p, Side::j_side);
    REQUIRE(st.logs.size() == 3);
    CHECK(st.logs[1].imag() == doctest::Approx(0.0));
    CHECK(st.logs[2].imag() == doctest::Approx(kPi));
    // positive real difference convention
    CHECK(arg_in(cplx(0.7, 0.0) - cplx(0.5, 0.0), 0.0) == doctest::Approx(0.0));

    // advancing around a full loop of (t-1) about 1 adds 2*pi*i
    Params q = make_params({-0.6, 0.0}, 1, 1, 1.0, {0.07, 0.40}, {-1.0, 1.5});
    BranchState ws = init_branch({0.5, 0.0}, q, Side::j_side);
    const cplx start_log1 = ws.logs[1];
    const int nstep = 200;
    for (int k = 1; k <= nstep; ++k) {
        const double th = kPi + kTwoPi * k / nstep;  // start west of 1
        const cplx t = 1.0 + 0.5 * std::exp(cplx(0, th));
        const cplx vals[3] = {t, 1.0 - t, q.z - t};
        branch_advance(ws, static_cast<double>(k) / nstep, t, vals);
    }
    CHECK((ws.logs[1] - start_log1).imag() == doctest::Approx(kTwoPi).epsilon(1e-9));

    // step-too-large error
    BranchState bad = init_branch({0.5, 0.0}, q, Side::j_side);
    const cplx far(-0.5, 0.0);
    const cplx vals[3] = {far, 1.0 - far, q.z - far};
    CHECK_THROWS_AS(branch_advance(bad, 1.0, far, vals), BranchStepError);
}

TEST_CASE("branch table along a gamma_m loop: (-s) gains +2*pi*i") {
    // Traversing the counterclockwise loop of Picture 2 once advances the
    // continuous log of (-s) by +2*pi*i (the closed form B_m = (-2*pi*i)^m
    // pins this orientation).
    Contour c = loops_B(1, 12.0, 1.0);
    const Path& loop = c.vars[0];
    BranchTable tab(loop, [](cplx s) { return -s; },
                    cplx(std::log(std::abs(loop.anchor_point)), 0.0));
    const cplx dlog = tab.log_at_end() - tab.log_at_start();
    // the open rays sit at lateral offset delta, so the turn is slightly
    // under a full 2*pi; the sign pins the counterclockwise orientation
    CHECK(dlog.imag() == doctest::Approx(kTwoPi).epsilon(0.01));
    CHECK(std::abs(dlog.real()) < 1e-9);

    // exact winding on a closed circle: one counterclockwise turn of (t-c)
    Path circ;
    const cplx cc(1.0, 0.0);
    for (int k = 0; k < 8; ++k)
        circ.segments.push_back(PathSegment::make_arc(cc, 0.5, kTwoPi * k / 8, kTwoPi * (k + 1) / 8));
    circ.anchor_s = 0.0;
    circ.anchor_point = cc + 0.5;
    BranchTable tc(circ, [cc](cplx t) { return t - cc; }, cplx(std::log(0.5), 0.0));
    const cplx dc = tc.log_at_end() - tc.log_at_start();
    CHECK(dc.imag() == doctest::Approx(kTwoPi).epsilon(1e-9));
}

TEST_CASE("contour JSON dump shape") {
    LoopOptions lo;
    lo.truncation = 6.0;
    Contour c = loops_J({0.07, 0.40}, 1, 2, 1.0, lo);
    const std::string js = contour_to_json(c);
    CHECK(js.find("\"arc\"") != std::string::npos);
    CHECK(js.find("\"line\"") != std::string::npos);
}
