#include "qhd/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qhd/errors.hpp"

namespace qhd {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Params make_params(cplx m1, int m2, int l2, double kappa, cplx z, cplx mu) {
    if (m2 < 0) throw std::invalid_argument("make_params: m2 must be a nonnegative integer");
    if (l2 < 0) throw std::invalid_argument("make_params: l2 must be a nonnegative integer");
    if (!(kappa > 0.0)) throw std::invalid_argument("make_params: kappa must be positive");
    Params p;
    p.m1 = m1;
    p.m2 = m2;
    p.l1 = m1 + static_cast<double>(m2) - static_cast<double>(l2);
    p.l2 = l2;
    p.kappa = kappa;
    p.z = z;
    p.mu = mu;
    return p;
}

int admissible_max(const Params& p) { return std::min(p.m2, p.l2); }

std::vector<AdmissiblePair> admissible_pairs(const Params& p) {
    const int k = admissible_max(p);
    std::vector<AdmissiblePair> out;
    out.reserve(static_cast<size_t>(k + 1) * static_cast<size_t>(k + 1));
    for (int a = 0; a <= k; ++a)
        for (int b = 0; b <= k; ++b) out.push_back({a, b});
    return out;
}

Params dual_params(const Params& p) {
    Params d;
    d.m1 = p.l1;
    d.m2 = p.l2;
    d.l1 = p.m1;
    d.l2 = p.m2;
    d.kappa = p.kappa;
    d.z = std::exp(p.mu);
    d.mu = p.z;
    return d;
}

double dist_to_integer(cplx w) {
    const double fr = w.real() - std::round(w.real());
    return std::hypot(fr, w.imag());
}

double arg_in(cplx w, double lo) {
    double a = std::arg(w);
    while (a < lo) a += kTwoPi;
    while (a >= lo + kTwoPi) a -= kTwoPi;
    return a;
}

RegionFlags region_flags(const Params& p, const RegionConfig& cfg) {
    RegionFlags f;
    f.i_side_ok = p.mu.imag() > 0.0 && p.mu.imag() < kTwoPi;

    // J-side reading of the same tuple: arg of the z slot in (0, 2pi),
    // Re of the mu slot below the configured threshold.
    const double az = arg_in(p.z, 0.0);
    f.j_side_ok = (p.z != cplx(0.0)) && az > 0.0 && az < kTwoPi &&
                  p.mu.real() <= -p.kappa * cfg.r0;

    f.generic_kappa_ok = dist_to_integer(cplx(p.kappa, 0.0)) >= cfg.generic_eps &&
                         dist_to_integer(cplx(1.0 / p.kappa, 0.0)) >= cfg.generic_eps;
    for (int j = -(p.m2 + p.l2); f.generic_kappa_ok && j <= p.m2 + p.l2; ++j) {
        if (dist_to_integer((p.m1 + static_cast<double>(j)) / p.kappa) < cfg.generic_eps)
            f.generic_kappa_ok = false;
    }
    return f;
}

}  // namespace qhd
