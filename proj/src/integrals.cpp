#include "qhd/integrals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <atomic>
#include <functional>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>

#include "qhd/branch.hpp"
#include "qhd/contour.hpp"
#include "qhd/errors.hpp"
#include "qhd/integrand.hpp"
#include "qhd/special.hpp"

namespace qhd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI(0.0, 1.0);

void merge_result(IntegralResult& acc_meta, const IntegralResult& inner, double& worst_rel) {
    if (std::abs(inner.value) > 0)
        worst_rel = std::max(worst_rel, inner.err_estimate / std::abs(inner.value));
    for (const auto& w : inner.warnings) acc_meta.warnings.push_back(w);
}

void dedup_warnings(IntegralResult& r) {
    std::set<std::string> s(r.warnings.begin(), r.warnings.end());
    r.warnings.assign(s.begin(), s.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// I side
// ---------------------------------------------------------------------------

namespace {

// Pole families for integration variable `level` (0 = innermost) of the
// l-fold Barnes contour, given the fixed outer points. The j-shifted anchors
// are the pinch loci of the levels below; keeping them on the inherited side
// realizes the iterated analytic continuation.
std::vector<PoleFamily> barnes_families(const Params& p, int level,
                                        std::span<const cplx> outer_pts) {
    const double ka = p.kappa;
    const cplx z = p.z;
    const double m2 = static_cast<double>(p.m2);
    // At m2 = 0 every z-anchored factor cancels out of the integrand, so the
    // z families are classification-only.
    const bool zph = (p.m2 == 0);
    std::vector<PoleFamily> fams;
    for (int j = 0; j <= level; ++j) {
        const double dj = static_cast<double>(j);
        fams.push_back({cplx(-dj), -ka, false, "-j-kappa*N", false});
        // Left z family z-j-kappa*N: its N = 0 point coincides with the right
        // anchor z-m2+j' when j+j' = m2 (the iterated continuation's pinch
        // loci meet there); the point is kept east, so the left family starts
        // at N = 1. Validated against the J side of the duality identity.
        const bool collide = (p.m2 - j >= 0) && (p.m2 - j <= level);
        fams.push_back({z - dj - (collide ? ka : 0.0), -ka, false, "z-j-kappa*N", zph});
        fams.push_back({-p.m1 + dj, ka, true, "-m1+j+kappa*N", false});
        fams.push_back({z - m2 + dj, ka, true, "z-m2+j+kappa*N", zph});
    }
    for (size_t v = 0; v < outer_pts.size(); ++v) {
        for (int j = 1; j <= level + 1; ++j) {
            const double dj = static_cast<double>(j);
            fams.push_back({outer_pts[v] - dj, -ka, false, "t_outer-j-kappa*N", false});
            fams.push_back({outer_pts[v] + dj, ka, true, "t_outer+j+kappa*N", false});
        }
    }
    return fams;
}

}  // namespace

IntegralResult I_ab(const Params& p, int a, int b, const QuadConfig& cfg) {
    const int l = p.l2;
    IntegralResult out;
    if (l == 0) {
        out.value = 1.0;
        return out;
    }
    if (l > 3) throw DivergenceError("I_ab: dimensions above 3 are out of scope");
    if (a < 0 || a > admissible_max(p) || b < 0 || b > admissible_max(p))
        throw RegionError("I_ab: (a,b) not admissible");
    if (p.mu.imag() <= 0.0 || p.mu.imag() >= kTwoPi)
        throw RegionError("I_ab: requires 0 < Im mu < 2*pi");

    const double ka = p.kappa;
    // Envelope decay rates of Xi*p*P along the line: Im(mu)/kappa above,
    // (2*pi - Im(mu))/kappa below.
    const double margin = std::log(100.0 / cfg.rel_tol) + 4.0;
    const double base_up = margin * ka / p.mu.imag() + std::abs(p.z.imag()) + 2.0 * ka;
    const double base_dn = margin * ka / (kTwoPi - p.mu.imag()) + std::abs(p.z.imag()) + 2.0 * ka;

    std::mutex diag_mtx;
    double worst_inner_rel = 0.0;
    std::atomic<long> evals{0};

    // Per-variable block of Xi in log space; the fixed outer contributions
    // accumulate down the recursion so each node computes only its own.
    const double m2d = static_cast<double>(p.m2);
    auto single_log = [&](cplx tv) {
        return (p.mu - kI * kPi) * tv / ka + log_gamma(tv / ka) +
               log_gamma(-(p.m1 + tv) / ka) + log_gamma_k(tv - p.z, ka) +
               log_gamma_k(p.z - m2d - tv, ka);
    };
    auto cross_log = [&](cplx d) {
        return std::log(d) + log_sin_k(d, ka) + log_gamma_k(d + 1.0, ka) +
               log_gamma_k(1.0 - d, ka);
    };
    const int pref_pow = l * (l + 3) / 2;
    const cplx pref_log = -static_cast<double>(pref_pow) * std::log(kPi * ka);
    const double sign = (pref_pow % 2) ? -1.0 : 1.0;

    // p * P with the trigonometric part scaled against e^{pi |Im t|/kappa}
    auto weights = [&](std::span<const cplx> tv, double scale) {
        cplx p_val = 0.0, P_scaled = 0.0;
        std::array<int, 3> idx{0, 1, 2};
        do {
            cplx pterm = 1.0;
            cplx Pterm = -scale;
            for (int u = 0; u < l; ++u) {
                const cplx tu = tv[static_cast<size_t>(idx[static_cast<size_t>(u)])];
                if (u < l - a) pterm *= tu - p.z + m2d;
                else pterm *= tu;
                if (u < l - b) Pterm += log_sin_k(tu - p.z + m2d, ka);
                else Pterm += log_sin_pi(tu / ka);
            }
            for (int u = 0; u < l; ++u)
                for (int v = u + 1; v < l; ++v) {
                    const cplx d = tv[static_cast<size_t>(idx[static_cast<size_t>(u)])] -
                                   tv[static_cast<size_t>(idx[static_cast<size_t>(v)])];
                    pterm *= (d - 1.0) / d;
                    Pterm += log_sin_k(d - 1.0, ka) - log_sin_k(d, ka);
                }
            p_val += pterm;
            P_scaled += std::exp(Pterm);
        } while (std::next_permutation(idx.begin(), idx.begin() + l));
        return p_val * P_scaled * exp_k(static_cast<double>(b) * p.z, ka);
    };

    std::function<IntegralResult(int, cplx, std::vector<cplx>&)> level_int =
        [&](int u, cplx fixed_log, std::vector<cplx>& t) -> IntegralResult {
        BarnesOptions bo;
        const double pad = static_cast<double>(l - 1 - u) * (2.0 * ka + 3.0);
        bo.t_up = base_up + pad;
        bo.t_down = base_dn + pad;
        // Geometric clearance hierarchy: level u's threading requirement
        // (4x its clearance) must stay below what level u+1 guarantees for
        // the fixed outer points, and wider outer margins bound the spike
        // height of the inner integrand near the derived pinch loci.
        bo.clearance = ka * 0.008 * std::pow(5.0, static_cast<double>(u));
        std::span<const cplx> outer(t.data() + u + 1, static_cast<size_t>(l - 1 - u));
        auto [path, rep] = barnes_line(barnes_families(p, u, outer), ka, bo);
        (void)rep;
        QuadConfig icfg = cfg;
        icfg.threads = (u == l - 1) ? cfg.threads : 1;
        if (u < l - 1) {
            icfg.max_subdivisions = std::min(cfg.max_subdivisions, 500);
            icfg.rel_tol = cfg.rel_tol * 0.3;  // inner noise below outer targets
        }
        return integrate_path(
            [&](cplx tv, double) {
                std::vector<cplx> tloc = t;  // own copy: outer panels may run in parallel
                tloc[static_cast<size_t>(u)] = tv;
                cplx node_log = fixed_log + single_log(tv);
                for (int v = u + 1; v < l; ++v)
                    node_log += cross_log(tv - tloc[static_cast<size_t>(v)]);
                if (u > 0) {
                    IntegralResult inner = level_int(u - 1, node_log, tloc);
                    {
                        std::scoped_lock lk(diag_mtx);
                        merge_result(out, inner, worst_inner_rel);
                    }
                    if (std::getenv("QHD_PROGRESS")) {
                        static std::atomic<long> outer_calls{0};
                        const long oc = outer_calls.fetch_add(1) + 1;
                        if (oc % 100 == 0)
                            std::fprintf(stderr, "[I_ab] outer=%ld inner_evals=%ld last_inner=%ld warn=%zu\n",
                                         oc, evals.load(), inner.n_evals, inner.warnings.size());
                    }
                    return inner.value;
                }
                evals.fetch_add(1, std::memory_order_relaxed);
                double scale = 0.0;
                for (int w = 0; w < l; ++w)
                    scale += kPi * std::abs(tloc[static_cast<size_t>(w)].imag()) / ka;
                return sign * std::exp(node_log + scale) * weights(tloc, scale);
            },
            path, icfg);
    };

    std::vector<cplx> t0(static_cast<size_t>(l));
    IntegralResult top = level_int(l - 1, pref_log, t0);
    out.value = top.value;
    out.err_estimate = top.err_estimate + worst_inner_rel * std::abs(top.value);
    out.n_evals = evals;
    for (auto& w : top.warnings) out.warnings.push_back(std::move(w));
    dedup_warnings(out);
    return out;
}

// ---------------------------------------------------------------------------
// Branched loop integration, shared by J_ab and selberg_B_quad
// ---------------------------------------------------------------------------

namespace {

// One multivalued single-variable factor: value function, its exponent, and
// the anchored log at the loop's base point.
struct LoopFactor {
    std::function<cplx(cplx)> fn;
    cplx exponent;
    std::function<cplx(cplx)> anchor_log;  // convention-correct log at anchors
};

struct LoopSpec {
    std::vector<LoopFactor> factors;         // applied per variable
    cplx pair_exponent;                      // exponent of (t_u - t_v), u < v
    std::function<cplx(std::span<const cplx>)> smooth;  // single-valued rest
};

// Iterated integration over per-variable loops with continuous branch
// tracking: per-variable factor tables are built once; the pair factor
// (t_u - t_v) gets an h-table along the outer loop and a fresh sweep table
// along the inner loop for every fixed outer point (re-anchored per sweep).
IntegralResult integrate_loops_branched(const Contour& c, const LoopSpec& spec,
                                        const QuadConfig& cfg) {
    IntegralResult out;
    const int l = static_cast<int>(c.vars.size());
    if (l == 0) {
        out.value = 1.0;
        return out;
    }
    const size_t nf = spec.factors.size();

    // single-variable tables
    std::vector<std::vector<BranchTable>> single(static_cast<size_t>(l));
    for (int u = 0; u < l; ++u) {
        const Path& path = c.vars[static_cast<size_t>(u)];
        for (size_t k = 0; k < nf; ++k) {
            single[static_cast<size_t>(u)].emplace_back(
                path, spec.factors[k].fn, spec.factors[k].anchor_log(path.anchor_point));
        }
    }
    // h-tables: log(anchor_u - t_v(s)) along loop v for u < v, anchored with
    // arg(anchor_u - anchor_v) in [0, 2*pi)
    std::vector<std::vector<BranchTable>> hpair(static_cast<size_t>(l),
                                                std::vector<BranchTable>(static_cast<size_t>(l)));
    for (int u = 0; u < l; ++u) {
        const cplx au = c.vars[static_cast<size_t>(u)].anchor_point;
        for (int v = u + 1; v < l; ++v) {
            const cplx av = c.vars[static_cast<size_t>(v)].anchor_point;
            const cplx d0 = au - av;
            const cplx anchor_log(std::log(std::abs(d0)), arg_in(d0, 0.0));
            hpair[static_cast<size_t>(u)][static_cast<size_t>(v)] =
                BranchTable(c.vars[static_cast<size_t>(v)],
                            [au](cplx tv) { return au - tv; }, anchor_log);
        }
    }

    std::vector<cplx> t(static_cast<size_t>(l));
    std::vector<double> s_of(static_cast<size_t>(l), 0.0);
    // pair_logs[u][v] holds the current continued log of (t_u - t_v)
    std::vector<std::vector<cplx>> pair_logs(static_cast<size_t>(l),
                                             std::vector<cplx>(static_cast<size_t>(l)));
    std::vector<cplx> single_logs(static_cast<size_t>(l) * nf);

    double worst_inner_rel = 0.0;
    long evals = 0;

    std::function<IntegralResult(int)> level_int = [&](int u) -> IntegralResult {
        const Path& path = c.vars[static_cast<size_t>(u)];
        // sweep tables for pairs (u, v) with v > u, anchored from the h-table
        // at the outer position
        std::vector<BranchTable> sweep;
        sweep.reserve(static_cast<size_t>(l - u - 1));
        for (int v = u + 1; v < l; ++v) {
            const cplx tv = t[static_cast<size_t>(v)];
            const cplx start =
                hpair[static_cast<size_t>(u)][static_cast<size_t>(v)].log_at(
                    s_of[static_cast<size_t>(v)]);
            sweep.emplace_back(path, [tv](cplx tu) { return tu - tv; }, start);
        }
        auto body = [&](cplx tu, double s) -> cplx {
            t[static_cast<size_t>(u)] = tu;
            s_of[static_cast<size_t>(u)] = s;
            for (int v = u + 1; v < l; ++v)
                pair_logs[static_cast<size_t>(u)][static_cast<size_t>(v)] =
                    sweep[static_cast<size_t>(v - u - 1)].log_at(s);
            if (u > 0) {
                IntegralResult inner = level_int(u - 1);
                merge_result(out, inner, worst_inner_rel);
                return inner.value;
            }
            ++evals;
            for (int w = 0; w < l; ++w)
                for (size_t k = 0; k < nf; ++k)
                    single_logs[static_cast<size_t>(w) * nf + k] =
                        single[static_cast<size_t>(w)][k].log_at(s_of[static_cast<size_t>(w)]);
            cplx expo = 0.0;
            for (int w = 0; w < l; ++w)
                for (size_t k = 0; k < nf; ++k)
                    expo += spec.factors[k].exponent *
                            single_logs[static_cast<size_t>(w) * nf + k];
            for (int uu = 0; uu < l; ++uu)
                for (int vv = uu + 1; vv < l; ++vv)
                    expo += spec.pair_exponent * pair_logs[static_cast<size_t>(uu)][static_cast<size_t>(vv)];
            return std::exp(expo) * spec.smooth(t);
        };
        return integrate_path(body, path, cfg);
    };

    IntegralResult top = level_int(l - 1);
    out.value = top.value;
    out.err_estimate = top.err_estimate + worst_inner_rel * std::abs(top.value);
    out.n_evals = evals;
    for (auto& w : top.warnings) out.warnings.push_back(std::move(w));
    dedup_warnings(out);
    return out;
}

}  // namespace

IntegralResult J_ab(const Params& pd, int a, int b, const QuadConfig& cfg,
                    double radius_scale) {
    const int l = pd.l2;  // dimension = l2 slot of the (dual) tuple
    IntegralResult out;
    if (l == 0) {
        out.value = 1.0;
        return out;
    }
    if (l > 3) throw DivergenceError("J_ab: dimensions above 3 are out of scope");
    if (a < 0 || a > admissible_max(pd) || b < 0 || b > admissible_max(pd))
        throw RegionError("J_ab: (a,b) not admissible");

    const double ka = pd.kappa;
    const cplx z = pd.z;
    const cplx alpha = (pd.mu + pd.m1 + static_cast<double>(pd.m2) - 2.0 * l + 1.0) / ka;

    // power-law tail exponent along the rays (g contributes one inverse power)
    const double a_tot = alpha.real() + (-pd.m1 / ka).real() +
                         (-static_cast<double>(pd.m2) / ka) +
                         2.0 * (l - 1) / ka - 1.0;
    if (a_tot > -1.5) {
        std::ostringstream os;
        os << "J_ab: ray tail exponent " << a_tot
           << " too weak for convergence (Re of the mu slot must be << 0)";
        throw RegionError(os.str());
    }
    LoopOptions lo;
    lo.truncation = std::min(
        1e7, std::max(3.0 * (1.0 + std::abs(z)),
                      std::pow(cfg.rel_tol * 1e-2, 1.0 / (a_tot + 1.0))));
    if (radius_scale != 1.0) {
        lo.radius_hint = radius_scale * 0.3 * std::min(1.0, std::abs(z - 1.0)) /
                         static_cast<double>(std::max(l, 1));
    }
    Contour c = loops_J(z, b, l, ka, lo);

    Params pl = pd;  // exponents read from the J-side slots
    LoopSpec spec;
    spec.factors.push_back({[](cplx t) { return t; }, alpha,
                            [](cplx t0) { return cplx(std::log(std::abs(t0)), arg_in(t0, 0.0)); }});
    spec.factors.push_back({[](cplx t) { return 1.0 - t; }, -pd.m1 / ka,
                            [](cplx t0) { return std::log(1.0 - t0); }});
    spec.factors.push_back(
        {[z](cplx t) { return z - t; }, -static_cast<double>(pd.m2) / ka, [z](cplx t0) {
             const cplx w = z - t0;
             return cplx(std::log(std::abs(w)), arg_in(w, 0.0));
         }});
    spec.pair_exponent = 2.0 / ka;
    spec.smooth = [pl, a](std::span<const cplx> t) { return g_weight(t, pl, a); };

    out = integrate_loops_branched(c, spec, cfg);
    // power-law tail estimate for the truncated rays
    const double tail = std::pow(lo.truncation, a_tot + 1.0) / std::abs(a_tot + 1.0);
    out.err_estimate += tail * std::abs(out.value);
    if (tail > cfg.rel_tol)
        out.warnings.push_back("J_ab: ray truncation tail above requested tolerance");
    return out;
}

// ---------------------------------------------------------------------------
// Selberg closed forms and quadratures
// ---------------------------------------------------------------------------

SelbergClosedForm selberg_A(int l, cplx mu, cplx m, double kappa) {
    if (mu.imag() <= 0.0 || mu.imag() >= kTwoPi)
        throw RegionError("selberg_A: requires 0 < Im mu < 2*pi");
    SelbergClosedForm out;
    out.branch_note = "arg(1-e^mu) in (-pi,pi); log(2*pi*i) principal";
    cplx lv = static_cast<double>(l) * std::log(cplx(0.0, kTwoPi));
    lv += (mu - kI * kPi) * static_cast<double>(l) * (l - 1.0 - 2.0 * m) / (2.0 * kappa);
    lv += static_cast<double>(l) * (m - static_cast<double>(l) + 1.0) / kappa * std::log(1.0 - std::exp(mu));
    for (int j = 0; j < l; ++j) {
        lv += log_gamma(1.0 + (j + 1.0) / kappa) - log_gamma(1.0 + 1.0 / kappa);
        lv += log_gamma_k(static_cast<double>(j) - m, kappa);
    }
    out.log_value = lv;
    return out;
}

SelbergClosedForm selberg_B(int m, cplx l, double kappa) {
    SelbergClosedForm out;
    out.branch_note = "log(-2*pi*i) principal; kappa power real";
    cplx lv = static_cast<double>(m) * std::log(cplx(0.0, -kTwoPi));
    lv += static_cast<double>(m) * (m - 1.0 - l) / kappa * std::log(kappa);
    for (int j = 0; j < m; ++j) {
        lv += log_gamma(1.0 - 1.0 / kappa);
        lv -= log_gamma(1.0 + (l - static_cast<double>(j)) / kappa);
        lv -= log_gamma(1.0 - (j + 1.0) / kappa);
    }
    out.log_value = lv;
    return out;
}

IntegralResult selberg_A_quad(int l, cplx mu, cplx m, double kappa, const QuadConfig& cfg) {
    IntegralResult out;
    if (l == 0) {
        out.value = 1.0;
        return out;
    }
    if (l > 3) throw DivergenceError("selberg_A_quad: l above 3 is out of scope");
    if (m.real() >= 0.0)
        throw RegionError("selberg_A_quad: requires Re m < 0 (straight-line region)");
    if (mu.imag() <= 0.0 || mu.imag() >= kTwoPi)
        throw RegionError("selberg_A_quad: requires 0 < Im mu < 2*pi");

    // straight vertical line in the s variables between the families
    // {-N} (left) and {-m/kappa + N} (right)
    const double margin = std::log(100.0 / cfg.rel_tol) + 4.0;
    BarnesOptions bo;
    bo.t_up = margin / mu.imag() + std::abs(m.imag() / kappa) + 2.0;
    bo.t_down = margin / (kTwoPi - mu.imag()) + std::abs(m.imag() / kappa) + 2.0;
    bo.eps_hint = -m.real() / (2.0 * kappa);
    bo.clearance = 1e-3;
    bo.band_halfheight = 0.15;
    std::vector<PoleFamily> fams = {{cplx(0.0), -1.0, false, "-N"},
                                    {-m / kappa, 1.0, true, "-m/kappa+N"}};
    auto [path, rep] = barnes_line(fams, 1.0, bo);
    (void)rep;

    std::vector<Path> vars(static_cast<size_t>(l), path);
    auto f = [&](std::span<const cplx> s) -> cplx {
        cplx lg = 0.0;
        for (int u = 0; u < l; ++u) {
            lg += (mu - kI * kPi) * s[static_cast<size_t>(u)];
            lg += log_gamma(s[static_cast<size_t>(u)]) +
                  log_gamma(-s[static_cast<size_t>(u)] - m / kappa);
        }
        cplx entire = 1.0;
        for (int u = 0; u < l; ++u)
            for (int v = u + 1; v < l; ++v) {
                const cplx d = s[static_cast<size_t>(u)] - s[static_cast<size_t>(v)];
                // Gamma(d+1/kappa) Gamma(-d+1/kappa) / (Gamma(d) Gamma(-d)),
                // with 1/(Gamma(d)Gamma(-d)) = -d sin(pi d)/pi (entire)
                lg += log_gamma(d + 1.0 / kappa) + log_gamma(-d + 1.0 / kappa);
                entire *= -d * std::sin(kPi * d) / kPi;
            }
        return std::exp(lg) * entire;
    };
    return integrate_product(f, vars, cfg);
}

IntegralResult selberg_B_quad(int m, cplx l, double kappa, const QuadConfig& cfg) {
    IntegralResult out;
    if (m == 0) {
        out.value = 1.0;
        return out;
    }
    if (m > 3) throw DivergenceError("selberg_B_quad: m above 3 is out of scope");
    const double trunc = kappa * (std::log(100.0 / cfg.rel_tol) + 6.0);
    Contour c = loops_B(m, trunc, kappa);

    LoopSpec spec;
    spec.factors.push_back(
        {[](cplx s) { return -s; }, -1.0 - l / kappa, [](cplx s0) {
             return cplx(std::log(std::abs(s0)), 0.0);  // arg(-s)=0 at the anchor
         }});
    spec.pair_exponent = 2.0 / kappa;
    const double ka = kappa;
    spec.smooth = [ka, m](std::span<const cplx> s) {
        cplx sum = 0.0;
        for (int u = 0; u < m; ++u) sum += s[static_cast<size_t>(u)];
        return std::exp(-sum / ka);
    };
    return integrate_loops_branched(c, spec, cfg);
}

// ---------------------------------------------------------------------------
// Asymptotic leading terms
// ---------------------------------------------------------------------------

cplx I_asymptotic(const Params& p, int a, int b) {
    if (a != b) return 0.0;
    const int l2 = p.l2;
    const double ka = p.kappa;
    if (p.z.real() > -1.0) throw RegionError("I_asymptotic: requires Re z << 0");
    cplx lv = log_gamma(l2 + 1.0) + log_gamma(l2 - b + 1.0) + log_gamma(b + 1.0);
    lv -= static_cast<double>(l2) * std::log(kPi);
    lv += p.mu * p.z * static_cast<double>(b) / ka;
    const double db = static_cast<double>(b);
    const cplx expo = -(2.0 * db * db + db * (p.m1 - static_cast<double>(p.m2) - 2.0 * l2) +
                        static_cast<double>(p.m2) * l2) / ka;
    lv += expo * std::log(-p.z / ka);
    lv += selberg_A(l2 - b, p.mu, p.m1, ka).log_value;
    lv += selberg_A(b, p.mu, static_cast<double>(p.m2), ka).log_value;
    const double sign = (l2 % 2) ? -1.0 : 1.0;  // (-pi)^{-l2}
    return sign * std::exp(lv);
}

cplx J_asymptotic(const Params& p, int a, int b) {
    if (a != b) return 0.0;
    const double ka = p.kappa;
    const double m2 = static_cast<double>(p.m2);
    const double l2 = static_cast<double>(p.l2);
    if (p.z.real() > -1.0) throw RegionError("J_asymptotic: requires Re z << 0");
    const double db = static_cast<double>(b);
    cplx lv = log_gamma(m2 - db + 1.0) + log_gamma(db + 1.0);
    lv += kI * kPi * (m2 - db) * (2.0 * db - l2) / ka;
    lv += p.mu * db * (p.z + p.l1 - 2.0 * m2 + db) / ka;
    const cplx e1 = -(2.0 * db * db + db * (p.l1 - l2 - 2.0 * m2) + m2 * l2) / ka;
    lv += e1 * std::log(1.0 - std::exp(p.mu));
    const cplx e2 = -(2.0 * db * db + db * (p.l1 - l2 - 2.0 * m2) + m2 * (m2 - p.l1 - 1.0)) / ka;
    lv += e2 * std::log(-p.z);
    lv += selberg_B(p.m2 - b, p.l1, ka).log_value;
    lv += selberg_B(b, l2, ka).log_value;
    return std::exp(lv);
}

}  // namespace qhd
