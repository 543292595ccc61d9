#include "qhd/integrand.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qhd/errors.hpp"
#include "qhd/special.hpp"

namespace qhd {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

// visit all permutations of {0..l-1}
template <typename F>
void for_each_permutation(int l, F&& body) {
    std::array<int, 8> idx{};
    std::iota(idx.begin(), idx.begin() + l, 0);
    do {
        body(std::span<const int>(idx.data(), static_cast<size_t>(l)));
    } while (std::next_permutation(idx.begin(), idx.begin() + l));
}

}  // namespace

SymExpr sym(int l, std::function<cplx(std::span<const cplx>)> f, int cap) {
    if (l > cap) throw DivergenceError("sym: variable count exceeds the symmetrization cap");
    SymExpr s;
    s.l = l;
    s.evaluator = [l, f = std::move(f)](std::span<const cplx> t) {
        cplx acc = 0.0;
        std::vector<cplx> ts(static_cast<size_t>(l));
        for_each_permutation(l, [&](std::span<const int> idx) {
            for (int i = 0; i < l; ++i) ts[static_cast<size_t>(i)] = t[static_cast<size_t>(idx[i])];
            acc += f(ts);
        });
        return acc;
    };
    return s;
}

cplx phi_q(std::span<const cplx> t, const Params& p) {
    const int l = static_cast<int>(t.size());
    const double ka = p.kappa;
    cplx logv = 0.0;
    for (int u = 0; u < l; ++u) {
        logv += p.mu * t[u] / ka;
        logv += log_gamma(t[u] / ka) + log_gamma_k(t[u] - p.z, ka);
        logv -= log_gamma_k(t[u] + p.m1, ka) +
                log_gamma_k(t[u] - p.z + static_cast<double>(p.m2), ka);
    }
    for (int u = 0; u < l; ++u)
        for (int v = u + 1; v < l; ++v)
            logv += log_gamma_k(t[u] - t[v] + 1.0, ka) - log_gamma_k(t[u] - t[v] - 1.0, ka);
    return std::exp(logv);
}

cplx w_rat(std::span<const cplx> t, const Params& p, int a) {
    const int l = static_cast<int>(t.size());
    cplx pre = 1.0;
    for (int u = 0; u < l; ++u)
        for (int v = u + 1; v < l; ++v) pre *= (t[u] - t[v]) / (t[u] - t[v] - 1.0);
    for (int u = 0; u < l; ++u) pre /= (t[u] + p.m1);
    auto bracket = sym(l, [&, a, l](std::span<const cplx> ts) {
        cplx term = 1.0;
        for (int u = l - a; u < l; ++u)
            term *= ts[u] / (ts[u] - p.z + static_cast<double>(p.m2));
        for (int u = 0; u < l; ++u)
            for (int v = u + 1; v < l; ++v) term *= (ts[u] - ts[v] - 1.0) / (ts[u] - ts[v]);
        return term;
    });
    return pre * bracket(t);
}

cplx w_trig(std::span<const cplx> t, const Params& p, int b) {
    const int l = static_cast<int>(t.size());
    const double ka = p.kappa;
    cplx pre = 1.0;
    for (int u = 0; u < l; ++u)
        for (int v = u + 1; v < l; ++v)
            pre *= sin_k(t[u] - t[v], ka) / sin_k(t[u] - t[v] - 1.0, ka);
    for (int u = 0; u < l; ++u)
        pre *= std::exp(-kI * kPi * t[u] / ka) / sin_k(t[u] + p.m1, ka);
    auto bracket = sym(l, [&, b, l](std::span<const cplx> ts) {
        cplx term = 1.0;
        for (int u = l - b; u < l; ++u)
            term *= std::exp(kI * kPi * p.z / ka) * std::sin(kPi * ts[u] / ka) /
                    sin_k(ts[u] - p.z + static_cast<double>(p.m2), ka);
        for (int u = 0; u < l; ++u)
            for (int v = u + 1; v < l; ++v)
                term *= sin_k(ts[u] - ts[v] - 1.0, ka) / sin_k(ts[u] - ts[v], ka);
        return term;
    });
    return pre * bracket(t);
}

cplx xi_pP(std::span<const cplx> t, const Params& p, int a, int b) {
    const int l = static_cast<int>(t.size());
    if (l == 0) return 1.0;
    const double ka = p.kappa;
    const double m2 = static_cast<double>(p.m2);

    // log Xi_l, fully in log space (the four gamma families balance en route
    // to large |Im t| but the individual factors overflow doubles).
    const int pref_pow = l * (l + 3) / 2;
    cplx logv = -static_cast<double>(pref_pow) * std::log(kPi * ka);
    cplx sign = (pref_pow % 2) ? -1.0 : 1.0;  // (-pi*kappa)^{-pref_pow}
    for (int u = 0; u < l; ++u) {
        logv += (p.mu - kI * kPi) * t[u] / ka;
        logv += log_gamma(t[u] / ka) + log_gamma(-(p.m1 + t[u]) / ka) +
                log_gamma_k(t[u] - p.z, ka) + log_gamma_k(p.z - m2 - t[u], ka);
    }
    for (int u = 0; u < l; ++u)
        for (int v = u + 1; v < l; ++v) {
            const cplx d = t[u] - t[v];
            logv += std::log(d) + log_sin_k(d, ka) + log_gamma_k(d + 1.0, ka) +
                    log_gamma_k(1.0 - d, ka);
        }

    // p_{l-a,a}: polynomial, safe directly
    auto p_poly = sym(l, [&, a, l](std::span<const cplx> ts) {
        cplx term = 1.0;
        for (int u = 0; u < l - a; ++u) term *= ts[u] - p.z + m2;
        for (int u = l - a; u < l; ++u) term *= ts[u];
        for (int u = 0; u < l; ++u)
            for (int v = u + 1; v < l; ++v) term *= (ts[u] - ts[v] - 1.0) / (ts[u] - ts[v]);
        return term;
    });
    const cplx p_val = p_poly(t);

    // P_{l-b,b}: trigonometric polynomial; each permutation term evaluated in
    // log space against a common scale so e^{pi|Im t|/kappa} growth cancels.
    double scale = 0.0;
    for (int u = 0; u < l; ++u) scale += kPi * std::abs(t[u].imag()) / ka;
    cplx P_scaled = 0.0;
    std::vector<cplx> ts(static_cast<size_t>(l));
    for_each_permutation(l, [&](std::span<const int> idx) {
        for (int i = 0; i < l; ++i) ts[static_cast<size_t>(i)] = t[static_cast<size_t>(idx[i])];
        cplx lt = -scale;
        for (int u = 0; u < l - b; ++u) lt += log_sin_k(ts[u] - p.z + m2, ka);
        for (int u = l - b; u < l; ++u) lt += log_sin_pi(ts[u] / ka);
        for (int u = 0; u < l; ++u)
            for (int v = u + 1; v < l; ++v)
                lt += log_sin_k(ts[u] - ts[v] - 1.0, ka) - log_sin_k(ts[u] - ts[v], ka);
        P_scaled += std::exp(lt);
    });
    const cplx P_pref = exp_k(static_cast<double>(b) * p.z, ka);

    return sign * std::exp(logv + scale) * p_val * P_pref * P_scaled;
}

cplx psi_master_from_logs(const Params& p, int l, std::span<const cplx> single_logs,
                          std::span<const cplx> pair_logs) {
    const double ka = p.kappa;
    const cplx e_t = (p.mu + p.m1 + static_cast<double>(p.m2) - 2.0 * l + 1.0) / ka;
    const cplx e_1 = -p.m1 / ka;
    const cplx e_z = -static_cast<double>(p.m2) / ka;
    cplx expo = 0.0;
    for (int u = 0; u < l; ++u) {
        expo += e_t * single_logs[static_cast<size_t>(3 * u)];
        expo += e_1 * single_logs[static_cast<size_t>(3 * u + 1)];
        expo += e_z * single_logs[static_cast<size_t>(3 * u + 2)];
    }
    for (const cplx& lg : pair_logs) expo += (2.0 / ka) * lg;
    return std::exp(expo);
}

cplx psi_master(cplx t, const Params& p, const BranchState& state) {
    if (std::abs(t - state.point) > 1e-12 * (1.0 + std::abs(t)))
        throw BranchStepError("psi_master: branch state is not at the evaluation point");
    return psi_master_from_logs(p, 1, state.logs, {});
}

cplx g_weight(std::span<const cplx> t, const Params& p, int a) {
    const int l = static_cast<int>(t.size());
    auto bracket = sym(l, [&, a, l](std::span<const cplx> ts) {
        cplx term = 1.0;
        for (int u = 0; u < l - a; ++u) term /= (1.0 - ts[u]);
        for (int u = l - a; u < l; ++u) term /= (p.z - ts[u]);
        return term;
    });
    return bracket(t);
}

}  // namespace qhd
