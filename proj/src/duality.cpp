#include "qhd/duality.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "qhd/errors.hpp"
#include "qhd/integrals.hpp"
#include "qhd/special.hpp"

namespace qhd {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);
}  // namespace

ConnectionFactors factors(const Params& p, int b) {
    const double ka = p.kappa;
    const int l2 = p.l2, m2 = p.m2;
    ConnectionFactors f;

    // C_b = (2 pi i)^{-l2} / (l2! (l2-b)! b!) * prod sin_k(m1-j) * prod sin_k(m2-j)
    //       * prod_j Gamma(1+1/k) Gamma(1+(m1-j)/k) / Gamma(1+(j+1)/k)
    cplx lc = -static_cast<double>(l2) * std::log(cplx(0.0, 2.0 * kPi));
    lc -= log_gamma(l2 + 1.0) + log_gamma(l2 - b + 1.0) + log_gamma(b + 1.0);
    for (int j = 0; j < l2 - b; ++j) lc += log_sin_k(p.m1 - static_cast<double>(j), ka);
    for (int j = 0; j < b; ++j) lc += log_sin_k(static_cast<double>(m2 - j), ka);
    for (int j = 0; j < l2; ++j) {
        lc += log_gamma(1.0 + 1.0 / ka) + log_gamma(1.0 + (p.m1 - static_cast<double>(j)) / ka) -
              log_gamma(1.0 + (j + 1.0) / ka);
    }
    f.log_C = lc;

    // D_b = (2i)^{-m2} * prod 1/sin_k(j+1) [two blocks]
    //       * prod_j Gamma(1+(l1-j)/k) / (Gamma(-1/k) Gamma(1+(j+1)/k))
    cplx ld = -static_cast<double>(m2) * std::log(cplx(0.0, 2.0));
    for (int j = 0; j < m2 - b; ++j) ld -= log_sin_k(static_cast<double>(j + 1), ka);
    for (int j = 0; j < b; ++j) ld -= log_sin_k(static_cast<double>(j + 1), ka);
    for (int j = 0; j < m2; ++j) {
        ld += log_gamma(1.0 + (p.l1 - static_cast<double>(j)) / ka) -
              log_gamma(-1.0 / ka) - log_gamma(1.0 + (j + 1.0) / ka);
    }
    f.log_D = ld;

    // E_b = exp_k(b^2 - (b-l2)(l1+l2) - l2(l2-1)/2)
    const cplx earg = static_cast<double>(b) * b -
                      (static_cast<double>(b) - l2) * (p.l1 + static_cast<double>(l2)) -
                      l2 * (l2 - 1.0) / 2.0;
    f.log_E = kI * kPi * earg / ka;

    // X(z; m1, m2) = prod_j Gamma_k(j - m1 - z) / Gamma_k(j + 1 - z)
    cplx lx = 0.0;
    for (int j = 0; j < m2; ++j) {
        lx += log_gamma_k(static_cast<double>(j) - p.m1 - p.z, ka) -
              log_gamma_k(static_cast<double>(j) + 1.0 - p.z, ka);
    }
    f.log_X = lx;

    // Y(mu) = e^{mu l2 (l2-2m1-1)/(2k)} (1-e^mu)^{(l1+1) l2 / k},
    // arg(1-e^mu) in (-pi, pi)
    f.log_Y = p.mu * static_cast<double>(l2) * (static_cast<double>(l2) - 2.0 * p.m1 - 1.0) /
                  (2.0 * ka) +
              (p.l1 + 1.0) * static_cast<double>(l2) / ka * std::log(1.0 - std::exp(p.mu));
    return f;
}

cplx G_factor(cplx t, const Params& p) {
    cplx v = 1.0;
    for (int j = 0; j < p.m2; ++j) {
        const cplx den = t + static_cast<double>(j) + 1.0;
        if (std::abs(den) < 1e-12) throw PoleError("G_factor: pole at t = -j-1");
        v *= (t + static_cast<double>(j) - p.m1) / den;
    }
    return v;
}

double check_S_equation(const Params& p, cplx t) {
    // S(t) = X(-t); S(t+kappa)/S(t) should equal G(t)
    auto logX_at = [&](cplx tt) {
        cplx lx = 0.0;
        for (int j = 0; j < p.m2; ++j) {
            lx += log_gamma_k(static_cast<double>(j) - p.m1 - tt, p.kappa) -
                  log_gamma_k(static_cast<double>(j) + 1.0 - tt, p.kappa);
        }
        return lx;
    };
    const cplx ratio = std::exp(logX_at(-t - p.kappa) - logX_at(-t));
    const cplx g = G_factor(t, p);
    return std::abs(ratio - g) / std::abs(g);
}

Theorem1Report verify_theorem1(const Params& p, const QuadConfig& cfg) {
    Theorem1Report rep;
    rep.params = p;
    rep.flags = region_flags(p);
    const Params pd = dual_params(p);
    const int k = admissible_max(p);

    for (int a = 0; a <= k; ++a) {
        for (int b = 0; b <= k; ++b) {
            Theorem1Entry e;
            e.a = a;
            e.b = b;
            const IntegralResult iv = I_ab(p, a, b, cfg);
            const IntegralResult jv = J_ab(pd, a, b, cfg);
            const ConnectionFactors f = factors(p, b);
            e.I_value = iv.value;
            e.J_value = jv.value;
            e.lhs = f.C() * iv.value;
            e.rhs = std::exp(f.log_D + f.log_E + f.log_X + f.log_Y) * jv.value;
            const double scale = std::max(std::abs(e.lhs), std::abs(e.rhs));
            e.residual = scale > 0 ? std::abs(e.lhs - e.rhs) / scale : 0.0;
            e.quad_err = iv.err_estimate + jv.err_estimate;
            e.n_evals = iv.n_evals + jv.n_evals;
            rep.max_residual = std::max(rep.max_residual, e.residual);
            for (const auto& w : iv.warnings) rep.warnings.push_back(w);
            for (const auto& w : jv.warnings) rep.warnings.push_back(w);
            rep.entries.push_back(e);
        }
    }
    return rep;
}

ConnectionMatrixReport connection_matrix(const Params& p, const QuadConfig& cfg) {
    ConnectionMatrixReport rep;
    const Params pd = dual_params(p);
    const int k = admissible_max(p);
    const int n = k + 1;
    rep.dim = n;

    Eigen::MatrixXcd Imat(n, n), Jmat(n, n);
    for (int a = 0; a <= k; ++a)
        for (int c = 0; c <= k; ++c) Imat(a, c) = I_ab(p, a, c, cfg).value;
    for (int a = 0; a <= k; ++a)
        for (int b = 0; b <= k; ++b) Jmat(a, b) = J_ab(pd, a, b, cfg).value;

    const cplx Xz = factors(p, 0).X();

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Imat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    rep.condition_number = svd.singularValues()(0) / svd.singularValues()(n - 1);

    Eigen::MatrixXcd G(n, n);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(Imat);
    for (int b = 0; b < n; ++b) {
        const Eigen::VectorXcd rhs = Xz * Jmat.col(b);
        const Eigen::VectorXcd g = qr.solve(rhs);
        for (int c = 0; c < n; ++c) G(b, c) = g(c);
    }

    rep.G.assign(static_cast<size_t>(n), std::vector<cplx>(static_cast<size_t>(n)));
    double max_diag = 0.0, max_off = 0.0;
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
            rep.G[static_cast<size_t>(b)][static_cast<size_t>(c)] = G(b, c);
            if (b == c)
                max_diag = std::max(max_diag, std::abs(G(b, c)));
            else
                max_off = std::max(max_off, std::abs(G(b, c)));
        }
    rep.offdiag_over_norm = max_diag > 0 ? max_off / max_diag : 0.0;

    rep.expected_diag.resize(static_cast<size_t>(n));
    rep.diag_match = 0.0;
    for (int b = 0; b < n; ++b) {
        const ConnectionFactors f = factors(p, b);
        const cplx expect = std::exp(f.log_C - f.log_D - f.log_E - f.log_Y);
        rep.expected_diag[static_cast<size_t>(b)] = expect;
        rep.diag_match =
            std::max(rep.diag_match, std::abs(G(b, b) - expect) / std::abs(expect));
    }
    return rep;
}

}  // namespace qhd
