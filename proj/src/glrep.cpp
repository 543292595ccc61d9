#include "qhd/glrep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "qhd/duality.hpp"
#include "qhd/errors.hpp"
#include "qhd/integrals.hpp"
#include "qhd/special.hpp"

namespace qhd {

namespace {
const cplx kI(0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Weight subspaces and gl2 actions
// ---------------------------------------------------------------------------

cplx WeightSubspace::weight1() const {
    cplx s = 0.0;
    for (const auto& m : mods) s += m.weight;
    return s - static_cast<double>(depth);
}

int WeightSubspace::index_of(const std::vector<int>& d) const {
    for (size_t k = 0; k < basis.size(); ++k)
        if (basis[k] == d) return static_cast<int>(k);
    return -1;
}

WeightSubspace weight_subspace(std::vector<ModuleDesc> mods, int depth) {
    WeightSubspace ws;
    ws.mods = std::move(mods);
    ws.depth = depth;
    if (depth < 0) return ws;
    const int n = static_cast<int>(ws.mods.size());
    std::vector<int> d(static_cast<size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int slot, int remaining) {
        if (slot == n - 1) {
            const auto& m = ws.mods[static_cast<size_t>(slot)];
            if (m.finite && remaining > static_cast<int>(m.weight.real() + 0.5)) return;
            d[static_cast<size_t>(slot)] = remaining;
            ws.basis.push_back(d);
            return;
        }
        const auto& m = ws.mods[static_cast<size_t>(slot)];
        int cap = remaining;
        if (m.finite) cap = std::min(cap, static_cast<int>(m.weight.real() + 0.5));
        for (int k = 0; k <= cap; ++k) {
            d[static_cast<size_t>(slot)] = k;
            rec(slot + 1, remaining - k);
        }
    };
    rec(0, depth);
    // order by the trailing slots ascending: n=2 coordinates are F^a, a = d_2
    std::sort(ws.basis.begin(), ws.basis.end(), [](const auto& x, const auto& y) {
        for (size_t k = x.size(); k-- > 0;) {
            if (x[k] != y[k]) return x[k] < y[k];
        }
        return false;
    });
    return ws;
}

Mat gl2_action(int i, int j, int slot, const WeightSubspace& from) {
    const int ddepth = (i == 2 && j == 1) ? 1 : (i == 1 && j == 2) ? -1 : 0;
    const WeightSubspace to =
        ddepth == 0 ? from : weight_subspace(from.mods, from.depth + ddepth);
    Mat M = Mat::Zero(std::max(to.dim(), 0), from.dim());
    const cplx m = from.mods[static_cast<size_t>(slot)].weight;
    const bool finite = from.mods[static_cast<size_t>(slot)].finite;
    const int mcap = finite ? static_cast<int>(m.real() + 0.5) : -1;
    for (int c = 0; c < from.dim(); ++c) {
        std::vector<int> d = from.basis[static_cast<size_t>(c)];
        const int dd = d[static_cast<size_t>(slot)];
        if (i == 1 && j == 1) {
            M(c, c) = m - static_cast<double>(dd);
        } else if (i == 2 && j == 2) {
            M(c, c) = static_cast<double>(dd);
        } else if (i == 2 && j == 1) {
            if (finite && dd + 1 > mcap) continue;  // annihilated in L_m
            d[static_cast<size_t>(slot)] = dd + 1;
            const int r = to.index_of(d);
            if (r >= 0) M(r, c) = static_cast<double>(dd + 1);
        } else {  // E_12 on the normalized basis
            if (dd == 0) continue;
            d[static_cast<size_t>(slot)] = dd - 1;
            const int r = to.index_of(d);
            if (r >= 0) M(r, c) = m - static_cast<double>(dd) + 1.0;
        }
    }
    return M;
}

Mat gl2_total(int i, int j, const WeightSubspace& from) {
    const int n = static_cast<int>(from.mods.size());
    Mat M = gl2_action(i, j, 0, from);
    for (int s = 1; s < n; ++s) M += gl2_action(i, j, s, from);
    return M;
}

// ---------------------------------------------------------------------------
// R-matrix (windowed defining-relations solve)
// ---------------------------------------------------------------------------

RMatrixResult build_R(cplx t, ModuleDesc V, ModuleDesc W, int depth) {
    std::vector<ModuleDesc> mods = {V, W};
    std::vector<WeightSubspace> levels;
    for (int L = 0; L <= depth; ++L) levels.push_back(weight_subspace(mods, L));

    std::vector<int> vofs(static_cast<size_t>(depth + 1), 0);
    int nv = 0;
    for (int L = 0; L <= depth; ++L) {
        vofs[static_cast<size_t>(L)] = nv;
        nv += levels[static_cast<size_t>(L)].dim() * levels[static_cast<size_t>(L)].dim();
    }

    std::vector<std::vector<cplx>> rows;
    auto add_rel = [&](const Mat& B1, const Mat& B2, int Lfrom, int Lto) {
        // R_{Lto} B1 - B2 R_{Lfrom} = 0
        const int kF = levels[static_cast<size_t>(Lfrom)].dim();
        const int kT = levels[static_cast<size_t>(Lto)].dim();
        for (int r = 0; r < kT; ++r)
            for (int c = 0; c < kF; ++c) {
                std::vector<cplx> row(static_cast<size_t>(nv), cplx(0.0));
                for (int q = 0; q < kT; ++q)
                    row[static_cast<size_t>(vofs[static_cast<size_t>(Lto)] + r * kT + q)] +=
                        B1(q, c);
                for (int q = 0; q < kF; ++q)
                    row[static_cast<size_t>(vofs[static_cast<size_t>(Lfrom)] + q * kF + c)] -=
                        B2(r, q);
                rows.push_back(std::move(row));
            }
    };

    for (int L = 0; L <= depth; ++L) {
        const WeightSubspace& ws = levels[static_cast<size_t>(L)];
        if (L + 1 <= depth) {
            const Mat up = gl2_total(2, 1, ws);
            add_rel(up, up, L, L + 1);
            const Mat e21a = gl2_action(2, 1, 0, ws);
            const Mat e21b = gl2_action(2, 1, 1, ws);
            const Mat e11a = gl2_action(1, 1, 0, ws);
            const Mat e11b = gl2_action(1, 1, 1, ws);
            const Mat e22a = gl2_action(2, 2, 0, ws);
            const Mat e22b = gl2_action(2, 2, 1, ws);
            // R (E21 x E11 + E22 x E21 + t E21 x 1) = (E11 x E21 + E21 x E22 + t E21 x 1) R
            const Mat lhs = e21a * e11b + e21b * e22a + t * e21a;
            const Mat rhs = e21b * e11a + e21a * e22b + t * e21a;
            add_rel(lhs, rhs, L, L + 1);
        }
        if (L - 1 >= 0) {
            const Mat dn = gl2_total(1, 2, ws);
            add_rel(dn, dn, L, L - 1);
        }
    }

    const int nr = static_cast<int>(rows.size());
    Mat sys = Mat::Zero(nr + 1, nv);
    Vec rhsv = Vec::Zero(nr + 1);
    for (int r = 0; r < nr; ++r)
        for (int c = 0; c < nv; ++c)
            sys(r, c) = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
    sys(nr, vofs[0]) = 1.0;
    rhsv(nr) = 1.0;

    const Vec sol = sys.colPivHouseholderQr().solve(rhsv);

    RMatrixResult out;
    out.residual = (sys * sol - rhsv).norm();
    if (nr == 0) {
        out.nullity = nv;  // no constraints beyond normalization
    } else {
        Eigen::JacobiSVD<Mat> svd(sys.topRows(nr));
        const auto& sv = svd.singularValues();
        const double cutoff = 1e-9 * sv(0);
        out.nullity = std::max(0, nv - static_cast<int>(sv.size()));
        for (int k = 0; k < sv.size(); ++k)
            if (sv(k) < cutoff) ++out.nullity;
    }
    const int kD = levels[static_cast<size_t>(depth)].dim();
    out.block = Mat::Zero(kD, kD);
    for (int r = 0; r < kD; ++r)
        for (int c = 0; c < kD; ++c)
            out.block(r, c) = sol(vofs[static_cast<size_t>(depth)] + r * kD + c);
    if (out.residual > 1e-8)
        throw DivergenceError("build_R: defining system inconsistent (rank-deficient t?)");
    return out;
}

// ---------------------------------------------------------------------------
// B(t) series
// ---------------------------------------------------------------------------

Mat B_series(cplx t, const WeightSubspace& ws) {
    const cplx wdiff = ws.weight1() - cplx(ws.weight2());
    Mat out = Mat::Identity(ws.dim(), ws.dim());
    Mat down = Mat::Identity(ws.dim(), ws.dim());
    WeightSubspace cur = ws;
    cplx scal = 1.0;
    for (int s = 1; s <= ws.depth; ++s) {
        const Mat step_down = gl2_total(1, 2, cur);
        cur = weight_subspace(ws.mods, ws.depth - s);
        down = step_down * down;
        if (down.rows() == 0 || down.norm() == 0.0) break;
        Mat up = Mat::Identity(cur.dim(), cur.dim());
        WeightSubspace climb = cur;
        for (int j = 0; j < s; ++j) {
            const Mat step_up = gl2_total(2, 1, climb);
            climb = weight_subspace(ws.mods, climb.depth + 1);
            up = step_up * up;
        }
        const cplx den = static_cast<double>(s) * (t - wdiff - static_cast<double>(s));
        if (std::abs(den) < 1e-10)
            throw PoleError("B_series: singular denominator t - E11 + E22 - j");
        scal /= den;
        out += (up * down) * scal;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Operator assembly
// ---------------------------------------------------------------------------

namespace {

Mat diag_power(const WeightSubspace& ws, cplx log_base, int i, int slot) {
    Mat M = Mat::Zero(ws.dim(), ws.dim());
    for (int c = 0; c < ws.dim(); ++c) {
        const int d = ws.basis[static_cast<size_t>(c)][static_cast<size_t>(slot)];
        const cplx m = ws.mods[static_cast<size_t>(slot)].weight;
        const cplx ev = (i == 1) ? (m - static_cast<double>(d)) : cplx(static_cast<double>(d));
        M(c, c) = std::exp(-log_base * ev);
    }
    return M;
}

// E_{ij}^{(sa)} E_{ji}^{(sb)} within the subspace (through depth +/- 1)
Mat raise_lower(const WeightSubspace& ws, int i, int j, int sa, int sb) {
    if (i == j) return gl2_action(i, i, sa, ws) * gl2_action(j, j, sb, ws);
    if (i == 1 && j == 2) {
        const WeightSubspace up = weight_subspace(ws.mods, ws.depth + 1);
        return gl2_action(1, 2, sa, up) * gl2_action(2, 1, sb, ws);
    }
    const WeightSubspace dn = weight_subspace(ws.mods, ws.depth - 1);
    return gl2_action(2, 1, sa, dn) * gl2_action(1, 2, sb, ws);
}

// trigonometric r with first leg in slot sa, second in slot sb
Mat r_trig(const WeightSubspace& ws, cplx zeta, int sa, int sb) {
    if (std::abs(zeta - 1.0) < 1e-10) throw PoleError("r matrix: pole at z_a/z_b = 1");
    const Mat diag_part = gl2_action(1, 1, sa, ws) * gl2_action(1, 1, sb, ws) +
                          gl2_action(2, 2, sa, ws) * gl2_action(2, 2, sb, ws);
    const Mat ex = raise_lower(ws, 1, 2, sa, sb);  // E12^{(sa)} E21^{(sb)}
    const Mat fx = raise_lower(ws, 2, 1, sa, sb);  // E21^{(sa)} E12^{(sb)}
    return ((zeta + 1.0) * diag_part / 2.0 + zeta * ex + fx) / (zeta - 1.0);
}

Mat lambda_diag_for_Z(const WeightSubspace& ws, int slot, cplx log_la1, cplx log_la2) {
    return diag_power(ws, log_la1, 1, slot) * diag_power(ws, log_la2, 2, slot);
}

}  // namespace

ShiftedOperator build_operator(OpName name, int idx, const WeightSubspace& ws,
                               std::span<const cplx> log_zs, cplx log_lambda1, cplx log_lambda2,
                               double kappa) {
    const int n = static_cast<int>(ws.mods.size());
    ShiftedOperator op;
    op.index = idx;
    const cplx la1 = std::exp(log_lambda1), la2 = std::exp(log_lambda2);
    std::vector<cplx> zs(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) zs[static_cast<size_t>(s)] = std::exp(log_zs[static_cast<size_t>(s)]);

    switch (name) {
        case OpName::KZ_nabla: {
            op.action = ShiftedOperator::Action::deriv_z;
            Mat M = Mat::Zero(ws.dim(), ws.dim());
            const cplx lam[2] = {la1, la2};
            for (int i = 1; i <= 2; ++i) {
                const Mat tot = gl2_total(i, i, ws);
                M -= (lam[i - 1] * Mat::Identity(ws.dim(), ws.dim()) - tot / 2.0) *
                     gl2_action(i, i, idx, ws);
            }
            for (int b = 0; b < n; ++b) {
                if (b == idx) continue;
                M -= r_trig(ws, zs[static_cast<size_t>(idx)] / zs[static_cast<size_t>(b)], idx, b);
            }
            op.mat = M;
            return op;
        }
        case OpName::qKZ_Z: {
            if (n != 2) throw DivergenceError("qKZ_Z: assembled for n = 2 only");
            op.action = ShiftedOperator::Action::shift_z;
            const cplx dz = zs[0] - zs[1];
            if (idx == 0) {
                const Mat R = build_R(dz, ws.mods[0], ws.mods[1], ws.depth).block;
                op.mat = R.colPivHouseholderQr().solve(
                    lambda_diag_for_Z(ws, 0, log_lambda1, log_lambda2));
            } else {
                const Mat Rk = build_R(dz - kappa, ws.mods[0], ws.mods[1], ws.depth).block;
                op.mat = lambda_diag_for_Z(ws, 1, log_lambda1, log_lambda2) * Rk;
            }
            return op;
        }
        case OpName::dyn_Q: {
            op.action = ShiftedOperator::Action::shift_lambda;
            if (idx == 0) {
                const Mat B = B_series(la1 - la2, ws);
                Mat P = Mat::Identity(ws.dim(), ws.dim());
                for (int s = 0; s < n; ++s)
                    P = P * diag_power(ws, log_zs[static_cast<size_t>(s)], 1, s);
                op.mat = B.colPivHouseholderQr().solve(P);
            } else {
                const Mat B = B_series(la1 - la2 - kappa, ws);
                Mat P = Mat::Identity(ws.dim(), ws.dim());
                for (int s = 0; s < n; ++s)
                    P = P * diag_power(ws, log_zs[static_cast<size_t>(s)], 2, s);
                op.mat = P * B;
            }
            return op;
        }
        case OpName::dyn_D: {
            op.action = ShiftedOperator::Action::deriv_lambda;
            const int i = idx + 1;  // 1 or 2
            const int ip = (i == 1) ? 2 : 1;
            const cplx lam[2] = {la1, la2};
            const Mat tot = gl2_total(i, i, ws);
            Mat M = tot * tot / 2.0;
            for (int s = 0; s < n; ++s)
                M -= zs[static_cast<size_t>(s)] * gl2_action(i, i, s, ws);
            for (int j = 1; j <= 2; ++j)
                for (int a = 0; a < n; ++a)
                    for (int b = a + 1; b < n; ++b) M -= raise_lower(ws, i, j, a, b);
            const cplx den = lam[i - 1] - lam[ip - 1];
            if (std::abs(den) < 1e-12) throw PoleError("dyn_D: pole at lambda_1 = lambda_2");
            // E21~ E12~: lower first, then raise back
            const WeightSubspace dn = weight_subspace(ws.mods, ws.depth - 1);
            const Mat raise_back = gl2_total(2, 1, dn) * gl2_total(1, 2, ws);
            M -= lam[ip - 1] / den * (raise_back - gl2_total(2, 2, ws));
            op.mat = M;
            return op;
        }
    }
    throw std::logic_error("build_operator: unknown operator");
}

// ---------------------------------------------------------------------------
// Commutation checks
// ---------------------------------------------------------------------------

namespace {

double rel_norm(const Mat& resid, const Mat& scale) {
    const double s = scale.norm();
    return s > 0 ? resid.norm() / s : resid.norm();
}

// d/dz_a of the Q_i matrix part (analytic: only the diagonal z-powers move)
Mat dQ_dza(const WeightSubspace& ws, int i, int a, std::span<const cplx> log_zs, cplx la1,
           cplx la2, double kappa) {
    const int n = static_cast<int>(ws.mods.size());
    const cplx za = std::exp(log_zs[static_cast<size_t>(a)]);
    Mat P = Mat::Identity(ws.dim(), ws.dim());
    for (int s = 0; s < n; ++s) P = P * diag_power(ws, log_zs[static_cast<size_t>(s)], i + 1, s);
    const Mat dP = -(gl2_action(i + 1, i + 1, a, ws) / za) * P;
    if (i == 0) {
        const Mat B = B_series(la1 - la2, ws);
        return B.colPivHouseholderQr().solve(dP);
    }
    const Mat B = B_series(la1 - la2 - kappa, ws);
    return dP * B;
}

// d/dlambda_i of the Z_a matrix part
Mat dZ_dlai(const WeightSubspace& ws, int a, int i, std::span<const cplx> log_zs,
            cplx log_la1, cplx log_la2, double kappa) {
    const cplx dz = std::exp(log_zs[0]) - std::exp(log_zs[1]);
    const cplx lam = (i == 0) ? std::exp(log_la1) : std::exp(log_la2);
    const Mat L = lambda_diag_for_Z(ws, a, log_la1, log_la2);
    const Mat dL = -(gl2_action(i + 1, i + 1, a, ws) / lam) * L;
    if (a == 0) {
        const Mat R = build_R(dz, ws.mods[0], ws.mods[1], ws.depth).block;
        return R.colPivHouseholderQr().solve(dL);
    }
    const Mat Rk = build_R(dz - kappa, ws.mods[0], ws.mods[1], ws.depth).block;
    return dL * Rk;
}

}  // namespace

double check_commutation(CommPair pair, const WeightSubspace& ws, std::span<const cplx> log_zs,
                         cplx log_la1, cplx log_la2, double kappa) {
    const cplx la1 = std::exp(log_la1), la2 = std::exp(log_la2);
    auto shifted_logz = [&](int a) {
        std::vector<cplx> out(log_zs.begin(), log_zs.end());
        out[static_cast<size_t>(a)] = std::log(std::exp(log_zs[static_cast<size_t>(a)]) + kappa);
        return out;
    };
    switch (pair) {
        case CommPair::Z_with_Z: {
            const Mat Z1 = build_operator(OpName::qKZ_Z, 0, ws, log_zs, log_la1, log_la2, kappa).mat;
            const Mat Z2 = build_operator(OpName::qKZ_Z, 1, ws, log_zs, log_la1, log_la2, kappa).mat;
            const auto z_s1 = shifted_logz(0);
            const auto z_s2 = shifted_logz(1);
            const Mat Z2s = build_operator(OpName::qKZ_Z, 1, ws, z_s1, log_la1, log_la2, kappa).mat;
            const Mat Z1s = build_operator(OpName::qKZ_Z, 0, ws, z_s2, log_la1, log_la2, kappa).mat;
            return rel_norm(Z1 * Z2s - Z2 * Z1s, Z1 * Z2s);
        }
        case CommPair::Q_with_Q: {
            const cplx log_la1_s = std::log(la1 + kappa);
            const cplx log_la2_s = std::log(la2 + kappa);
            const Mat Q1 = build_operator(OpName::dyn_Q, 0, ws, log_zs, log_la1, log_la2, kappa).mat;
            const Mat Q2 = build_operator(OpName::dyn_Q, 1, ws, log_zs, log_la1, log_la2, kappa).mat;
            const Mat Q2s = build_operator(OpName::dyn_Q, 1, ws, log_zs, log_la1_s, log_la2, kappa).mat;
            const Mat Q1s = build_operator(OpName::dyn_Q, 0, ws, log_zs, log_la1, log_la2_s, kappa).mat;
            return rel_norm(Q1 * Q2s - Q2 * Q1s, Q1 * Q2s);
        }
        case CommPair::nabla_with_Q: {
            // kappa z_a d/dz_a(Q_i) + A_nabla Q_i - Q_i A_nabla(la_i -> la_i + kappa)
            double worst = 0.0;
            const int n = static_cast<int>(ws.mods.size());
            for (int a = 0; a < n; ++a) {
                for (int i = 0; i < 2; ++i) {
                    const Mat BQ =
                        build_operator(OpName::dyn_Q, i, ws, log_zs, log_la1, log_la2, kappa).mat;
                    const Mat An =
                        build_operator(OpName::KZ_nabla, a, ws, log_zs, log_la1, log_la2, kappa).mat;
                    const cplx l1s = (i == 0) ? std::log(la1 + kappa) : log_la1;
                    const cplx l2s = (i == 1) ? std::log(la2 + kappa) : log_la2;
                    const Mat Ans =
                        build_operator(OpName::KZ_nabla, a, ws, log_zs, l1s, l2s, kappa).mat;
                    const cplx za = std::exp(log_zs[static_cast<size_t>(a)]);
                    const Mat dQ = dQ_dza(ws, i, a, log_zs, la1, la2, kappa);
                    const Mat resid = kappa * za * dQ + An * BQ - BQ * Ans;
                    worst = std::max(worst, rel_norm(resid, An * BQ));
                }
            }
            return worst;
        }
        case CommPair::Z_with_D: {
            // M_Z M_D(z_a + kappa) - M_D M_Z - kappa la_i d/dla_i(M_Z)
            double worst = 0.0;
            for (int a = 0; a < 2; ++a) {
                for (int i = 0; i < 2; ++i) {
                    const Mat MZ =
                        build_operator(OpName::qKZ_Z, a, ws, log_zs, log_la1, log_la2, kappa).mat;
                    const Mat MD =
                        build_operator(OpName::dyn_D, i, ws, log_zs, log_la1, log_la2, kappa).mat;
                    const auto zshift = shifted_logz(a);
                    const Mat MDs =
                        build_operator(OpName::dyn_D, i, ws, zshift, log_la1, log_la2, kappa).mat;
                    const cplx lam = (i == 0) ? la1 : la2;
                    const Mat dZ = dZ_dlai(ws, a, i, log_zs, log_la1, log_la2, kappa);
                    const Mat resid = MZ * MDs - MD * MZ - kappa * lam * dZ;
                    worst = std::max(worst, rel_norm(resid, MZ * MDs));
                }
            }
            return worst;
        }
    }
    throw std::logic_error("check_commutation: unknown pairing");
}

// ---------------------------------------------------------------------------
// Duality isomorphism and intertwining
// ---------------------------------------------------------------------------

int phi_iso_dim(cplx m1, int m2, int l2) {
    const cplx l1 = m1 + static_cast<double>(m2) - static_cast<double>(l2);
    const WeightSubspace A =
        weight_subspace({ModuleDesc::verma(m1), ModuleDesc::irreducible(m2)}, l2);
    const WeightSubspace B =
        weight_subspace({ModuleDesc::verma(l1), ModuleDesc::irreducible(l2)}, m2);
    if (A.dim() != B.dim())
        throw std::logic_error("phi_iso: weight subspace dimensions disagree");
    if (A.dim() != std::min(m2, l2) + 1)
        throw std::logic_error("phi_iso: dimension is not min(m2,l2)+1");
    return A.dim();
}

double check_intertwining(Intertwine which, cplx m1, int m2, int l2, double kappa, cplx z1,
                          cplx z2, cplx la1, cplx la2) {
    const cplx l1 = m1 + static_cast<double>(m2) - static_cast<double>(l2);
    const WeightSubspace A =
        weight_subspace({ModuleDesc::verma(m1), ModuleDesc::irreducible(m2)}, l2);
    const WeightSubspace B =
        weight_subspace({ModuleDesc::verma(l1), ModuleDesc::irreducible(l2)}, m2);
    const cplx log_z[2] = {std::log(z1), std::log(z2)};
    const cplx log_la[2] = {std::log(la1), std::log(la2)};
    // swapped-argument slots for the Q / nabla side
    const std::vector<cplx> zsA = {log_z[0], log_z[1]};
    const std::vector<cplx> zsB = {log_la[0], log_la[1]};

    Params gpar;
    gpar.m1 = m1;
    gpar.m2 = m2;

    if (which == Intertwine::qKZ_vs_Q) {
        double worst = 0.0;
        const Mat Z1m = build_operator(OpName::qKZ_Z, 0, A, zsA, log_la[0], log_la[1], kappa).mat;
        const Mat Z2m = build_operator(OpName::qKZ_Z, 1, A, zsA, log_la[0], log_la[1], kappa).mat;
        const Mat Q1m = build_operator(OpName::dyn_Q, 0, B, zsB, log_z[0], log_z[1], kappa).mat;
        const Mat Q2m = build_operator(OpName::dyn_Q, 1, B, zsB, log_z[0], log_z[1], kappa).mat;
        const cplx G1 = G_factor(z1 - z2, gpar);
        const cplx G2 = G_factor(z1 - z2 - kappa, gpar);
        worst = std::max(worst, rel_norm(Z1m - Q1m / G1, Z1m));
        worst = std::max(worst, rel_norm(Z2m - G2 * Q2m, Z2m));
        return worst;
    }
    double worst = 0.0;
    for (int a = 0; a < 2; ++a) {
        const Mat Dm = build_operator(OpName::dyn_D, a, A, zsA, log_la[0], log_la[1], kappa).mat;
        const Mat Nm = build_operator(OpName::KZ_nabla, a, B, zsB, log_z[0], log_z[1], kappa).mat;
        worst = std::max(worst, rel_norm(Dm - Nm, Dm));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Solution checks
// ---------------------------------------------------------------------------

namespace {

Vec I_vector(const Params& p, int b, cplx zslot, cplx muslot, const QuadConfig& cfg) {
    Params q = p;
    q.z = zslot;
    q.mu = muslot;
    const int k = admissible_max(p);
    Vec v(k + 1);
    for (int a = 0; a <= k; ++a) v(a) = I_ab(q, a, b, cfg).value;
    return v;
}

Vec J_vector(const Params& p, int b, cplx zslot, cplx muslot, const QuadConfig& cfg) {
    // coordinates of bar J_b: J_{a,b}(zslot, muslot; l1, l2, m1, m2)
    Params q;
    q.m1 = p.l1;
    q.m2 = p.l2;
    q.l1 = p.m1;
    q.l2 = p.m2;
    q.kappa = p.kappa;
    q.z = zslot;
    q.mu = muslot;
    const int k = admissible_max(p);
    Vec v(k + 1);
    for (int a = 0; a <= k; ++a) v(a) = J_ab(q, a, b, cfg).value;
    return v;
}

}  // namespace

SolutionCheck check_solution(SolutionSide side, const Params& p, int b, const QuadConfig& cfg) {
    SolutionCheck out;
    const double ka = p.kappa;
    const cplx m1 = p.m1, l1 = p.l1;
    const double m2 = p.m2, l2 = p.l2;

    if (side == SolutionSide::qKZ || side == SolutionSide::dynDE) {
        // Theorem I-qKZ / I-DD: U_b on (M_m1 x L_m2)[l1, l2] from bar I_b
        const WeightSubspace ws =
            weight_subspace({ModuleDesc::verma(p.m1), ModuleDesc::irreducible(p.m2)}, p.l2);
        const cplx mu1(0.25, -0.15);
        const cplx mu2 = p.mu + mu1;
        const cplx z1(1.3, 0.2);
        const cplx z2 = p.z + z1;

        auto pref_log = [&](cplx zz1, cplx zz2, cplx mm1, cplx mm2) {
            const cplx mu = mm2 - mm1;
            return (mm1 * (m1 * zz1 + m2 * zz2 - (m1 * m1 + m2 * m2) / 2.0) -
                    (mm1 - mm2) * (l2 * zz1 + l2 / 2.0)) /
                       ka -
                   l2 / ka * std::log(1.0 - std::exp(mu));
        };
        auto U_at = [&](cplx zz1, cplx zz2, cplx mm1, cplx mm2) -> Vec {
            const Vec iv = I_vector(p, b, zz2 - zz1, mm2 - mm1, cfg);
            return std::exp(pref_log(zz1, zz2, mm1, mm2)) * iv;
        };

        const Vec U0 = U_at(z1, z2, mu1, mu2);
        const std::vector<cplx> log_zs = {std::log(z1), std::log(z2)};

        if (side == SolutionSide::qKZ) {
            for (int a = 0; a < 2; ++a) {
                const Mat Z =
                    build_operator(OpName::qKZ_Z, a, ws, log_zs, mu1, mu2, ka).mat;
                const Vec Us = (a == 0) ? U_at(z1 + ka, z2, mu1, mu2) : U_at(z1, z2 + ka, mu1, mu2);
                const Vec resid = Z * Us - U0;
                out.residual = std::max(out.residual, resid.norm() / U0.norm());
            }
            return out;
        }
        // dynDE: D_i U = 0 with kappa la_i d/dla_i = kappa d/dmu_i
        const double h = 1e-4 * ka;
        for (int i = 0; i < 2; ++i) {
            const Mat D = build_operator(OpName::dyn_D, i, ws, log_zs, mu1, mu2, ka).mat;
            auto U_mu = [&](double step, int which) {
                const cplx d = cplx(step, 0.0);
                return which == 0 ? U_at(z1, z2, mu1 + d, mu2) : U_at(z1, z2, mu1, mu2 + d);
            };
            const Vec d_h = (U_mu(h, i) - U_mu(-h, i)) / (2.0 * h);
            const Vec d_h2 = (U_mu(h / 2.0, i) - U_mu(-h / 2.0, i)) / h;
            const Vec rich = (4.0 * d_h2 - d_h) / 3.0;
            const Vec resid = ka * rich + D * U0;
            const double scale = std::max((ka * rich).norm(), (D * U0).norm());
            out.residual = std::max(out.residual, resid.norm() / scale);
            out.richardson_drift =
                std::max(out.richardson_drift, ka * (rich - d_h2).norm() / scale);
        }
        return out;
    }

    // Theorem J-KZ: U_b on (M_l1 x L_l2)[m1, m2] from bar J_b
    const WeightSubspace ws =
        weight_subspace({ModuleDesc::verma(p.l1), ModuleDesc::irreducible(p.l2)}, p.m2);
    const cplx theta = std::exp(p.mu);  // J z-slot, arg in (0, 2pi)
    const cplx nu = p.z;                // J mu-slot, Re << 0
    const cplx z1(1.2, -0.3);
    const cplx z2 = theta * z1;
    const cplx la1(2.1, 0.4);
    const cplx la2 = nu + la1;
    const cplx log_z1 = std::log(z1), log_z2 = std::log(z2);

    auto U_at = [&](cplx zz1, cplx zz2, cplx ll1, cplx ll2) -> Vec {
        // principal logs anchored at the test point: evaluate with the actual
        // zz arguments but branch-continuous for small FD steps
        const cplx lz1 = std::log(zz1), lz2 = std::log(zz2), ldz = std::log(zz1 - zz2);
        const cplx pl = (ll1 * (l1 - m2) + ll2 * m2 - m2 * m2 - m1 * l1 + l1 * l1 / 2.0) / ka * lz1 +
                        l2 * (ll1 - m1 + l2 / 2.0) / ka * lz2 + l1 * l2 / ka * ldz;
        const Vec jv = J_vector(p, b, zz2 / zz1, ll2 - ll1, cfg);
        return std::exp(pl) * jv;
    };

    const Vec U0 = U_at(z1, z2, la1, la2);
    const std::vector<cplx> log_zs = {log_z1, log_z2};

    // KZ equations: kappa z_a dU/dz_a + M_nabla U = 0 (finite differences)
    const double h = 1e-4 * ka;
    for (int a = 0; a < 2; ++a) {
        const Mat N = build_operator(OpName::KZ_nabla, a, ws, log_zs, std::log(la1),
                                     std::log(la2), ka)
                          .mat;
        auto U_z = [&](double step) {
            const cplx d(step, 0.0);
            return a == 0 ? U_at(z1 + d, z2, la1, la2) : U_at(z1, z2 + d, la1, la2);
        };
        const Vec d_h = (U_z(h) - U_z(-h)) / (2.0 * h);
        const Vec d_h2 = (U_z(h / 2.0) - U_z(-h / 2.0)) / h;
        const Vec rich = (4.0 * d_h2 - d_h) / 3.0;
        const cplx za = (a == 0) ? z1 : z2;
        const Vec resid = ka * za * rich + N * U0;
        const double scale = std::max((ka * za * rich).norm(), (N * U0).norm());
        out.residual = std::max(out.residual, resid.norm() / scale);
        out.richardson_drift =
            std::max(out.richardson_drift, std::abs(ka * za) * (rich - d_h2).norm() / scale);
    }
    // difference dynamical equations: Q_i U = U
    for (int i = 0; i < 2; ++i) {
        const Mat Q = build_operator(OpName::dyn_Q, i, ws, log_zs, std::log(la1), std::log(la2),
                                     ka)
                          .mat;
        const Vec Us = (i == 0) ? U_at(z1, z2, la1 + ka, la2) : U_at(z1, z2, la1, la2 + ka);
        const Vec resid = Q * Us - U0;
        out.residual = std::max(out.residual, resid.norm() / U0.norm());
    }
    return out;
}

}  // namespace qhd
