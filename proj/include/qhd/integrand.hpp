#ifndef QHD_INTEGRAND_HPP
#define QHD_INTEGRAND_HPP

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qhd/branch.hpp"
#include "qhd/params.hpp"

namespace qhd {

// Symmetrization: sum of f over all permutations of its arguments.
struct SymExpr {
    int l = 0;
    std::function<cplx(std::span<const cplx>)> evaluator;
    cplx operator()(std::span<const cplx> t) const { return evaluator(t); }
};

SymExpr sym(int l, std::function<cplx(std::span<const cplx>)> f, int cap = 6);

// q-master function Phi_l(t, z, mu; m1, m2)
cplx phi_q(std::span<const cplx> t, const Params& p);

// rational weight w_{l-a,a}(t, z; m1, m2)
cplx w_rat(std::span<const cplx> t, const Params& p, int a);

// trigonometric weight W_{l-b,b}(t, z; m1, m2)
cplx w_trig(std::span<const cplx> t, const Params& p, int b);

// alternative factorization Xi_l * p_{l-a,a} * P_{l-b,b}; equals
// phi_q * w_rat * w_trig pointwise. This is the production I-side integrand
// (log-space internally, safe at large |Im t|).
cplx xi_pP(std::span<const cplx> t, const Params& p, int a, int b);

// master function Psi_l for the J side, evaluated from continuously tracked
// logs: per variable {log t_u, log(1-t_u), log(z-t_u)}, plus log(t_u - t_v)
// for u < v (row-major order). Exponents come from p (J-side slots).
cplx psi_master_from_logs(const Params& p, int l, std::span<const cplx> single_logs,
                          std::span<const cplx> pair_logs);

// Convenience evaluation at a point using a BranchState holding the three
// single-variable logs (l = 1 only; the multivariable path goes through
// psi_master_from_logs).
cplx psi_master(cplx t, const Params& p, const BranchState& state);

// weight function g_{l-a,a}(t, z)
cplx g_weight(std::span<const cplx> t, const Params& p, int a);

}  // namespace qhd

#endif
