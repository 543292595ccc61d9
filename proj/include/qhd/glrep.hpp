#ifndef QHD_GLREP_HPP
#define QHD_GLREP_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qhd/params.hpp"
#include "qhd/quad.hpp"

namespace qhd {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Highest-weight gl2 module with highest weight (weight, 0): Verma M_m for
// arbitrary complex weight, irreducible L_m (finite) for nonnegative integers.
struct ModuleDesc {
    cplx weight;
    bool finite = false;
    static ModuleDesc verma(cplx m) { return {m, false}; }
    static ModuleDesc irreducible(int m) { return {cplx(static_cast<double>(m)), true}; }
};

// Weight subspace of V_1 x ... x V_n at total lowering depth D, in the
// F-normalized basis E21^{d_1} v_1 / d_1! x ... (ordered by the last slot's
// depth, so n=2 coordinates are F^a with a = d_2).
struct WeightSubspace {
    std::vector<ModuleDesc> mods;
    int depth = 0;
    std::vector<std::vector<int>> basis;  // d-tuples
    cplx weight1() const;                 // sum weights - depth
    double weight2() const { return depth; }
    int dim() const { return static_cast<int>(basis.size()); }
    int index_of(const std::vector<int>& d) const;
};

WeightSubspace weight_subspace(std::vector<ModuleDesc> mods, int depth);

// Matrix of E_{ij} acting in one tensor slot (or the coproduct total), from
// the given subspace into the target subspace of the appropriate depth.
Mat gl2_action(int i, int j, int slot, const WeightSubspace& from);
Mat gl2_total(int i, int j, const WeightSubspace& from);

struct RMatrixResult {
    Mat block;           // restriction to the requested weight subspace
    int nullity = 0;     // of the defining system without normalization
    double residual = 0; // plugged-back defining-relation residual
};

// Rational R-matrix R_{VW}(t) on V x W solved from the defining relations on
// the window of weight levels 0..depth and restricted to the depth subspace.
RMatrixResult build_R(cplx t, ModuleDesc V, ModuleDesc W, int depth);

// B(t) series restricted to a weight subspace (finitely many terms).
Mat B_series(cplx t, const WeightSubspace& ws);

enum class OpName { KZ_nabla, qKZ_Z, dyn_Q, dyn_D };

struct ShiftedOperator {
    enum class Action { shift_z, shift_lambda, deriv_z, deriv_lambda };
    Mat mat;
    Action action = Action::shift_z;
    int index = 0;  // which z_a or lambda_i
};

// Operator matrix parts per the displayed formulas. Multiplicative variables
// enter through their logs so the caller controls branches; log_zs has one
// entry per tensor slot. idx is 0-based (z_a or lambda_i).
ShiftedOperator build_operator(OpName name, int idx, const WeightSubspace& ws,
                               std::span<const cplx> log_zs, cplx log_lambda1, cplx log_lambda2,
                               double kappa);

enum class CommPair { Z_with_Z, Q_with_Q, nabla_with_Q, Z_with_D };

// Relative residual of the composed commutator at the given point.
double check_commutation(CommPair pair, const WeightSubspace& ws, std::span<const cplx> log_zs,
                         cplx log_lambda1, cplx log_lambda2, double kappa);

// The duality isomorphism phi: F^a -> F^a is the identity in F-coordinates;
// returns the common dimension after checking both sides agree.
int phi_iso_dim(cplx m1, int m2, int l2);

enum class Intertwine { qKZ_vs_Q, D_vs_KZ };

// Residual of phi Z_a = G^{-1} Q_a phi (a=1), phi Z_2 = G Q_2 phi, or
// phi D_a = nabla_a phi, at the given point (n = 2).
double check_intertwining(Intertwine which, cplx m1, int m2, int l2, double kappa, cplx z1,
                          cplx z2, cplx la1, cplx la2);

enum class SolutionSide { qKZ, KZ_dyn, dynDE };

struct SolutionCheck {
    double residual = 0.0;          // worst relative equation residual
    double richardson_drift = 0.0;  // FD stability indicator (derivative sides)
    std::vector<std::string> notes;
};

// Numerical check that the hypergeometric vectors built from I_{a,b} / J_{a,b}
// solve the qKZ equations, the KZ + difference dynamical equations, or the
// dynamical differential equations.
SolutionCheck check_solution(SolutionSide side, const Params& p, int b, const QuadConfig& cfg);

}  // namespace qhd

#endif
