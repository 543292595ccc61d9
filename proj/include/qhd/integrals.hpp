#ifndef QHD_INTEGRALS_HPP
#define QHD_INTEGRALS_HPP

#include <complex>
#include <string>

#include "qhd/params.hpp"
#include "qhd/quad.hpp"

namespace qhd {

// Closed-form Selberg values, kept in log space.
struct SelbergClosedForm {
    cplx log_value;
    std::string branch_note;
    cplx value() const { return std::exp(log_value); }
};

// l2-fold Barnes-type integral of Xi*p*P over the (deformed) line contour.
// Inner variables run over contours correlated with the fixed outer points
// so the diagonal pole lattices t_u - t_v = ±(1+kappa*N) stay separated.
IntegralResult I_ab(const Params& p, int a, int b, const QuadConfig& cfg);

// l-fold hypergeometric integral of Psi*g over the Picture-1 loops with
// branch-tracked powers; p_dual carries the J-side slots, its l2 is the
// dimension. radius_scale shrinks the default loop radii (any legal choice
// gives the same value; exercised by the invariance tests).
IntegralResult J_ab(const Params& p_dual, int a, int b, const QuadConfig& cfg,
                    double radius_scale = 1.0);

// Selberg-type closed forms and their quadrature counterparts.
SelbergClosedForm selberg_A(int l, cplx mu, cplx m, double kappa);
SelbergClosedForm selberg_B(int m, cplx l, double kappa);
IntegralResult selberg_A_quad(int l, cplx mu, cplx m, double kappa, const QuadConfig& cfg);
IntegralResult selberg_B_quad(int m, cplx l, double kappa, const QuadConfig& cfg);

// Leading terms as Re z -> -infinity (delta_{ab} structure included: the
// returned value is 0 for a != b).
cplx I_asymptotic(const Params& p, int a, int b);
cplx J_asymptotic(const Params& p, int a, int b);

}  // namespace qhd

#endif
