#ifndef QHD_DUALITY_HPP
#define QHD_DUALITY_HPP

#include <complex>
#include <vector>

#include "qhd/params.hpp"
#include "qhd/quad.hpp"

namespace qhd {

// Log-space connection factors of the duality identity
//   C_b I_{a,b}(z,mu; m1,m2,l1,l2)
//     = D_b E_b X(z) Y(mu) J_{a,b}(e^mu, z; l1,l2,m1,m2).
struct ConnectionFactors {
    cplx log_C, log_D, log_E, log_X, log_Y;
    cplx C() const { return std::exp(log_C); }
    cplx D() const { return std::exp(log_D); }
    cplx E() const { return std::exp(log_E); }
    cplx X() const { return std::exp(log_X); }
    cplx Y() const { return std::exp(log_Y); }
};

ConnectionFactors factors(const Params& p, int b);

// G(t; m1, m2) = prod_{j=0}^{m2-1} (t+j-m1)/(t+j+1)
cplx G_factor(cplx t, const Params& p);

// relative residual of S(t+kappa) = G(t) S(t) for S(t) = X(-t; m1, m2)
double check_S_equation(const Params& p, cplx t);

struct Theorem1Entry {
    int a = 0, b = 0;
    cplx I_value, J_value, lhs, rhs;
    double residual = 0.0;
    double quad_err = 0.0;
    long n_evals = 0;
};

struct Theorem1Report {
    Params params;
    RegionFlags flags;
    std::vector<Theorem1Entry> entries;
    double max_residual = 0.0;
    std::vector<std::string> warnings;
};

Theorem1Report verify_theorem1(const Params& p, const QuadConfig& cfg);

struct ConnectionMatrixReport {
    int dim = 0;
    std::vector<std::vector<cplx>> G;  // recovered G_{b,c}
    double offdiag_over_norm = 0.0;    // max |offdiag| / max |diag|
    double condition_number = 0.0;     // of the I matrix
    std::vector<cplx> expected_diag;   // C_b / (D_b E_b Y)
    double diag_match = 0.0;           // max rel deviation from expected_diag
};

// Recovers G_{b,c} from X(z) J_{a,b} = sum_c I_{a,c} G_{b,c}.
ConnectionMatrixReport connection_matrix(const Params& p, const QuadConfig& cfg);

}  // namespace qhd

#endif
