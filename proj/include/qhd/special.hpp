#ifndef QHD_SPECIAL_HPP
#define QHD_SPECIAL_HPP

#include <complex>
#include <numbers>
#include <span>

#include "qhd/params.hpp"

namespace qhd {

// Principal-branch log Gamma: analytic continuation of the real log Gamma,
// exp(log_gamma(w)) = Gamma(w). Throws PoleError at nonpositive integers.
cplx log_gamma(cplx w);

// exp(sum log Gamma(nums) - sum log Gamma(dens)), accumulated in log space.
// Throws PoleError if a denominator (or numerator) argument sits within
// 1e-8 of the pole lattice.
cplx gamma_ratio(std::span<const cplx> nums, std::span<const cplx> dens);

// Gauss 2F1 by its power series; requires |x| < 1.
cplx hyp2f1(cplx alpha, cplx beta, cplx gamma, cplx x);

// log(sin(pi*w)), stable for large |Im w|. The 2*pi*i branch is unspecified;
// exponentiating always reproduces sin(pi*w) exactly.
cplx log_sin_pi(cplx w);

// kappa-scaled shorthands used throughout the formulas
inline cplx log_gamma_k(cplx x, double kappa) { return log_gamma(x / kappa); }
inline cplx gamma_k(cplx x, double kappa) { return std::exp(log_gamma(x / kappa)); }
inline cplx sin_k(cplx x, double kappa) { return std::sin(std::numbers::pi * x / kappa); }
inline cplx log_sin_k(cplx x, double kappa) { return log_sin_pi(x / kappa); }
inline cplx exp_k(cplx x, double kappa) {
    return std::exp(cplx(0.0, std::numbers::pi) * x / kappa);
}

}  // namespace qhd

#endif
