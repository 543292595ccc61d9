#ifndef QHD_PARAMS_HPP
#define QHD_PARAMS_HPP

#include <complex>
#include <vector>

namespace qhd {

using cplx = std::complex<double>;

// Parameter tuple (m1, m2, l1, l2) with m1+m2 = l1+l2, plus kappa, z, mu.
// l1 is always derived; m2, l2 are nonnegative integers.
struct Params {
    cplx m1;
    int m2 = 0;
    cplx l1;
    int l2 = 0;
    double kappa = 1.0;
    cplx z;
    cplx mu;
};

struct AdmissiblePair {
    int a = 0;
    int b = 0;
};

struct RegionConfig {
    double r0 = 20.0;           // "Re mu << 0" threshold: Re <= -kappa*r0
    double generic_eps = 1e-3;  // distance of kappa-lattice data to integers
};

struct RegionFlags {
    bool i_side_ok = false;
    bool j_side_ok = false;
    bool generic_kappa_ok = false;
};

Params make_params(cplx m1, int m2, int l2, double kappa, cplx z, cplx mu);

// min(m2, l2); admissible a and b run over 0..this value
int admissible_max(const Params& p);
std::vector<AdmissiblePair> admissible_pairs(const Params& p);

// Swaps (m1,m2) <-> (l1,l2) and routes (e^mu, z) into the J-side slots.
Params dual_params(const Params& p);

RegionFlags region_flags(const Params& p, const RegionConfig& cfg = {});

// Distance from a complex number to the nearest integer (in C).
double dist_to_integer(cplx w);

// Principal-style argument normalized into [lo, lo + 2*pi).
double arg_in(cplx w, double lo);

}  // namespace qhd

#endif
