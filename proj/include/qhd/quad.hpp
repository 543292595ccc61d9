#ifndef QHD_QUAD_HPP
#define QHD_QUAD_HPP

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qhd/contour.hpp"
#include "qhd/params.hpp"

namespace qhd {

struct QuadConfig {
    double rel_tol = 1e-6;
    double abs_tol = 1e-300;
    int max_subdivisions = 600;
    int nodes_per_panel = 16;  // Clenshaw-Curtis order; halved rule gives the error estimate
    // Panels evaluated concurrently when > 1 (the integrand must be
    // thread-safe); accumulation order is fixed, so results are
    // deterministic for a fixed config.
    int threads = 1;
};

struct IntegralResult {
    cplx value;
    double err_estimate = 0.0;
    long n_evals = 0;
    std::vector<std::string> warnings;
};

// Integrand along a path; receives the point and the global path parameter
// (the parameter is what branch tables key on).
using PathIntegrand = std::function<cplx(cplx t, double s)>;

IntegralResult integrate_path(const PathIntegrand& f, const Path& path, const QuadConfig& cfg);

// Iterated tensor-product integration of a plain (single-valued) integrand
// over one path per variable; innermost variable is vars[0].
using ProductIntegrand = std::function<cplx(std::span<const cplx>)>;

IntegralResult integrate_product(const ProductIntegrand& f, std::span<const Path> vars,
                                 const QuadConfig& cfg);

}  // namespace qhd

#endif
