#ifndef QHD_CONTOUR_HPP
#define QHD_CONTOUR_HPP

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qhd/params.hpp"

namespace qhd {

struct PathSegment {
    enum class Kind { line, arc };
    Kind kind = Kind::line;
    // line: a -> b
    cplx a, b;
    // arc: center + radius * e^{i theta}, theta from theta0 to theta1
    // (theta1 > theta0 means counterclockwise)
    cplx center;
    double radius = 0.0, theta0 = 0.0, theta1 = 0.0;

    cplx point(double x) const;       // x in [0,1]
    cplx derivative(double x) const;  // d(point)/dx
    double length() const;

    static PathSegment make_line(cplx a, cplx b);
    static PathSegment make_arc(cplx center, double radius, double theta0, double theta1);
};

// One-variable path. Global parameter s in [0, segments.size()); s = k + frac
// addresses segment k at local fraction frac.
struct Path {
    std::vector<PathSegment> segments;
    double anchor_s = 0.0;  // branch base point parameter
    cplx anchor_point;

    cplx point(double s) const;
    cplx derivative(double s) const;  // w.r.t. the global parameter
    double param_end() const { return static_cast<double>(segments.size()); }
};

enum class ContourFamily { barnes, loops_j, loops_b };

struct Contour {
    std::vector<Path> vars;  // one path per integration variable
    ContourFamily family = ContourFamily::barnes;
    double truncation_radius = 0.0;
    double clearance = 0.0;
};

struct PoleReport {
    std::vector<cplx> left_points;   // classified left-family points near the contour
    std::vector<cplx> right_points;  // classified right-family points near the contour
    std::vector<cplx> bypassed;      // right-family points west of the line (detoured)
    double eps = 0.0;                // line abscissa actually used
    double min_clearance = 0.0;      // audited min distance contour <-> poles
};

// A lattice {anchor + step*N : N >= 0} of potential poles; step is real.
// phantom: classified for reporting but provably cancelled in the integrand
// (the m2 = 0 case), so it does not constrain the contour.
struct PoleFamily {
    cplx anchor;
    double step = 0.0;
    bool right = false;  // must end up east of the contour
    std::string name;
    bool phantom = false;
};

struct BarnesOptions {
    double eps_hint = -1.0;       // <0: choose automatically
    double clearance = -1.0;      // <0: 1e-3 * kappa
    double t_up = 0.0, t_down = 0.0;  // truncation extents (imaginary direction)
    double band_halfheight = -1.0;    // <0: 0.15 * kappa
};

// Generic deformed vertical line separating left families from right
// families; weaves around right-family points that intrude west of the line.
// Throws ContourError on pinches or when no separating line exists.
std::pair<Path, PoleReport> barnes_line(const std::vector<PoleFamily>& families, double kappa,
                                        const BarnesOptions& opt);

// The l-fold Barnes contour delta_l(z; m1, m2) for the I-side integrand.
// m2c is complex so the paper's straight-line region (Re m1 < 0, Re m2 < 0,
// Re z = 0) is expressible; Params-based callers pass m2c = m2.
std::pair<Contour, PoleReport> barnes_contour(cplx m1, cplx m2c, cplx z, double kappa, cplx mu,
                                              int l, double tol, const BarnesOptions& opt = {});
std::pair<Contour, PoleReport> barnes_contour(const Params& p, double tol,
                                              const BarnesOptions& opt = {});

struct LoopOptions {
    double radius_hint = -1.0;  // <0: 0.3*min(1,|z-1|)/l
    double clearance = -1.0;
    double nesting_factor = 2.0;
    double truncation = 0.0;  // required, from the tail analysis
};

// Picture-1 contour gamma_{l-b,b}(z): first b loops around z (direction
// arg z), last l-b loops around 1 (positive real direction). Loops are
// traversed counterclockwise; anchors sit on the segments (0,z) / (0,1).
Contour loops_J(cplx z, int b, int l, double kappa, const LoopOptions& opt);

// Picture-2 contour gamma_m: m nested counterclockwise loops around 0 from
// +infinity; anchors on the negative real axis.
Contour loops_B(int m, double truncation, double kappa, const LoopOptions& opt = {});

// Audits. side_audit applies to the axis-aligned barnes paths only.
double min_pole_distance(const Path& path, std::span<const cplx> poles);
bool side_audit(const Path& path, cplx pole, bool want_right);

std::string contour_to_json(const Contour& c);

}  // namespace qhd

#endif
