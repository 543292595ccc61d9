#include "qhd/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qhd/errors.hpp"

namespace qhd {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

PathSegment PathSegment::make_line(cplx a, cplx b) {
    PathSegment s;
    s.kind = Kind::line;
    s.a = a;
    s.b = b;
    return s;
}

PathSegment PathSegment::make_arc(cplx center, double radius, double theta0, double theta1) {
    PathSegment s;
    s.kind = Kind::arc;
    s.center = center;
    s.radius = radius;
    s.theta0 = theta0;
    s.theta1 = theta1;
    return s;
}

cplx PathSegment::point(double x) const {
    if (kind == Kind::line) return a + (b - a) * x;
    const double th = theta0 + (theta1 - theta0) * x;
    return center + radius * std::exp(cplx(0.0, th));
}

cplx PathSegment::derivative(double x) const {
    if (kind == Kind::line) return b - a;
    const double th = theta0 + (theta1 - theta0) * x;
    return radius * (theta1 - theta0) * cplx(0.0, 1.0) * std::exp(cplx(0.0, th));
}

double PathSegment::length() const {
    if (kind == Kind::line) return std::abs(b - a);
    return radius * std::abs(theta1 - theta0);
}

cplx Path::point(double s) const {
    const int n = static_cast<int>(segments.size());
    int k = static_cast<int>(std::floor(s));
    k = std::clamp(k, 0, n - 1);
    return segments[static_cast<size_t>(k)].point(s - k);
}

cplx Path::derivative(double s) const {
    const int n = static_cast<int>(segments.size());
    int k = static_cast<int>(std::floor(s));
    k = std::clamp(k, 0, n - 1);
    return segments[static_cast<size_t>(k)].derivative(s - k);
}

// ---------------------------------------------------------------------------
// Barnes line with band weaves
// ---------------------------------------------------------------------------

namespace {

struct BandPoint {
    double x = 0.0, y = 0.0;
    bool right = false;
};

// Split a long straight run into chunks so adaptive panels start reasonable;
// rays toward infinity get geometric chunks.
void append_line_split(std::vector<PathSegment>& segs, cplx a, cplx b, double h0) {
    const double len = std::abs(b - a);
    const int n = std::max(1, static_cast<int>(std::ceil(len / h0)));
    for (int k = 0; k < n; ++k) {
        segs.push_back(PathSegment::make_line(a + (b - a) * (static_cast<double>(k) / n),
                                              a + (b - a) * (static_cast<double>(k + 1) / n)));
    }
}

}  // namespace

std::pair<Path, PoleReport> barnes_line(const std::vector<PoleFamily>& families, double kappa,
                                        const BarnesOptions& opt) {
    const double clearance = opt.clearance > 0 ? opt.clearance : 1e-3 * kappa;
    const double t_up = opt.t_up;
    const double t_down = opt.t_down;
    if (!(t_up > 0.0) || !(t_down > 0.0))
        throw ContourError("barnes_line: truncation extents not set");

    // Collect family points near the relevant strip.
    PoleReport rep;
    std::vector<BandPoint> pts;
    double west_limit = 0.0;  // only right-family points force weaving; track extent
    for (const auto& f : families) {
        if (f.right && f.step > 0) west_limit = std::min(west_limit, f.anchor.real() - 2 * kappa);
    }
    // Candidate eps: prefer the hint, else scan multiples of kappa/4 for the
    // largest clearance to every pole abscissa.
    std::vector<cplx> all_near;
    auto collect = [&](const PoleFamily& f, double eps_bound) {
        std::vector<cplx> out;
        for (int n = 0;; ++n) {
            const cplx p = f.anchor + f.step * static_cast<double>(n);
            if (f.step > 0 && p.real() > eps_bound + 2 * kappa) break;
            if (f.step < 0 && p.real() < west_limit - 2 * kappa) break;
            if (std::abs(p.imag()) < std::max(t_up, t_down) + 2 * kappa) out.push_back(p);
            if (n > 100000) throw ContourError("barnes_line: runaway pole family " + f.name);
        }
        return out;
    };

    double eps = opt.eps_hint;
    {
        // provisional bound for collection
        const double bound = eps > 0 ? eps : kappa;
        for (const auto& f : families) {
            auto v = collect(f, bound);
            all_near.insert(all_near.end(), v.begin(), v.end());
        }
    }
    if (eps <= 0.0) {
        double best_score = -1.0;
        for (int k = 1; k <= 12; ++k) {
            const double cand = 0.1 * kappa * k;
            double score = 1e300;
            for (const cplx& p : all_near) score = std::min(score, std::abs(p.real() - cand));
            if (score > best_score) {
                best_score = score;
                eps = cand;
            }
        }
        if (best_score < 2 * clearance)
            throw ContourError("barnes_line: no separating abscissa clear of pole lattices");
    }
    rep.eps = eps;

    // Classify
    std::vector<BandPoint> westside;
    std::vector<cplx> hard_left, hard_right;  // audited; phantoms report-only
    for (const auto& f : families) {
        for (const cplx& p : collect(f, eps)) {
            (f.right ? rep.right_points : rep.left_points).push_back(p);
            if (f.right && p.real() < eps) rep.bypassed.push_back(p);
            if (f.phantom) continue;
            (f.right ? hard_right : hard_left).push_back(p);
            if (!f.right && p.real() >= eps - 2 * clearance) {
                std::ostringstream os;
                os << "barnes_line: left-family point " << f.name << " at Re = " << p.real()
                   << " is not west of the line (eps = " << eps << ")";
                throw ContourError(os.str());
            }
            if (p.real() < eps) westside.push_back({p.real(), p.imag(), f.right});
        }
    }

    // Pinch detection: a left point and a right point too close together.
    for (const cplx& pl : hard_left)
        for (const cplx& pr : hard_right)
            if (std::abs(pl - pr) < 2 * clearance) {
                std::ostringstream os;
                os << "barnes_line: pole families pinch near (" << pl.real() << "," << pl.imag()
                   << ")";
                throw ContourError(os.str());
            }

    // Band clustering by height: opposite-side points only obstruct each
    // other when close in Im too, so clusters link tightly and each weave
    // band takes a half-height bounded by the gaps to its neighbours.
    const double link = std::max(8.0 * clearance, 0.08 * kappa);
    const double Hmax = opt.band_halfheight > 0 ? opt.band_halfheight : 0.15 * kappa;
    std::sort(westside.begin(), westside.end(),
              [](const BandPoint& a, const BandPoint& b) { return a.y < b.y; });
    struct Band {
        double ylo = 0, yhi = 0;      // weave extent
        double plo = 0, phi = 0;      // point extent
        std::vector<BandPoint> pts;
        bool needs_weave = false;
    };
    std::vector<Band> bands;
    for (const auto& bp : westside) {
        if (bands.empty() || bp.y - bands.back().pts.back().y > link) bands.push_back({});
        bands.back().pts.push_back(bp);
        bands.back().needs_weave |= bp.right;
    }
    for (auto& b : bands) {
        b.plo = 1e300;
        b.phi = -1e300;
        for (const auto& q : b.pts) {
            b.plo = std::min(b.plo, q.y);
            b.phi = std::max(b.phi, q.y);
        }
    }
    for (size_t i = 0; i < bands.size(); ++i) {
        double room = Hmax;
        if (i > 0) room = std::min(room, 0.4 * (bands[i].plo - bands[i - 1].phi));
        if (i + 1 < bands.size()) room = std::min(room, 0.4 * (bands[i + 1].plo - bands[i].phi));
        if (bands[i].needs_weave && room < 2.0 * clearance)
            throw ContourError("barnes_line: no room for a weave band between pole rows");
        bands[i].ylo = bands[i].plo - room;
        bands[i].yhi = bands[i].phi + room;
    }
    std::erase_if(bands, [](const Band& b) { return !b.needs_weave; });
    for (const auto& b : bands) {
        if (b.ylo < -t_down + 1.0 || b.yhi > t_up - 1.0)
            throw ContourError("barnes_line: weave band outside truncation range");
    }
    for (size_t i = 1; i < bands.size(); ++i)
        if (bands[i].ylo <= bands[i - 1].yhi + clearance)
            throw ContourError("barnes_line: weave bands overlap");

    // Assemble segments bottom to top.
    Path path;
    double cursor_y = -t_down;
    const double chunk = 1.2 * kappa;
    for (const auto& band : bands) {
        append_line_split(path.segments, cplx(eps, cursor_y), cplx(eps, band.ylo), chunk);

        // verticals from the west-to-east parity scan
        auto byx = band.pts;
        std::sort(byx.begin(), byx.end(),
                  [](const BandPoint& a, const BandPoint& b) { return a.x < b.x; });
        std::vector<double> verts;
        int parity = 0;
        double prev_x = byx.front().x - 2 * kappa;
        for (const auto& q : byx) {
            const int need = q.right ? 1 : 0;
            if (parity != need) {
                if (q.x - prev_x < 4 * clearance) {
                    std::ostringstream os;
                    os << "barnes_line: cannot thread between poles at Re " << prev_x << " and "
                       << q.x;
                    throw ContourError(os.str());
                }
                verts.push_back(0.5 * (prev_x + q.x));
                parity = need;
            }
            prev_x = q.x;
        }
        if (parity == 0) verts.push_back(0.5 * (prev_x + eps));
        // keep every vertical clear of every point in the band
        for (double& vx : verts) {
            for (const auto& q : byx) {
                if (std::abs(vx - q.x) < clearance)
                    throw ContourError("barnes_line: weave vertical too close to a pole");
            }
        }

        // west along the bottom, then weave east alternating levels
        append_line_split(path.segments, cplx(eps, band.ylo), cplx(verts.front(), band.ylo),
                          chunk);
        double level = band.ylo;
        for (size_t k = 0; k < verts.size(); ++k) {
            const double next_level = (level == band.ylo) ? band.yhi : band.ylo;
            path.segments.push_back(
                PathSegment::make_line(cplx(verts[k], level), cplx(verts[k], next_level)));
            level = next_level;
            const double to_x = (k + 1 < verts.size()) ? verts[k + 1] : eps;
            append_line_split(path.segments, cplx(verts[k], level), cplx(to_x, level), chunk);
        }
        cursor_y = band.yhi;
    }
    append_line_split(path.segments, cplx(eps, cursor_y), cplx(eps, t_up), chunk);
    path.anchor_s = 0.0;
    path.anchor_point = path.segments.front().a;

    // Audits: clearance and sides (real poles only; phantoms are report-only).
    std::vector<cplx> all_pts = hard_left;
    all_pts.insert(all_pts.end(), hard_right.begin(), hard_right.end());
    rep.min_clearance = min_pole_distance(path, all_pts);
    if (rep.min_clearance < clearance) {
        std::ostringstream os;
        os << "barnes_line: clearance audit failed (min distance " << rep.min_clearance << " < "
           << clearance << ")";
        throw ContourError(os.str());
    }
    for (const cplx& p : hard_left)
        if (!side_audit(path, p, false))
            throw ContourError("barnes_line: side audit failed for a left-family pole");
    for (const cplx& p : hard_right)
        if (!side_audit(path, p, true))
            throw ContourError("barnes_line: side audit failed for a right-family pole");
    return {std::move(path), std::move(rep)};
}

std::pair<Contour, PoleReport> barnes_contour(cplx m1, cplx m2c, cplx z, double kappa, cplx mu,
                                              int l, double tol, const BarnesOptions& opt) {
    if (mu.imag() <= 0.0 || mu.imag() >= kTwoPi)
        throw RegionError("barnes_contour: requires 0 < Im mu < 2*pi");

    BarnesOptions o = opt;
    if (o.t_up <= 0 || o.t_down <= 0) {
        // Integrand envelope rates for the Xi*p*P form: Im(mu)/kappa above,
        // (2*pi - Im(mu))/kappa below.
        const double margin = std::log(100.0 / tol) + 4.0;
        o.t_up = margin * kappa / mu.imag() + std::abs(z.imag()) + 2.0 * kappa;
        o.t_down = margin * kappa / (kTwoPi - mu.imag()) + std::abs(z.imag()) + 2.0 * kappa;
    }
    if (o.eps_hint <= 0 && m1.real() < 0.0 && m2c.real() < 0.0 && z.real() == 0.0) {
        // the paper's straight-line region
        o.eps_hint = 0.5 * std::min(-m1.real(), -m2c.real());
    }

    // At m2 = 0 the z-anchored gamma pair cancels against p and P for the only
    // admissible weights, so those families are classification-only phantoms.
    const bool m2_zero = (m2c == cplx(0.0));
    std::vector<PoleFamily> fams;
    fams.push_back({cplx(0.0), -kappa, false, "-kappa*N", false});
    fams.push_back({z, -kappa, false, "z-kappa*N", m2_zero});
    fams.push_back({-m1, kappa, true, "-m1+kappa*N", false});
    fams.push_back({z - m2c, kappa, true, "z-m2+kappa*N", m2_zero});

    auto [path, rep] = barnes_line(fams, kappa, o);
    Contour c;
    c.family = ContourFamily::barnes;
    c.truncation_radius = std::max(o.t_up, o.t_down);
    c.clearance = o.clearance > 0 ? o.clearance : 1e-3 * kappa;
    c.vars.assign(static_cast<size_t>(std::max(l, 1)), path);
    if (l == 0) c.vars.clear();
    return {std::move(c), std::move(rep)};
}

std::pair<Contour, PoleReport> barnes_contour(const Params& p, double tol,
                                              const BarnesOptions& opt) {
    return barnes_contour(p.m1, cplx(static_cast<double>(p.m2)), p.z, p.kappa, p.mu, p.l2, tol,
                          opt);
}

// ---------------------------------------------------------------------------
// Loop contours
// ---------------------------------------------------------------------------

namespace {

// One counterclockwise loop: in-ray on the +delta side toward the circle,
// arc around the center, out-ray back to infinity on the -delta side.
Path make_loop(cplx center, double theta, double radius, double truncation, double delta) {
    Path path;
    const cplx dir = std::exp(cplx(0.0, theta));
    const cplx off = cplx(0.0, 1.0) * dir;  // left of the outbound direction
    const double rho = std::sqrt(radius * radius - delta * delta);
    const double gap = std::asin(delta / radius);

    // inbound ray, geometric splitting from far to near
    std::vector<double> stops;
    double x = std::max(truncation, 4.0 * radius);
    while (x > 2.5 * radius) {
        stops.push_back(x);
        x *= 0.5;
    }
    stops.push_back(rho);
    for (size_t k = 0; k + 1 < stops.size(); ++k) {
        path.segments.push_back(PathSegment::make_line(center + dir * stops[k] + off * delta,
                                                       center + dir * stops[k + 1] + off * delta));
    }
    // counterclockwise arc from theta+gap to theta+2pi-gap, split <= pi/4
    const double th0 = theta + gap, th1 = theta + kTwoPi - gap;
    const int narc = std::max(8, static_cast<int>(std::ceil((th1 - th0) / (kPi / 4.0))));
    for (int k = 0; k < narc; ++k) {
        path.segments.push_back(PathSegment::make_arc(
            center, radius, th0 + (th1 - th0) * k / narc, th0 + (th1 - th0) * (k + 1) / narc));
    }
    // outbound ray
    std::reverse(stops.begin(), stops.end());
    for (size_t k = 0; k + 1 < stops.size(); ++k) {
        path.segments.push_back(PathSegment::make_line(center + dir * stops[k] - off * delta,
                                                       center + dir * stops[k + 1] - off * delta));
    }
    // anchor: middle of the arc (angle theta + pi), west crossing
    const double arc_start = static_cast<double>(stops.size() - 1);
    path.anchor_s = arc_start + static_cast<double>(narc) / 2.0;
    path.anchor_point = center - radius * dir;
    return path;
}

double path_min_distance(const Path& a, const Path& b) {
    double best = 1e300;
    for (double s = 0.0; s < a.param_end(); s += 0.05) {
        const cplx pa = a.point(s);
        for (double t = 0.0; t < b.param_end(); t += 0.05) {
            best = std::min(best, std::abs(pa - b.point(t)));
        }
    }
    return best;
}

}  // namespace

Contour loops_J(cplx z, int b, int l, double kappa, const LoopOptions& opt) {
    if (z == cplx(0.0)) throw ContourError("loops_J: z must be nonzero");
    const double az = arg_in(z, 0.0);
    if (!(az > 0.0 && az < kTwoPi))
        throw RegionError("loops_J: requires 0 < arg z < 2*pi");
    if (!(opt.truncation > 0.0)) throw ContourError("loops_J: truncation not set");
    const double clearance = opt.clearance > 0 ? opt.clearance : 1e-3 * kappa;

    const double r0 = opt.radius_hint > 0 ? opt.radius_hint
                                          : 0.3 * std::min(1.0, std::abs(z - 1.0)) /
                                                static_cast<double>(std::max(l, 1));
    // Cap the base radii so the outermost loop of each family clears the
    // origin and the other branch point.
    const double zfam_extent = std::pow(opt.nesting_factor, std::max(b - 1, 0));
    const double ofam_extent = std::pow(opt.nesting_factor, std::max(l - b - 1, 0));
    const double r0_z =
        std::min({r0, 0.22 * std::abs(z) / zfam_extent, 0.22 * std::abs(z - 1.0) / zfam_extent});
    const double r0_1 = std::min({r0, 0.22 / ofam_extent, 0.22 * std::abs(z - 1.0) / ofam_extent});
    if ((b > 0 && r0_z < 4 * clearance) || (b < l && r0_1 < 4 * clearance))
        throw ContourError("loops_J: no room for loops (z too close to 0 or 1)");

    Contour c;
    c.family = ContourFamily::loops_j;
    c.truncation_radius = opt.truncation;
    c.clearance = clearance;
    double max_rz = 0.0, max_r1 = 0.0;
    for (int u = 1; u <= l; ++u) {
        const bool around_z = u <= b;
        const int depth = around_z ? (u - 1) : (u - b - 1);
        const double r = (around_z ? r0_z : r0_1) * std::pow(opt.nesting_factor, depth);
        const double delta = r / 10.0;
        const cplx center = around_z ? z : cplx(1.0);
        const double theta = around_z ? az : 0.0;
        (around_z ? max_rz : max_r1) = std::max(around_z ? max_rz : max_r1, r + delta);
        c.vars.push_back(make_loop(center, theta, r, opt.truncation, delta));
    }
    if (b > 0 && b < l && std::abs(z - 1.0) <= max_rz + max_r1 + 2 * clearance)
        throw ContourError("loops_J: the z-loops and 1-loops collide (|z-1| too small)");
    // same-family nesting audit
    for (size_t i = 0; i < c.vars.size(); ++i)
        for (size_t j = i + 1; j < c.vars.size(); ++j) {
            const bool fi = static_cast<int>(i) < b, fj = static_cast<int>(j) < b;
            if (fi == fj && path_min_distance(c.vars[i], c.vars[j]) < 0.5 * clearance)
                throw ContourError("loops_J: nested loops touch");
        }
    // branch-point clearance: every loop clear of 0, 1 and z except its center
    const cplx branch_pts[] = {cplx(0.0), cplx(1.0), z};
    for (int u = 1; u <= l; ++u) {
        const cplx center = (u <= b) ? z : cplx(1.0);
        for (const cplx& bp : branch_pts) {
            if (bp == center) continue;
            if (min_pole_distance(c.vars[static_cast<size_t>(u - 1)], {&bp, 1}) < clearance)
                throw ContourError("loops_J: loop passes a branch point too closely");
        }
    }
    return c;
}

Contour loops_B(int m, double truncation, double kappa, const LoopOptions& opt) {
    if (m < 0) throw ContourError("loops_B: m must be nonnegative");
    Contour c;
    c.family = ContourFamily::loops_b;
    c.truncation_radius = truncation;
    c.clearance = opt.clearance > 0 ? opt.clearance : 1e-3 * kappa;
    const double r0 = opt.radius_hint > 0 ? opt.radius_hint : 0.4 * kappa;
    for (int u = 1; u <= m; ++u) {
        const double r = r0 * std::pow(opt.nesting_factor, u - 1);
        c.vars.push_back(make_loop(cplx(0.0), 0.0, r, truncation, r / 10.0));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Audits and serialization
// ---------------------------------------------------------------------------

namespace {

double point_segment_distance(cplx p, const PathSegment& seg) {
    if (seg.kind == PathSegment::Kind::line) {
        const cplx d = seg.b - seg.a;
        const double len2 = std::norm(d);
        if (len2 == 0.0) return std::abs(p - seg.a);
        double t = ((p - seg.a) * std::conj(d)).real() / len2;
        t = std::clamp(t, 0.0, 1.0);
        return std::abs(p - (seg.a + t * d));
    }
    // arc: clamp the angle of p into the swept range
    const cplx rel = p - seg.center;
    double th = std::arg(rel);
    const double lo = std::min(seg.theta0, seg.theta1), hi = std::max(seg.theta0, seg.theta1);
    while (th < lo) th += kTwoPi;
    if (th > hi) {
        // compare against both endpoints and the wrapped angle
        const double d0 = std::abs(p - seg.point(0.0));
        const double d1 = std::abs(p - seg.point(1.0));
        return std::min(d0, d1);
    }
    return std::abs(std::abs(rel) - seg.radius);
}

}  // namespace

double min_pole_distance(const Path& path, std::span<const cplx> poles) {
    double best = 1e300;
    for (const cplx& p : poles)
        for (const auto& seg : path.segments) best = std::min(best, point_segment_distance(p, seg));
    return best;
}

bool side_audit(const Path& path, cplx pole, bool want_right) {
    // Horizontal ray from the pole westward; count crossings with segments.
    // Barnes paths are axis-aligned so only (near-)vertical lines count.
    int crossings = 0;
    for (const auto& seg : path.segments) {
        if (seg.kind != PathSegment::Kind::line) continue;
        const double x0 = seg.a.real(), x1 = seg.b.real();
        const double y0 = seg.a.imag(), y1 = seg.b.imag();
        if (std::abs(x0 - x1) > 1e-12 * (1.0 + std::abs(x0))) continue;  // not vertical
        if (x0 >= pole.real()) continue;
        const double lo = std::min(y0, y1), hi = std::max(y0, y1);
        if (pole.imag() > lo && pole.imag() <= hi) ++crossings;
    }
    return want_right == (crossings % 2 == 1);
}

std::string contour_to_json(const Contour& c) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& path : c.vars) {
        nlohmann::json var = nlohmann::json::array();
        for (const auto& seg : path.segments) {
            nlohmann::json j;
            if (seg.kind == PathSegment::Kind::line) {
                j["kind"] = "line";
                j["points"] = {{seg.a.real(), seg.a.imag()}, {seg.b.real(), seg.b.imag()}};
            } else {
                j["kind"] = "arc";
                nlohmann::json pts = nlohmann::json::array();
                for (int k = 0; k <= 16; ++k) {
                    const cplx p = seg.point(k / 16.0);
                    pts.push_back({p.real(), p.imag()});
                }
                j["points"] = pts;
            }
            var.push_back(j);
        }
        out.push_back(var);
    }
    return out.dump(2);
}

}  // namespace qhd
