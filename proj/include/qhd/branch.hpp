#ifndef QHD_BRANCH_HPP
#define QHD_BRANCH_HPP

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qhd/contour.hpp"
#include "qhd/params.hpp"

namespace qhd {

// Continuously tracked logarithms of multivalued factors along a path.
struct BranchState {
    double s = 0.0;  // path parameter of `point`
    cplx point;
    std::vector<cplx> logs;  // one continuous log per tracked factor
};

enum class Side { i_side, j_side };

// Branch base state per the fixed-argument conventions: arg t in [0,2pi),
// arg(1-t) in (-pi,pi), arg(z-t) in (0,2pi). The I-side integrand is
// single-valued (gamma ratios), so its state carries no factors.
BranchState init_branch(cplx base_point, const Params& p, Side side);

// Advance each tracked log by the principal increment to the new factor
// values. Throws BranchStepError when a factor turns by >= pi/2 in one step.
void branch_advance(BranchState& state, double s_next, cplx next_point,
                    std::span<const cplx> factor_values);

// Dense table of the continuous log of one factor along a path, anchored at
// the path's anchor. Built by stepwise continuation with adaptive refinement;
// lookup at arbitrary parameters afterwards is O(log n).
class BranchTable {
  public:
    BranchTable() = default;
    BranchTable(const Path& path, std::function<cplx(cplx)> factor, cplx anchor_log,
                int samples_per_segment = 24, double max_arg_step = 0.8);

    cplx log_at(double s) const;
    cplx log_at_start() const { return logs_.front(); }
    cplx log_at_end() const { return logs_.back(); }

  private:
    const Path* path_ = nullptr;
    std::function<cplx(cplx)> factor_;
    std::vector<double> s_;
    std::vector<cplx> logs_;
};

}  // namespace qhd

#endif
