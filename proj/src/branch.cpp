#include "qhd/branch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qhd/errors.hpp"

namespace qhd {

namespace {
constexpr double kPi = std::numbers::pi;

cplx log_with_arg(cplx w, double arg_lo) {
    return cplx(std::log(std::abs(w)), arg_in(w, arg_lo));
}
}  // namespace

BranchState init_branch(cplx base_point, const Params& p, Side side) {
    BranchState st;
    st.s = 0.0;
    st.point = base_point;
    if (side == Side::i_side) return st;  // gamma-ratio integrand is single-valued
    const cplx t = base_point;
    if (t == cplx(0.0) || t == cplx(1.0) || t == p.z)
        throw ContourError("init_branch: anchor sits on a branch point");
    st.logs.push_back(log_with_arg(t, 0.0));            // arg t in [0, 2pi)
    st.logs.push_back(std::log(1.0 - t));               // arg(1-t) in (-pi, pi)
    st.logs.push_back(log_with_arg(p.z - t, 0.0));      // arg(z-t) in (0, 2pi)
    return st;
}

void branch_advance(BranchState& state, double s_next, cplx next_point,
                    std::span<const cplx> factor_values) {
    if (factor_values.size() != state.logs.size())
        throw BranchStepError("branch_advance: factor count mismatch");
    std::vector<cplx> updated(state.logs.size());
    for (size_t k = 0; k < state.logs.size(); ++k) {
        const cplx old_val = std::exp(state.logs[k]);
        const cplx ratio = factor_values[k] / old_val;
        const double darg = std::arg(ratio);
        const double drel = std::abs(ratio - 1.0);
        if (std::abs(darg) >= kPi / 2.0 || drel > 5.0)
            throw BranchStepError("branch_advance: step too large, refine the path");
        updated[k] = state.logs[k] + std::log(ratio);
    }
    state.logs = std::move(updated);
    state.s = s_next;
    state.point = next_point;
}

BranchTable::BranchTable(const Path& path, std::function<cplx(cplx)> factor, cplx anchor_log,
                         int samples_per_segment, double max_arg_step)
    : path_(&path), factor_(std::move(factor)) {
    // Initial grid: uniform per segment plus the anchor parameter.
    std::vector<double> grid;
    const int nseg = static_cast<int>(path.segments.size());
    for (int k = 0; k < nseg; ++k)
        for (int j = 0; j < samples_per_segment; ++j)
            grid.push_back(k + static_cast<double>(j) / samples_per_segment);
    grid.push_back(path.param_end());
    grid.push_back(path.anchor_s);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    // Refine until consecutive samples change the factor's argument slowly.
    for (int pass = 0; pass < 24; ++pass) {
        bool refined = false;
        std::vector<double> next;
        next.reserve(grid.size() * 2);
        for (size_t i = 0; i + 1 < grid.size(); ++i) {
            next.push_back(grid[i]);
            const cplx f0 = factor_(path.point(grid[i]));
            const cplx f1 = factor_(path.point(grid[i + 1]));
            if (f0 == cplx(0.0) || f1 == cplx(0.0))
                throw BranchStepError("BranchTable: factor vanishes on the path");
            if (std::abs(std::arg(f1 / f0)) > max_arg_step) {
                next.push_back(0.5 * (grid[i] + grid[i + 1]));
                refined = true;
            }
        }
        next.push_back(grid.back());
        grid = std::move(next);
        if (!refined) break;
        if (pass == 23) throw BranchStepError("BranchTable: refinement did not terminate");
    }

    // Walk from the anchor outwards in both directions.
    s_ = grid;
    logs_.assign(grid.size(), cplx(0.0));
    const size_t ia = static_cast<size_t>(
        std::lower_bound(grid.begin(), grid.end(), path.anchor_s) - grid.begin());
    logs_[ia] = anchor_log;
    for (size_t i = ia + 1; i < grid.size(); ++i) {
        const cplx ratio = factor_(path.point(s_[i])) / factor_(path.point(s_[i - 1]));
        logs_[i] = logs_[i - 1] + std::log(ratio);
    }
    for (size_t i = ia; i-- > 0;) {
        const cplx ratio = factor_(path.point(s_[i])) / factor_(path.point(s_[i + 1]));
        logs_[i] = logs_[i + 1] + std::log(ratio);
    }
}

cplx BranchTable::log_at(double s) const {
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    size_t i = (it == s_.begin()) ? 0 : static_cast<size_t>(it - s_.begin()) - 1;
    const cplx f_here = factor_(path_->point(s));
    const cplx f_ref = factor_(path_->point(s_[i]));
    return logs_[i] + std::log(f_here / f_ref);
}

}  // namespace qhd
