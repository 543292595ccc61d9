#ifndef QHD_ERRORS_HPP
#define QHD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qhd {

// Gamma/sine argument landed on (or too close to) a pole or zero.
struct PoleError : std::runtime_error {
    explicit PoleError(const std::string& what) : std::runtime_error(what) {}
};

// Contour cannot be built: pole families pinch, no separating line, loops collide.
struct ContourError : std::runtime_error {
    explicit ContourError(const std::string& what) : std::runtime_error(what) {}
};

// Parameters outside the region where an integral converges.
struct RegionError : std::runtime_error {
    explicit RegionError(const std::string& what) : std::runtime_error(what) {}
};

// Series/quadrature cannot converge for the given arguments.
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Branch continuation step too large (path needs refinement).
struct BranchStepError : std::runtime_error {
    explicit BranchStepError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qhd

#endif
