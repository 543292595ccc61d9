#include "qhd/special.hpp"

#include <cmath>
#include <sstream>

#include "qhd/errors.hpp"

namespace qhd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfLogTwoPi = 0.91893853320467274178;

// Lanczos g = 7, 9 terms
constexpr double kLanczos[] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

bool is_nonpositive_integer(cplx w, double tol) {
    if (w.real() > 0.5) return false;
    return dist_to_integer(w) < tol;
}

cplx lanczos_log(cplx w) {
    // valid for Re w >= 0.5; the analytic branch agreeing with real lgamma
    const cplx z = w - 1.0;
    cplx x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cplx t = z + 7.5;
    return kHalfLogTwoPi + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx log_gamma(cplx w) {
    if (w.imag() == 0.0 && w.real() <= 0.0 && w.real() == std::floor(w.real())) {
        std::ostringstream os;
        os << "log_gamma: pole at w = " << w.real();
        throw PoleError(os.str());
    }
    // Far left: reflection (log branch modulo 2*pi*i; exp is exact).
    if (w.real() < -8.0) {
        return std::log(kPi) - log_sin_pi(w) - lanczos_log(1.0 - w);
    }
    // Shift into the Lanczos half-plane, accumulating logs.
    cplx shift = 0.0;
    int guard = 0;
    while (w.real() < 0.5) {
        shift += std::log(w);
        w += 1.0;
        if (++guard > 32) throw PoleError("log_gamma: shift failed");
    }
    return lanczos_log(w) - shift;
}

cplx gamma_ratio(std::span<const cplx> nums, std::span<const cplx> dens) {
    cplx acc = 0.0;
    for (const cplx& w : nums) {
        if (is_nonpositive_integer(w, 1e-8)) {
            std::ostringstream os;
            os << "gamma_ratio: numerator argument (" << w.real() << "," << w.imag()
               << ") within 1e-8 of a Gamma pole";
            throw PoleError(os.str());
        }
        acc += log_gamma(w);
    }
    for (const cplx& w : dens) {
        if (is_nonpositive_integer(w, 1e-8)) {
            std::ostringstream os;
            os << "gamma_ratio: denominator argument (" << w.real() << "," << w.imag()
               << ") within 1e-8 of a Gamma pole";
            throw PoleError(os.str());
        }
        acc -= log_gamma(w);
    }
    return std::exp(acc);
}

cplx hyp2f1(cplx alpha, cplx beta, cplx gamma, cplx x) {
    if (std::abs(x) >= 1.0)
        throw DivergenceError("hyp2f1: series requires |x| < 1");
    if (is_nonpositive_integer(gamma, 1e-12))
        throw PoleError("hyp2f1: gamma at a nonpositive integer");
    cplx sum = 1.0;
    cplx term = 1.0;
    int small_streak = 0;
    for (int k = 0; k < 200000; ++k) {
        const double dk = static_cast<double>(k);
        term *= (alpha + dk) * (beta + dk) / ((gamma + dk) * (dk + 1.0)) * x;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            if (++small_streak >= 2) return sum;
        } else {
            small_streak = 0;
        }
    }
    throw DivergenceError("hyp2f1: series did not converge");
}

cplx log_sin_pi(cplx w) {
    const double y = w.imag();
    const cplx ipw = cplx(0.0, kPi) * w;
    if (y > 8.0) {
        // sin(pi w) = -e^{-i pi w} (1 - e^{2 i pi w}) / (2i)
        return -ipw - cplx(std::numbers::ln2, kPi / 2.0) + std::log(1.0 - std::exp(2.0 * ipw)) +
               cplx(0.0, kPi);
    }
    if (y < -8.0) {
        // sin(pi w) = e^{i pi w} (1 - e^{-2 i pi w}) / (2i)
        return ipw - cplx(std::numbers::ln2, kPi / 2.0) + std::log(1.0 - std::exp(-2.0 * ipw));
    }
    return std::log(std::sin(kPi * w));
}

}  // namespace qhd
