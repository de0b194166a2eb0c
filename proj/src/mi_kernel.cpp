// Inner loop of both MI estimators. Built with vectorized math (see
// src/CMakeLists.txt); nothing here may depend on NaN/Inf semantics.
#include "gam/mi.hpp"

#include <cmath>
#include <numbers>

namespace gam::detail {

double log2_sum_exp_term(const double* re, const double* im, std::size_t n, double yr, double yi, double w_norm,
                         double inv_var, double* scratch) {
    double peak = -1e300;
    for (std::size_t k = 0; k < n; ++k) {
        const double dr = yr - re[k];
        const double di = yi - im[k];
        const double e = (w_norm - dr * dr - di * di) * inv_var;
        scratch[k] = e;
        peak = e > peak ? e : peak;
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        // exp(-700) is already negligible next to the unit peak term; the clamp keeps
        // the vector exp off its slow out-of-range path.
        const double e = scratch[k] - peak;
        sum += std::exp(e < -700.0 ? -700.0 : e);
    }
    return (peak + std::log(sum)) * std::numbers::log2e;
}

} // namespace gam::detail
