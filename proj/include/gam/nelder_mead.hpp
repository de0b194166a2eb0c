#ifndef GAM_NELDER_MEAD_HPP
#define GAM_NELDER_MEAD_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace gam {

struct NelderMeadOptions {
    int max_evaluations = 200;
    double x_tolerance = 1e-4; ///< simplex extent, per coordinate
    double f_tolerance = 1e-9; ///< spread of the vertex values
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimization (standard reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). The start simplex is x0 plus steps[i] along
/// each axis.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, const std::vector<double>& steps,
                                    const NelderMeadOptions& opts = {}) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += steps[i];

    NelderMeadResult res;
    std::vector<double> values(n + 1);
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        return f(x);
    };
    for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> v2;
        for (auto i : order) {
            s2.push_back(simplex[i]);
            v2.push_back(values[i]);
        }
        simplex = std::move(s2);
        values = std::move(v2);
    };
    auto point = [&](const std::vector<double>& centroid, double coef) {
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = centroid[i] + coef * (simplex[n][i] - centroid[i]);
        return p;
    };

    while (true) {
        sort_simplex();
        double extent = 0.0;
        for (std::size_t j = 1; j <= n; ++j)
            for (std::size_t i = 0; i < n; ++i) extent = std::max(extent, std::abs(simplex[j][i] - simplex[0][i]));
        if (extent <= opts.x_tolerance && values[n] - values[0] <= opts.f_tolerance) {
            res.converged = true;
            break;
        }
        if (res.evaluations >= opts.max_evaluations) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[j][i] / static_cast<double>(n);

        const auto reflected = point(centroid, -1.0);
        const double f_r = eval(reflected);
        if (f_r < values[0]) {
            const auto expanded = point(centroid, -2.0);
            const double f_e = eval(expanded);
            if (f_e < f_r) {
                simplex[n] = expanded;
                values[n] = f_e;
            } else {
                simplex[n] = reflected;
                values[n] = f_r;
            }
            continue;
        }
        if (f_r < values[n - 1]) {
            simplex[n] = reflected;
            values[n] = f_r;
            continue;
        }
        const bool outside = f_r < values[n];
        const auto contracted = point(centroid, outside ? -0.5 : 0.5);
        const double f_c = eval(contracted);
        if (f_c < (outside ? f_r : values[n])) {
            simplex[n] = contracted;
            values[n] = f_c;
            continue;
        }
        for (std::size_t j = 1; j <= n; ++j) {
            for (std::size_t i = 0; i < n; ++i) simplex[j][i] = simplex[0][i] + 0.5 * (simplex[j][i] - simplex[0][i]);
            values[j] = eval(simplex[j]);
        }
    }
    res.x = simplex[0];
    res.value = values[0];
    return res;
}

} // namespace gam

#endif
