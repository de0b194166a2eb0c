#ifndef GAM_PLOT_HPP
#define GAM_PLOT_HPP

#include "gam/constellation.hpp"
#include "gam/sweep.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gam {

struct Series {
    std::string label;
    std::vector<double> x, y;
    bool scatter = false;
    bool dashed = false;
};

struct Figure {
    std::string title, x_label, y_label;
    std::vector<Series> series;
    bool equal_aspect = false;
    std::optional<double> guide_radius; ///< dashed circle around the origin
};

/// MI vs SNR per (scheme, M) plus the capacity curve over the same SNR span.
/// Rows without mi_bits (error markers) are skipped; only_M filters sizes.
Figure mi_curves_figure(const CsvTable& table, std::optional<int> only_M = std::nullopt);

/// PAPR vs SNR per (scheme, M).
Figure papr_curves_figure(const CsvTable& table, std::optional<int> only_M = std::nullopt);

/// Equal-aspect scatter with a guide circle at the peak magnitude.
Figure constellation_figure(const Constellation& c);

std::string render_svg(const Figure& fig);

} // namespace gam

#endif
