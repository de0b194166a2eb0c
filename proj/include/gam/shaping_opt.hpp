#ifndef GAM_SHAPING_OPT_HPP
#define GAM_SHAPING_OPT_HPP

#include "gam/constellation.hpp"
#include "gam/mi.hpp"

#include <optional>

namespace gam {

struct OptConfig {
    int quad_order = 48;
    double rho_o_min = 0.05;
    double rho_o_max = 30.0;
    int rho_o_grid = 25;     ///< log-spaced cells over [rho_o_min, rho_o_max]
    int rho_i_grid = 6;      ///< rho_i / rho_o in {0, 1/n, ..., (n-1)/n}; unused when rho_i is fixed
    int max_refine_evaluations = 80;
    double refine_tolerance = 1e-3; ///< simplex extent in (ln rho_o, rho_i/rho_o)
    int workers = 1;
    TgbOptions tgb;
};

struct OptResult {
    ShapingParams params;
    double mi_bits = 0.0;
    double papr_db = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// True iff 0 <= rho_i < rho_o and, when capped, the unit-power TGB-GAM
/// built from params has papr_db <= papr_cap_db.
bool validate_params(const ShapingParams& params, int M, std::optional<double> papr_cap_db,
                     const TgbOptions& tgb = {});

/// Maximizes the quadrature MI of gen_tgb_gam over (rho_i, rho_o): a coarse
/// log grid in rho_o (times a rho_i/rho_o grid unless fix_rho_i_zero),
/// refined by Nelder-Mead from the best feasible cell. The PAPR cap is
/// checked on the normalized constellation. Throws InfeasibleError for a
/// negative cap or when no grid cell is feasible.
OptResult optimize_tgb(int M, const ChannelSpec& ch, std::optional<double> papr_cap_db, bool fix_rho_i_zero,
                       const OptConfig& cfg = {});

} // namespace gam

#endif
