#include "gam/shaping_opt.hpp"

#include "gam/nelder_mead.hpp"
#include "parallel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace gam {

namespace {

constexpr double infeasible_penalty = 1e3;

struct Trial {
    bool feasible = false;
    ShapingParams params;
    double mi = 0.0;
    double papr = 0.0;
};

// Search coordinates: u = ln rho_o, v = rho_i / rho_o.
class Objective {
public:
    Objective(int M, const ChannelSpec& ch, std::optional<double> cap, const OptConfig& cfg)
        : M_(M), ch_(ch), cap_(cap), cfg_(cfg), u_min_(std::log(cfg.rho_o_min)), u_max_(std::log(cfg.rho_o_max)) {}

    double u_min() const { return u_min_; }
    double u_max() const { return u_max_; }

    Trial evaluate(double u, double v) const {
        Trial t;
        if (!(u >= u_min_ && u <= u_max_ && v >= 0.0 && v < 1.0)) return t;
        const double rho_o = std::exp(u);
        t.params = {v * rho_o, rho_o};
        if (!t.params.valid()) return t;
        const Constellation c = gen_tgb_gam(M_, t.params, ch_.mean_power(), cfg_.tgb);
        t.papr = papr_db(c);
        if (cap_ && t.papr > *cap_) return t;
        t.mi = estimate_mi_ghq(c, ch_, cfg_.quad_order, 1).mi_bits;
        t.feasible = true;
        return t;
    }

private:
    int M_;
    ChannelSpec ch_;
    std::optional<double> cap_;
    OptConfig cfg_;
    double u_min_, u_max_;
};

} // namespace

bool validate_params(const ShapingParams& params, int M, std::optional<double> papr_cap_db, const TgbOptions& tgb) {
    if (!params.valid()) return false;
    if (!papr_cap_db) return true;
    try {
        return papr_db(gen_tgb_gam(M, params, 1.0, tgb)) <= *papr_cap_db;
    } catch (const std::domain_error&) {
        return false;
    }
}

OptResult optimize_tgb(int M, const ChannelSpec& ch, std::optional<double> papr_cap_db, bool fix_rho_i_zero,
                       const OptConfig& cfg) {
    if (M < 2) throw std::domain_error("shaping optimization needs M >= 2, got " + std::to_string(M));
    if (papr_cap_db && !(*papr_cap_db >= 0.0))
        throw InfeasibleError("PAPR cap " + std::to_string(*papr_cap_db) +
                              " dB is below 0 dB; no constellation has a peak below its average power");
    if (!(cfg.rho_o_min > 0.0 && cfg.rho_o_max > cfg.rho_o_min && cfg.rho_o_grid >= 2 && cfg.rho_i_grid >= 1))
        throw std::domain_error("invalid shaping search configuration");

    const Objective objective(M, ch, papr_cap_db, cfg);
    const int n_u = cfg.rho_o_grid;
    const int n_v = fix_rho_i_zero ? 1 : cfg.rho_i_grid;
    const double du = (objective.u_max() - objective.u_min()) / (n_u - 1);
    const double dv = 1.0 / cfg.rho_i_grid;

    // Coarse grid; cells are independent.
    std::vector<Trial> cells(static_cast<std::size_t>(n_u) * n_v);
    detail::parallel_for(static_cast<long long>(cells.size()), cfg.workers, [&](long long lo, long long hi) {
        for (long long idx = lo; idx < hi; ++idx) {
            const int iu = static_cast<int>(idx / n_v), iv = static_cast<int>(idx % n_v);
            // Clamp the last node onto the bound so rounding never leaves the box.
            const double u = iu == n_u - 1 ? objective.u_max() : objective.u_min() + iu * du;
            cells[idx] = objective.evaluate(u, iv * dv);
        }
    });

    OptResult result;
    result.evaluations = static_cast<int>(cells.size());
    const Trial* best = nullptr;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].feasible && (!best || cells[i].mi > best->mi)) {
            best = &cells[i];
            best_idx = i;
        }
    if (!best)
        throw InfeasibleError("no (rho_i, rho_o) grid cell satisfies the PAPR cap of " +
                              std::to_string(papr_cap_db.value_or(0.0)) + " dB");
    Trial incumbent = *best;

    const double u0 = best_idx / n_v == static_cast<std::size_t>(n_u - 1)
                          ? objective.u_max()
                          : objective.u_min() + static_cast<double>(best_idx / n_v) * du;
    const double v0 = static_cast<double>(best_idx % n_v) * dv;

    auto to_uv = [&](const std::vector<double>& x) {
        return std::pair{x[0], fix_rho_i_zero ? 0.0 : x[1]};
    };
    const auto f = [&](const std::vector<double>& x) {
        const auto [u, v] = to_uv(x);
        const Trial t = objective.evaluate(u, v);
        if (!t.feasible) return infeasible_penalty;
        if (t.mi > incumbent.mi) incumbent = t;
        return -t.mi;
    };

    std::vector<double> x0{u0}, steps{u0 + du <= objective.u_max() ? du : -du};
    if (!fix_rho_i_zero) {
        x0.push_back(v0);
        steps.push_back(v0 + dv < 1.0 ? dv : -dv);
    }
    NelderMeadOptions nm;
    nm.max_evaluations = cfg.max_refine_evaluations;
    nm.x_tolerance = cfg.refine_tolerance;
    nm.f_tolerance = 1e-9;
    const auto refined = nelder_mead(f, x0, steps, nm);

    result.evaluations += refined.evaluations;
    result.converged = refined.converged;
    result.params = incumbent.params;
    result.mi_bits = incumbent.mi;
    result.papr_db = incumbent.papr;
    return result;
}

} // namespace gam
