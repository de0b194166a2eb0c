#ifndef GAM_CONSTELLATION_HPP
#define GAM_CONSTELLATION_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gam {

using cplx = std::complex<double>;

/// Golden ratio fraction (3 - sqrt 5) / 2; 2*pi times this is the golden angle.
inline constexpr double golden_fraction = 0.38196601125010515179541316563436;

enum class Scheme { gb_gam, disc_gam, tgb_gam, tgb_gam_snr, square_qam };

std::string_view to_string(Scheme s);
/// Accepts the canonical tags plus "qam" as an alias of square-qam.
std::optional<Scheme> parse_scheme(std::string_view tag);
bool is_gam(Scheme s);

/// Equiprobable two-dimensional constellation. Points are ordered by
/// nondecreasing magnitude; for GAM schemes point m (1-based) sits at the
/// phase golden_phase(m).
class Constellation {
public:
    Constellation(Scheme scheme, std::vector<cplx> points, double mean_power);

    Scheme scheme() const { return scheme_; }
    std::size_t size() const { return points_.size(); }
    std::span<const cplx> points() const { return points_; }
    const cplx& operator[](std::size_t i) const { return points_[i]; }
    double mean_power() const { return mean_power_; }
    double prob_per_point() const { return 1.0 / static_cast<double>(points_.size()); }

    /// (1/M) sum |x_m|^2 evaluated from the stored points.
    double measured_power() const;
    std::vector<double> magnitudes() const;
    double peak_magnitude() const;
    /// Same shape at another target power.
    Constellation rescaled(double new_mean_power) const;

private:
    Scheme scheme_;
    std::vector<cplx> points_;
    double mean_power_;
};

/// Truncation radii of the radial Gaussian density exp(-rho^2) on
/// rho_i <= rho <= rho_o (unit-variance, pre-normalization units).
struct ShapingParams {
    double rho_i = 0.0;
    double rho_o = 1.0;

    bool valid() const;
    bool degenerate_ring() const { return rho_i == rho_o; }
};

enum class SamplingGrid {
    upper,    ///< t_m = m / M
    midpoint, ///< t_m = (m - 1/2) / M
};

std::string_view to_string(SamplingGrid g);
std::optional<SamplingGrid> parse_sampling_grid(std::string_view s);

struct TgbOptions {
    SamplingGrid grid = SamplingGrid::upper;
    /// Allow rho_i == rho_o; every magnitude is then sqrt(mean_power).
    bool allow_degenerate_ring = false;
};

/// Golden-angle phase 2*pi*phi*m reduced to [0, 2*pi). Throws for m < 1.
double golden_phase(long long m);

/// Geometric bell-shaped GAM. r_1 = 0 with the standard 1..M index. With
/// shifted_index the law sqrt(ln(M/(M-m))) is used for m = 1..M; its top
/// term is unbounded and is clamped the same way as gen_tgb_gam.
Constellation gen_gb_gam(int M, double mean_power = 1.0, bool shifted_index = false);

/// Disc-shaped GAM, r_m proportional to sqrt(m).
Constellation gen_disc_gam(int M, double mean_power = 1.0);

/// Radial cdf of the truncated Gaussian, clipped to [0, 1] outside the support.
double trunc_gauss_cdf(double rho, const ShapingParams& params);

/// Inverse of trunc_gauss_cdf for t in (0, 1].
double trunc_gauss_quantile(double t, const ShapingParams& params);

/// Truncated Gaussian GAM from inverse sampling of trunc_gauss_cdf.
Constellation gen_tgb_gam(int M, const ShapingParams& params, double mean_power = 1.0,
                          const TgbOptions& opts = {});

/// SNR-dependent truncated Gaussian GAM, r_m^2 proportional to -ln(1 - m/(S+M)).
Constellation gen_tgb_gam_snr(int M, double snr_linear, double mean_power = 1.0);

/// Square M-QAM on odd-integer coordinates; M must be 4^k.
Constellation gen_square_qam(int M, double mean_power = 1.0);

/// Peak-to-average power ratio in dB relative to the target mean power.
double papr_db(const Constellation& c);

} // namespace gam

#endif
