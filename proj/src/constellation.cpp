#include "gam/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gam {

namespace {

// Floor for the argument of the log in the quantile; keeps r_M finite when
// the outer truncation radius is so large that exp(-rho_o^2) underflows.
constexpr double log_arg_floor = 1e-300;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::domain_error(msg);
}

void check_size(int M) { require(M >= 1, "constellation size M must be >= 1, got " + std::to_string(M)); }

void check_power(double p) {
    require(std::isfinite(p) && p > 0.0, "mean power must be positive and finite");
}

// Places magnitudes on the golden-angle spiral and scales them to mean_power.
Constellation spiral(Scheme scheme, const std::vector<double>& radii, double mean_power) {
    const double sum_sq = std::transform_reduce(radii.begin(), radii.end(), 0.0, std::plus<>{},
                                                [](double r) { return r * r; });
    require(sum_sq > 0.0 && std::isfinite(sum_sq), "magnitude law has no finite positive power");
    const double scale = std::sqrt(mean_power * static_cast<double>(radii.size()) / sum_sq);

    std::vector<cplx> pts;
    pts.reserve(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i)
        pts.push_back(std::polar(scale * radii[i], golden_phase(static_cast<long long>(i) + 1)));
    return Constellation(scheme, std::move(pts), mean_power);
}

} // namespace

std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::gb_gam: return "gb-gam";
    case Scheme::disc_gam: return "disc-gam";
    case Scheme::tgb_gam: return "tgb-gam";
    case Scheme::tgb_gam_snr: return "tgb-gam-snr";
    case Scheme::square_qam: return "square-qam";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view tag) {
    if (tag == "gb-gam") return Scheme::gb_gam;
    if (tag == "disc-gam") return Scheme::disc_gam;
    if (tag == "tgb-gam") return Scheme::tgb_gam;
    if (tag == "tgb-gam-snr") return Scheme::tgb_gam_snr;
    if (tag == "square-qam" || tag == "qam") return Scheme::square_qam;
    return std::nullopt;
}

bool is_gam(Scheme s) { return s != Scheme::square_qam; }

std::string_view to_string(SamplingGrid g) { return g == SamplingGrid::upper ? "m/M" : "(m-1/2)/M"; }

std::optional<SamplingGrid> parse_sampling_grid(std::string_view s) {
    if (s == "upper" || s == "m/M") return SamplingGrid::upper;
    if (s == "midpoint" || s == "(m-1/2)/M") return SamplingGrid::midpoint;
    return std::nullopt;
}

Constellation::Constellation(Scheme scheme, std::vector<cplx> points, double mean_power)
    : scheme_(scheme), points_(std::move(points)), mean_power_(mean_power) {
    require(!points_.empty(), "constellation must contain at least one point");
    check_power(mean_power_);
    for (const auto& p : points_)
        require(std::isfinite(p.real()) && std::isfinite(p.imag()), "constellation point is not finite");
}

double Constellation::measured_power() const {
    double s = 0.0;
    for (const auto& p : points_) s += std::norm(p);
    return s / static_cast<double>(points_.size());
}

std::vector<double> Constellation::magnitudes() const {
    std::vector<double> r(points_.size());
    std::transform(points_.begin(), points_.end(), r.begin(), [](const cplx& p) { return std::abs(p); });
    return r;
}

double Constellation::peak_magnitude() const {
    double peak = 0.0;
    for (const auto& p : points_) peak = std::max(peak, std::norm(p));
    return std::sqrt(peak);
}

Constellation Constellation::rescaled(double new_mean_power) const {
    check_power(new_mean_power);
    const double g = std::sqrt(new_mean_power / mean_power_);
    std::vector<cplx> pts(points_);
    for (auto& p : pts) p *= g;
    return Constellation(scheme_, std::move(pts), new_mean_power);
}

bool ShapingParams::valid() const {
    return std::isfinite(rho_i) && std::isfinite(rho_o) && rho_i >= 0.0 && rho_o > rho_i;
}

double golden_phase(long long m) {
    require(m >= 1, "golden_phase index must be >= 1, got " + std::to_string(m));
    // Reduce m*phi modulo 1 before scaling so large indices keep precision.
    const double turns = std::fmod(static_cast<double>(m) * golden_fraction, 1.0);
    double phase = 2.0 * std::numbers::pi * turns;
    if (phase >= 2.0 * std::numbers::pi) phase -= 2.0 * std::numbers::pi;
    return phase;
}

Constellation gen_gb_gam(int M, double mean_power, bool shifted_index) {
    check_size(M);
    check_power(mean_power);
    require(M >= 2, "GB-GAM is undefined for M = 1 (ln M - ln(M!)/M = 0)");
    const double dM = M;
    std::vector<double> radii(M);
    for (int m = 1; m <= M; ++m) {
        // ln(M / (M + 1 - m)) written as -ln(1 - (m - 1)/M).
        const double frac = shifted_index ? m / dM : (m - 1) / dM;
        const double arg = std::max(1.0 - frac, log_arg_floor);
        radii[m - 1] = std::sqrt(-std::log(arg));
    }
    return spiral(Scheme::gb_gam, radii, mean_power);
}

Constellation gen_disc_gam(int M, double mean_power) {
    check_size(M);
    check_power(mean_power);
    std::vector<double> radii(M);
    for (int m = 1; m <= M; ++m) radii[m - 1] = std::sqrt(static_cast<double>(m));
    return spiral(Scheme::disc_gam, radii, mean_power);
}

double trunc_gauss_cdf(double rho, const ShapingParams& params) {
    require(params.valid(), "invalid shaping parameters: need 0 <= rho_i < rho_o");
    if (rho <= params.rho_i) return 0.0;
    if (rho >= params.rho_o) return 1.0;
    const double span = -std::expm1(-(params.rho_o - params.rho_i) * (params.rho_o + params.rho_i));
    const double mass = -std::expm1(-(rho - params.rho_i) * (rho + params.rho_i));
    return mass / span;
}

double trunc_gauss_quantile(double t, const ShapingParams& params) {
    require(t > 0.0 && t <= 1.0, "quantile level must lie in (0, 1], got " + std::to_string(t));
    require(params.valid(), "invalid shaping parameters: need 0 <= rho_i < rho_o");
    if (t == 1.0) return params.rho_o;
    // rho^2 = rho_i^2 - ln(1 - t (1 - exp(-(rho_o^2 - rho_i^2)))), i.e. the
    // closed-form inverse with exp(-rho_i^2) factored out.
    const double span = -std::expm1(-(params.rho_o - params.rho_i) * (params.rho_o + params.rho_i));
    const double arg = 1.0 - t * span;
    const double tail = arg < log_arg_floor ? -std::log(log_arg_floor) : -std::log1p(-t * span);
    const double rho = std::sqrt(params.rho_i * params.rho_i + tail);
    return std::clamp(rho, params.rho_i, params.rho_o);
}

Constellation gen_tgb_gam(int M, const ShapingParams& params, double mean_power, const TgbOptions& opts) {
    check_size(M);
    check_power(mean_power);
    if (opts.allow_degenerate_ring && params.degenerate_ring() && std::isfinite(params.rho_i) &&
        params.rho_i >= 0.0)
        return spiral(Scheme::tgb_gam, std::vector<double>(M, 1.0), mean_power);
    require(params.valid(), "invalid shaping parameters: need 0 <= rho_i < rho_o (rho_i = " +
                                std::to_string(params.rho_i) + ", rho_o = " + std::to_string(params.rho_o) + ")");
    const double dM = M;
    std::vector<double> radii(M);
    for (int m = 1; m <= M; ++m) {
        const double t = opts.grid == SamplingGrid::upper ? m / dM : (m - 0.5) / dM;
        radii[m - 1] = trunc_gauss_quantile(t, params);
    }
    return spiral(Scheme::tgb_gam, radii, mean_power);
}

Constellation gen_tgb_gam_snr(int M, double snr_linear, double mean_power) {
    check_size(M);
    check_power(mean_power);
    require(std::isfinite(snr_linear) && snr_linear > 0.0,
            "SNR-dependent TGB-GAM needs S > 0: the m = M term ln(1 - M/(S + M)) is singular at S = 0");
    const double denom = snr_linear + M;
    std::vector<double> radii(M);
    for (int m = 1; m <= M; ++m) radii[m - 1] = std::sqrt(-std::log1p(-m / denom));
    return spiral(Scheme::tgb_gam_snr, radii, mean_power);
}

Constellation gen_square_qam(int M, double mean_power) {
    check_power(mean_power);
    int side = 1;
    while (side * side < M) side *= 2;
    require(M >= 4 && side * side == M,
            "square QAM needs M = 4^k (4, 16, 64, 256, 1024, ...), got " + std::to_string(M));

    struct Grid {
        int a, b;
    };
    std::vector<Grid> grid;
    grid.reserve(M);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) grid.push_back({2 * i - side + 1, 2 * j - side + 1});
    std::stable_sort(grid.begin(), grid.end(), [](const Grid& x, const Grid& y) {
        const int nx = x.a * x.a + x.b * x.b, ny = y.a * y.a + y.b * y.b;
        if (nx != ny) return nx < ny;
        return std::atan2(x.b, x.a) < std::atan2(y.b, y.a);
    });

    // Average of a^2 + b^2 over the grid is 2 (side^2 - 1) / 3.
    const double grid_power = 2.0 * (side * side - 1) / 3.0;
    const double g = std::sqrt(mean_power / grid_power);
    std::vector<cplx> pts;
    pts.reserve(M);
    for (const auto& p : grid) pts.emplace_back(g * p.a, g * p.b);
    return Constellation(Scheme::square_qam, std::move(pts), mean_power);
}

double papr_db(const Constellation& c) {
    double peak = 0.0;
    for (const auto& p : c.points()) peak = std::max(peak, std::norm(p));
    return 10.0 * std::log10(peak / c.mean_power());
}

} // namespace gam
