#ifndef GAM_SWEEP_HPP
#define GAM_SWEEP_HPP

#include "gam/constellation.hpp"
#include "gam/mi.hpp"
#include "gam/shaping_opt.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gam {

/// What a sweep evaluates. capacity is the log2(1+S) reference curve;
/// tgb_gam uses fixed radii; tgb_gam_opt runs the shaping optimizer at
/// every SNR.
enum class SweepScheme { capacity, square_qam, gb_gam, disc_gam, tgb_gam, tgb_gam_snr, tgb_gam_opt };

std::string_view to_string(SweepScheme s);
std::optional<SweepScheme> parse_sweep_scheme(std::string_view s);

struct SchemeSettings {
    std::optional<ShapingParams> radii;     ///< required for tgb_gam
    std::optional<double> papr_cap_db;      ///< tgb_gam_opt only
    bool fix_rho_i_zero = true;             ///< tgb_gam_opt only
    SamplingGrid grid = SamplingGrid::upper;
};

/// Constellation of a non-capacity scheme at the given SNR. For
/// tgb_gam_opt the optimizer result is returned through opt.
Constellation make_constellation(SweepScheme scheme, int M, double snr_linear, const SchemeSettings& settings,
                                 const OptConfig& opt_cfg = {}, OptResult* opt = nullptr);

/// Overrides applied on top of EstimatorConfig::defaults_for(M).
struct EstimatorOverrides {
    std::optional<MiMethod> method;
    std::optional<int> quad_order;
    std::optional<long long> n_samples;
    std::uint64_t seed = 1;
};

EstimatorConfig resolve_estimator(int M, const EstimatorOverrides& o);

struct SweepRow {
    std::string scheme;
    int M = 0;                          ///< 0 for the capacity curve
    double snr_db = 0.0;
    std::optional<double> mi_bits;      ///< empty only on error rows
    std::optional<double> std_error;
    std::optional<double> papr_db;      ///< empty for capacity and error rows
    std::optional<double> rho_i, rho_o; ///< TGB-GAM schemes only
    std::string method;                 ///< estimator, "closed-form", or "infeasible"
    long long budget = 0;
    std::uint64_t seed = 0;
};

inline constexpr std::string_view sweep_csv_header =
    "scheme,M,snr_db,mi_bits,std_error,papr_db,rho_i,rho_o,method,budget,seed";

struct GapRow {
    std::string scheme;
    int M = 0;
    double rate = 0.0;
    std::optional<double> gap_db, snr_db, mi_bits, std_error;
    std::string method;
    long long budget = 0;
    std::uint64_t seed = 0;
    std::string status = "ok";
};

inline constexpr std::string_view gap_csv_header =
    "scheme,M,rate,gap_db,snr_db,mi_bits,std_error,method,budget,seed,status";

struct MiSweepConfig {
    std::vector<SweepScheme> schemes;
    std::vector<int> sizes;
    std::vector<double> snr_db;
    SchemeSettings settings;
    EstimatorOverrides estimator;
    OptConfig opt;
    int workers = 1;
};

/// One row per (scheme, M, SNR), sorted by (scheme, M, snr_db). MC rows
/// share the seed, so schemes compared at one SNR see the same noise draws.
/// Infeasible optimizer points become rows with method "infeasible".
std::vector<SweepRow> run_mi_sweep(const MiSweepConfig& cfg);

struct GapTableConfig {
    std::vector<SweepScheme> schemes;
    std::vector<int> sizes;
    double rate = 3.0;
    SchemeSettings settings;
    EstimatorOverrides estimator;
    OptConfig opt;
    GapSearch search;
    int workers = 1;
};

std::vector<GapRow> run_gap_table(const GapTableConfig& cfg);

enum class PaprVariant { optimized, snr_form };
std::optional<PaprVariant> parse_papr_variant(std::string_view s);

struct PaprSweepConfig {
    PaprVariant variant = PaprVariant::snr_form;
    std::vector<int> sizes;
    std::vector<double> snr_db;
    SchemeSettings settings;
    EstimatorOverrides estimator;
    OptConfig opt;
    int workers = 1;
};

/// PAPR (and MI) of SNR-dependent or optimized TGB-GAM per (M, SNR).
std::vector<SweepRow> run_papr_sweep(const PaprSweepConfig& cfg);

/// "start:stop:step", inclusive of stop; or a comma list of values.
std::vector<double> parse_snr_grid(std::string_view text);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_gap_csv(std::ostream& out, const std::vector<GapRow>& rows);

/// Generic CSV table; cells are kept as text.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a column; throws std::runtime_error naming it when absent.
    std::size_t column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);

} // namespace gam

#endif
