#ifndef GAM_MI_HPP
#define GAM_MI_HPP

#include "gam/constellation.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gam {

/// Raised when a requested rate, cap or constraint set cannot be met.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Complex AWGN channel. noise_variance is the total complex variance
/// E|w|^2 = mean_power / S; each real dimension carries half of it.
class ChannelSpec {
public:
    ChannelSpec(double snr_linear, double mean_power = 1.0);
    static ChannelSpec for_constellation(const Constellation& c, double snr_linear) {
        return ChannelSpec(snr_linear, c.mean_power());
    }

    double snr_linear() const { return snr_; }
    double mean_power() const { return mean_power_; }
    double noise_variance() const { return mean_power_ / snr_; }

private:
    double snr_;
    double mean_power_;
};

enum class MiMethod { monte_carlo, gauss_hermite };

std::string_view to_string(MiMethod m);
std::optional<MiMethod> parse_mi_method(std::string_view s);

struct MiEstimate {
    double mi_bits = 0.0;
    MiMethod method = MiMethod::gauss_hermite;
    long long budget = 0;     ///< noise draws (MC) or quadrature order
    std::uint64_t seed = 0;   ///< MC only
    double std_error = 0.0;   ///< MC only
};

/// log2(1 + S).
double awgn_capacity(double snr_linear);

/// Monte Carlo estimate of I(X;Y) for equiprobable inputs. Every noise draw
/// is applied to all M symbols, and the draws depend on the seed alone, so
/// calls sharing a seed use common random numbers across schemes and SNRs.
/// std_error is taken over the per-draw (symbol-averaged) summands. Result
/// does not depend on workers.
MiEstimate estimate_mi_mc(const Constellation& c, const ChannelSpec& ch, long long n_samples, std::uint64_t seed,
                          int workers = 1);

/// Same expectation by tensor-product Gauss-Hermite quadrature over the two
/// real noise dimensions. quad_order >= 8.
MiEstimate estimate_mi_ghq(const Constellation& c, const ChannelSpec& ch, int quad_order, int workers = 1);

struct EstimatorConfig {
    MiMethod method = MiMethod::gauss_hermite;
    int quad_order = 48;
    long long n_samples = 20000;
    std::uint64_t seed = 1;
    int workers = 1;

    /// Quadrature of order 48 up to M = 256, MC with 2e4 draws above.
    static EstimatorConfig defaults_for(int M, std::uint64_t seed = 1);
    long long budget() const { return method == MiMethod::gauss_hermite ? quad_order : n_samples; }
};

MiEstimate estimate_mi(const Constellation& c, const ChannelSpec& ch, const EstimatorConfig& cfg);

struct GapSearch {
    double mi_tolerance_bits = 1e-3;
    double snr_tolerance_db = 0.01;
    int max_iterations = 60;
    double initial_step_db = 1.0;
    double max_expansion_db = 40.0; ///< furthest SNR above capacity before giving up
};

struct GapResult {
    double gap_db = 0.0;
    double snr_db = 0.0;     ///< SNR where MI reaches the target rate
    double capacity_snr_db = 0.0;
    MiEstimate at_root;
    int evaluations = 0;
};

/// MI as a function of linear SNR.
using MiCurve = std::function<MiEstimate(double snr_linear)>;

/// Finds the SNR where mi(S) = rate_bits by a bracketing search started at
/// the capacity SNR 2^R - 1 (Illinois false position, falling back to
/// bisection), and returns its distance to that SNR in dB. Throws
/// InfeasibleError when rate_bits >= max_rate_bits or no bracket is found.
GapResult snr_gap_db(const MiCurve& mi, double rate_bits, std::optional<double> max_rate_bits,
                     const GapSearch& search = {});

/// Convenience form: regenerates the constellation at every trial SNR.
GapResult snr_gap_db(const std::function<Constellation(double snr_linear)>& generator, int M, double rate_bits,
                     const EstimatorConfig& cfg, const GapSearch& search = {});

double db_to_linear(double db);
double linear_to_db(double linear);

namespace detail {
/// log2 sum_k exp((|w|^2 - |y - x_k|^2) / var) with a max-subtraction guard.
/// scratch must hold n values.
double log2_sum_exp_term(const double* re, const double* im, std::size_t n, double yr, double yi, double w_norm,
                         double inv_var, double* scratch);
} // namespace detail

} // namespace gam

#endif
