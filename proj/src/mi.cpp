#include "gam/mi.hpp"

#include "gam/gauss_hermite.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace gam {

namespace {

constexpr long long mc_chunk = 256;

// Quadrature node pairs with a combined weight below this are skipped; their
// total contribution is far below double precision of the result.
constexpr double ghq_weight_floor = 1e-20;

struct SoA {
    std::vector<double> re, im;
    explicit SoA(const Constellation& c) : re(c.size()), im(c.size()) {
        for (std::size_t k = 0; k < c.size(); ++k) {
            re[k] = c[k].real();
            im[k] = c[k].imag();
        }
    }
};

double clamp_mi(double mi, std::size_t M) { return std::clamp(mi, 0.0, std::log2(static_cast<double>(M))); }

} // namespace

ChannelSpec::ChannelSpec(double snr_linear, double mean_power) : snr_(snr_linear), mean_power_(mean_power) {
    if (!(std::isfinite(snr_linear) && snr_linear > 0.0))
        throw std::domain_error("channel SNR must be positive and finite");
    if (!(std::isfinite(mean_power) && mean_power > 0.0))
        throw std::domain_error("channel mean power must be positive and finite");
}

std::string_view to_string(MiMethod m) { return m == MiMethod::monte_carlo ? "monte-carlo" : "gauss-hermite"; }

std::optional<MiMethod> parse_mi_method(std::string_view s) {
    if (s == "monte-carlo" || s == "mc") return MiMethod::monte_carlo;
    if (s == "gauss-hermite" || s == "ghq") return MiMethod::gauss_hermite;
    return std::nullopt;
}

double awgn_capacity(double snr_linear) {
    if (!(snr_linear >= 0.0)) throw std::domain_error("capacity needs S >= 0");
    return std::log2(1.0 + snr_linear);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

MiEstimate estimate_mi_mc(const Constellation& c, const ChannelSpec& ch, long long n_samples, std::uint64_t seed,
                          int workers) {
    if (n_samples < 1) throw std::domain_error("Monte Carlo MI needs n_samples >= 1");
    const std::size_t M = c.size();
    const SoA x(c);
    const double var = ch.noise_variance();
    const double inv_var = 1.0 / var;
    const double sd = std::sqrt(var / 2.0);

    const long long chunks = (n_samples + mc_chunk - 1) / mc_chunk;
    std::vector<double> sums(chunks), sums_sq(chunks);

    detail::parallel_for(chunks, workers, [&](long long lo, long long hi) {
        std::vector<double> scratch(M);
        for (long long ch_idx = lo; ch_idx < hi; ++ch_idx) {
            // Substream depends only on (seed, chunk index).
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(ch_idx), static_cast<std::uint32_t>(ch_idx >> 32)};
            std::mt19937_64 rng(seq);
            std::normal_distribution<double> normal;
            const long long first = ch_idx * mc_chunk;
            const long long last = std::min(n_samples, first + mc_chunk);
            double s = 0.0, s2 = 0.0;
            for (long long n = first; n < last; ++n) {
                const double wr = sd * normal(rng);
                const double wi = sd * normal(rng);
                const double w_norm = wr * wr + wi * wi;
                double draw = 0.0;
                for (std::size_t m = 0; m < M; ++m)
                    draw += detail::log2_sum_exp_term(x.re.data(), x.im.data(), M, x.re[m] + wr, x.im[m] + wi, w_norm,
                                                      inv_var, scratch.data());
                draw /= static_cast<double>(M);
                s += draw;
                s2 += draw * draw;
            }
            sums[ch_idx] = s;
            sums_sq[ch_idx] = s2;
        }
    });

    double s = 0.0, s2 = 0.0;
    for (long long i = 0; i < chunks; ++i) {
        s += sums[i];
        s2 += sums_sq[i];
    }
    const double N = static_cast<double>(n_samples);
    const double mean = s / N;
    double std_error = 0.0;
    if (n_samples > 1) {
        const double var_draw = std::max(0.0, (s2 - N * mean * mean) / (N - 1.0));
        std_error = std::sqrt(var_draw / N);
    }
    MiEstimate est;
    est.mi_bits = clamp_mi(std::log2(static_cast<double>(M)) - mean, M);
    est.method = MiMethod::monte_carlo;
    est.budget = n_samples;
    est.seed = seed;
    est.std_error = std_error;
    return est;
}

MiEstimate estimate_mi_ghq(const Constellation& c, const ChannelSpec& ch, int quad_order, int workers) {
    if (quad_order < 8)
        throw std::domain_error("Gauss-Hermite MI needs quad_order >= 8, got " + std::to_string(quad_order));
    const std::size_t M = c.size();
    const SoA x(c);
    const double var = ch.noise_variance();
    const double inv_var = 1.0 / var;
    // Per real dimension the noise density is exp(-u^2 / var) / sqrt(pi var),
    // so u = sqrt(var) t maps it onto the Hermite weight.
    const double scale = std::sqrt(var);

    const auto rule = gauss_hermite(quad_order);
    struct Node {
        double wr, wi, weight;
    };
    std::vector<Node> grid;
    for (int i = 0; i < quad_order; ++i)
        for (int j = 0; j < quad_order; ++j) {
            const double weight = rule.weights[i] * rule.weights[j] / std::numbers::pi;
            if (weight < ghq_weight_floor) continue;
            grid.push_back({scale * rule.nodes[i], scale * rule.nodes[j], weight});
        }

    std::vector<double> per_symbol(M);
    detail::parallel_for(static_cast<long long>(M), workers, [&](long long lo, long long hi) {
        std::vector<double> scratch(M);
        for (long long m = lo; m < hi; ++m) {
            double acc = 0.0;
            for (const auto& node : grid) {
                const double w_norm = node.wr * node.wr + node.wi * node.wi;
                acc += node.weight * detail::log2_sum_exp_term(x.re.data(), x.im.data(), M, x.re[m] + node.wr,
                                                               x.im[m] + node.wi, w_norm, inv_var, scratch.data());
            }
            per_symbol[m] = acc;
        }
    });

    double total = 0.0;
    for (double v : per_symbol) total += v;
    MiEstimate est;
    est.mi_bits = clamp_mi(std::log2(static_cast<double>(M)) - total / static_cast<double>(M), M);
    est.method = MiMethod::gauss_hermite;
    est.budget = quad_order;
    return est;
}

EstimatorConfig EstimatorConfig::defaults_for(int M, std::uint64_t seed) {
    EstimatorConfig cfg;
    cfg.method = M <= 256 ? MiMethod::gauss_hermite : MiMethod::monte_carlo;
    cfg.seed = seed;
    return cfg;
}

MiEstimate estimate_mi(const Constellation& c, const ChannelSpec& ch, const EstimatorConfig& cfg) {
    if (cfg.method == MiMethod::gauss_hermite) return estimate_mi_ghq(c, ch, cfg.quad_order, cfg.workers);
    return estimate_mi_mc(c, ch, cfg.n_samples, cfg.seed, cfg.workers);
}

GapResult snr_gap_db(const MiCurve& mi, double rate_bits, std::optional<double> max_rate_bits,
                     const GapSearch& search) {
    if (!(std::isfinite(rate_bits) && rate_bits > 0.0))
        throw std::domain_error("target rate must be positive and finite");
    if (max_rate_bits && rate_bits >= *max_rate_bits)
        throw InfeasibleError("target rate " + std::to_string(rate_bits) + " b/s/Hz is not below the entropy " +
                              std::to_string(*max_rate_bits) + " bits of the constellation");

    GapResult res;
    res.capacity_snr_db = linear_to_db(std::exp2(rate_bits) - 1.0);

    auto eval = [&](double snr_db) {
        ++res.evaluations;
        return mi(db_to_linear(snr_db));
    };
    auto finish = [&](double snr_db, const MiEstimate& est) {
        res.snr_db = snr_db;
        res.gap_db = snr_db - res.capacity_snr_db;
        res.at_root = est;
        return res;
    };

    // MI never exceeds capacity, so the capacity SNR is a lower bracket end.
    double lo = res.capacity_snr_db;
    MiEstimate est_lo = eval(lo);
    double f_lo = est_lo.mi_bits - rate_bits;
    if (f_lo >= -search.mi_tolerance_bits) return finish(lo, est_lo);

    double step = search.initial_step_db;
    double hi = lo + step;
    MiEstimate est_hi = eval(hi);
    double f_hi = est_hi.mi_bits - rate_bits;
    while (f_hi < 0.0) {
        if (std::abs(f_hi) <= search.mi_tolerance_bits) return finish(hi, est_hi);
        lo = hi;
        f_lo = f_hi;
        step *= 2.0;
        hi = lo + step;
        if (hi - res.capacity_snr_db > search.max_expansion_db)
            throw InfeasibleError("could not bracket rate " + std::to_string(rate_bits) + " within " +
                                  std::to_string(search.max_expansion_db) + " dB of capacity");
        est_hi = eval(hi);
        f_hi = est_hi.mi_bits - rate_bits;
    }
    if (f_hi <= search.mi_tolerance_bits) return finish(hi, est_hi);

    // Illinois variant of false position on f(snr_db) = MI - R, f(lo) < 0 < f(hi).
    int side = 0;
    for (int it = 0; it < search.max_iterations; ++it) {
        if (hi - lo <= search.snr_tolerance_db) break;
        double x = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        const double margin = 0.01 * (hi - lo);
        if (!(x > lo + margin && x < hi - margin)) x = 0.5 * (lo + hi);
        const MiEstimate est = eval(x);
        const double fx = est.mi_bits - rate_bits;
        if (std::abs(fx) <= search.mi_tolerance_bits) return finish(x, est);
        if (fx < 0.0) {
            lo = x;
            f_lo = fx;
            if (side == -1) f_hi *= 0.5;
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            est_hi = est;
            if (side == 1) f_lo *= 0.5;
            side = 1;
        }
    }
    return finish(0.5 * (lo + hi), est_hi);
}

GapResult snr_gap_db(const std::function<Constellation(double)>& generator, int M, double rate_bits,
                     const EstimatorConfig& cfg, const GapSearch& search) {
    const MiCurve curve = [&](double snr) {
        const Constellation c = generator(snr);
        return estimate_mi(c, ChannelSpec::for_constellation(c, snr), cfg);
    };
    return snr_gap_db(curve, rate_bits, std::log2(static_cast<double>(M)), search);
}

} // namespace gam
