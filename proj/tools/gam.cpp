// gam: constellation generation, MI/PAPR sweeps, SNR-gap tables and plots.
#include "gam/constellation.hpp"
#include "gam/constellation_io.hpp"
#include "gam/mi.hpp"
#include "gam/plot.hpp"
#include "gam/shaping_opt.hpp"
#include "gam/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int exit_usage = 2;
constexpr int exit_runtime = 3;
constexpr const char* default_snr_grid = "0:35:1";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flags shared by the sweep-style subcommands.
struct CommonOptions {
    std::vector<std::string> schemes;
    std::vector<int> sizes;
    std::optional<double> snr_db;
    std::string snr_grid;
    std::optional<double> rho_i, rho_o, papr_cap_db;
    double rate = 3.0;
    std::uint64_t seed = 1;
    std::optional<long long> samples;
    std::optional<int> quad_order;
    std::string method = "auto";
    std::string grid = "upper";
    bool free_rho_i = false;
    int workers = 1;
    std::string out;
};

void add_estimator_flags(CLI::App* app, CommonOptions& o) {
    app->add_option("--method", o.method, "MI estimator: auto, ghq or mc")
        ->check(CLI::IsMember({"auto", "ghq", "gauss-hermite", "mc", "monte-carlo"}));
    app->add_option("--samples", o.samples, "Monte Carlo noise draws")->check(CLI::PositiveNumber);
    app->add_option("--quad-order", o.quad_order, "Gauss-Hermite order per dimension (>= 8)")->check(CLI::Range(8, 400));
    app->add_option("--seed", o.seed, "Monte Carlo seed");
    app->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1, 1024));
}

void add_shaping_flags(CLI::App* app, CommonOptions& o) {
    app->add_option("--rho-i", o.rho_i, "inner truncation radius (tgb-gam)");
    app->add_option("--rho-o", o.rho_o, "outer truncation radius (tgb-gam)");
    app->add_option("--papr-cap-db", o.papr_cap_db, "PAPR cap for the optimizer [dB]");
    app->add_flag("--free-rho-i", o.free_rho_i, "optimize rho_i too instead of fixing it at 0");
    app->add_option("--grid", o.grid, "quantile sampling grid: upper (m/M) or midpoint ((m-1/2)/M)")
        ->check(CLI::IsMember({"upper", "midpoint"}));
}

std::vector<double> snr_values(const CommonOptions& o) {
    if (!o.snr_grid.empty() && o.snr_db) throw UsageError("give either --snr-db or --snr-grid, not both");
    if (o.snr_db) return {*o.snr_db};
    try {
        return gam::parse_snr_grid(o.snr_grid.empty() ? default_snr_grid : o.snr_grid);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--snr-grid: ") + e.what());
    }
}

gam::EstimatorOverrides estimator(const CommonOptions& o) {
    gam::EstimatorOverrides e;
    if (o.method != "auto") e.method = gam::parse_mi_method(o.method);
    e.quad_order = o.quad_order;
    e.n_samples = o.samples;
    e.seed = o.seed;
    return e;
}

gam::SchemeSettings settings(const CommonOptions& o, bool needs_radii) {
    gam::SchemeSettings s;
    if (o.rho_i || o.rho_o) {
        if (!needs_radii) throw UsageError("--rho-i/--rho-o only apply to the tgb-gam scheme");
        if (!o.rho_i || !o.rho_o) throw UsageError("tgb-gam needs both --rho-i and --rho-o");
        s.radii = gam::ShapingParams{*o.rho_i, *o.rho_o};
        if (!s.radii->valid()) throw UsageError("need 0 <= rho-i < rho-o");
    } else if (needs_radii) {
        throw UsageError("tgb-gam needs --rho-i and --rho-o");
    }
    s.papr_cap_db = o.papr_cap_db;
    s.fix_rho_i_zero = !o.free_rho_i;
    s.grid = *gam::parse_sampling_grid(o.grid);
    return s;
}

std::vector<gam::SweepScheme> schemes(const CommonOptions& o) {
    if (o.schemes.empty()) throw UsageError("--scheme is required");
    std::vector<gam::SweepScheme> out;
    for (const auto& s : o.schemes) {
        const auto parsed = gam::parse_sweep_scheme(s);
        if (!parsed) throw UsageError("unknown scheme '" + s + "'");
        out.push_back(*parsed);
    }
    return out;
}

bool contains(const std::vector<gam::SweepScheme>& v, gam::SweepScheme s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

gam::OptConfig opt_config(const CommonOptions& o) {
    gam::OptConfig cfg;
    if (o.quad_order) cfg.quad_order = *o.quad_order;
    return cfg;
}

template <typename F>
void write_output(const std::string& path, F&& writer) {
    if (path == "-") {
        writer(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    writer(out);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

// Run settings next to a CSV, so the noise convention and defaults travel with the data.
void write_meta(const std::string& csv_path, nlohmann::json meta) {
    if (csv_path == "-") return;
    meta["noise_convention"] = "sigma^2 = P/S total complex variance, sigma^2/2 per real dimension";
    write_output(csv_path + ".meta.json", [&](std::ostream& os) { os << meta.dump(2) << '\n'; });
}

nlohmann::json common_meta(const CommonOptions& o, const std::vector<double>& snr) {
    nlohmann::json m;
    m["snr_db"] = snr;
    m["method"] = o.method;
    m["quad_order"] = o.quad_order ? *o.quad_order : 48;
    m["samples"] = o.samples ? *o.samples : 20000;
    m["seed"] = o.seed;
    m["sampling_grid"] = o.grid;
    m["fix_rho_i_zero"] = !o.free_rho_i;
    if (o.papr_cap_db) m["papr_cap_db"] = *o.papr_cap_db;
    return m;
}

int cmd_generate(const CommonOptions& o) {
    if (o.schemes.size() != 1) throw UsageError("generate takes exactly one --scheme");
    if (o.sizes.size() != 1) throw UsageError("generate takes exactly one --m");
    if (o.out.empty()) throw UsageError("--out is required");
    const auto scheme = schemes(o).front();
    if (scheme == gam::SweepScheme::capacity) throw UsageError("capacity has no constellation");
    const int M = o.sizes.front();
    const bool needs_snr = scheme == gam::SweepScheme::tgb_gam_snr || scheme == gam::SweepScheme::tgb_gam_opt;
    if (needs_snr && !o.snr_db) throw UsageError(std::string(gam::to_string(scheme)) + " needs --snr-db");
    if (!needs_snr && o.snr_db) throw UsageError("--snr-db does not apply to " + std::string(gam::to_string(scheme)));
    if (!o.snr_grid.empty()) throw UsageError("generate takes --snr-db, not --snr-grid");
    const auto s = settings(o, scheme == gam::SweepScheme::tgb_gam);

    gam::ConstellationMeta meta;
    gam::OptResult opt;
    const double snr = o.snr_db ? gam::db_to_linear(*o.snr_db) : 1.0;
    const gam::Constellation c = gam::make_constellation(scheme, M, snr, s, opt_config(o), &opt);
    meta.emplace_back("generator", std::string(gam::to_string(scheme)));
    if (o.snr_db) meta.emplace_back("snr_db", std::to_string(*o.snr_db));
    if (scheme == gam::SweepScheme::tgb_gam || scheme == gam::SweepScheme::tgb_gam_opt) {
        const auto params = scheme == gam::SweepScheme::tgb_gam ? *s.radii : opt.params;
        meta.emplace_back("sampling_grid", std::string(gam::to_string(s.grid)));
        meta.emplace_back("rho_i", std::to_string(params.rho_i));
        meta.emplace_back("rho_o", std::to_string(params.rho_o));
    }
    if (scheme == gam::SweepScheme::tgb_gam_opt) {
        meta.emplace_back("fix_rho_i_zero", s.fix_rho_i_zero ? "true" : "false");
        meta.emplace_back("mi_bits", std::to_string(opt.mi_bits));
    }
    // With JSON on stdout the summary moves to stderr so the stream stays parseable.
    std::FILE* summary = stdout;
    if (o.out == "-") {
        std::cout << gam::to_json(c, meta) << std::flush;
        summary = stderr;
    } else {
        gam::write_constellation(o.out, c, meta);
    }
    std::fprintf(summary, "PAPR_dB=%.6f\nH=%.6f\n", gam::papr_db(c), std::log2(static_cast<double>(M)));
    return 0;
}

int cmd_mi_sweep(const CommonOptions& o) {
    if (o.out.empty()) throw UsageError("--out is required");
    gam::MiSweepConfig cfg;
    cfg.schemes = schemes(o);
    cfg.sizes = o.sizes;
    cfg.snr_db = snr_values(o);
    cfg.settings = settings(o, contains(cfg.schemes, gam::SweepScheme::tgb_gam));
    cfg.estimator = estimator(o);
    cfg.opt = opt_config(o);
    cfg.workers = o.workers;
    if (cfg.sizes.empty() && !(cfg.schemes.size() == 1 && cfg.schemes[0] == gam::SweepScheme::capacity))
        throw UsageError("--m is required");
    const auto rows = gam::run_mi_sweep(cfg);
    write_output(o.out, [&](std::ostream& os) { gam::write_sweep_csv(os, rows); });
    write_meta(o.out, common_meta(o, cfg.snr_db));
    return 0;
}

int cmd_gap_table(const CommonOptions& o) {
    if (o.out.empty()) throw UsageError("--out is required");
    gam::GapTableConfig cfg;
    cfg.schemes = schemes(o);
    cfg.sizes = o.sizes;
    cfg.rate = o.rate;
    cfg.settings = settings(o, contains(cfg.schemes, gam::SweepScheme::tgb_gam));
    cfg.estimator = estimator(o);
    cfg.opt = opt_config(o);
    cfg.workers = o.workers;
    if (!(o.rate > 0.0)) throw UsageError("--rate must be positive");
    const auto rows = gam::run_gap_table(cfg);
    write_output(o.out, [&](std::ostream& os) { gam::write_gap_csv(os, rows); });
    auto meta = common_meta(o, {});
    meta.erase("snr_db");
    meta["rate"] = o.rate;
    meta["mi_tolerance_bits"] = cfg.search.mi_tolerance_bits;
    meta["snr_tolerance_db"] = cfg.search.snr_tolerance_db;
    write_meta(o.out, meta);
    bool failed = false;
    for (const auto& r : rows) failed |= r.status != "ok";
    return failed ? exit_runtime : 0;
}

int cmd_papr_sweep(const CommonOptions& o, const std::string& variant) {
    if (o.out.empty()) throw UsageError("--out is required");
    if (o.sizes.empty()) throw UsageError("--m is required");
    gam::PaprSweepConfig cfg;
    cfg.variant = *gam::parse_papr_variant(variant);
    cfg.sizes = o.sizes;
    cfg.snr_db = snr_values(o);
    cfg.settings = settings(o, false);
    cfg.estimator = estimator(o);
    cfg.opt = opt_config(o);
    cfg.workers = o.workers;
    const auto rows = gam::run_papr_sweep(cfg);
    write_output(o.out, [&](std::ostream& os) { gam::write_sweep_csv(os, rows); });
    auto meta = common_meta(o, cfg.snr_db);
    meta["variant"] = variant;
    write_meta(o.out, meta);
    return 0;
}

int cmd_plot(const std::string& in, const std::string& kind, const std::string& out, std::optional<int> only_M) {
    gam::Figure fig;
    if (kind == "constellation-scatter") {
        fig = gam::constellation_figure(gam::read_constellation(in));
    } else {
        std::ifstream f(in);
        if (!f) throw std::runtime_error("cannot open '" + in + "'");
        const auto table = gam::read_csv(f);
        fig = kind == "mi-curves" ? gam::mi_curves_figure(table, only_M) : gam::papr_curves_figure(table, only_M);
    }
    write_output(out, [&](std::ostream& os) { os << gam::render_svg(fig); });
    return 0;
}

// Plain keys in a config file belong to whichever subcommand was chosen.
class SubcommandConfig : public CLI::ConfigBase {
  public:
    explicit SubcommandConfig(const CLI::App& app) : app_(app) {}

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigBase::from_config(input);
        const auto subs = app_.get_subcommands();
        if (subs.empty()) return items;
        for (auto& item : items)
            if (item.parents.empty() || (item.parents.size() == 1 && item.parents[0] == "default"))
                item.parents = {subs.front()->get_name()};
        return items;
    }

  private:
    const CLI::App& app_;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Golden angle modulation constellation design and evaluation"};
    app.require_subcommand(1);
    app.fallthrough();
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "key = value file using the flag names; flags win");
    app.config_formatter(std::make_shared<SubcommandConfig>(app));

    CommonOptions o;
    auto* gen = app.add_subcommand("generate", "write a constellation as JSON");
    gen->add_option("--scheme", o.schemes, "gb-gam, disc-gam, tgb-gam, tgb-gam-snr, tgb-gam-opt or qam")->required();
    gen->add_option("--m", o.sizes, "constellation size")->required();
    gen->add_option("--snr-db", o.snr_db, "design SNR [dB]");
    gen->add_option("--snr-grid", o.snr_grid)->group("");
    gen->add_option("--quad-order", o.quad_order, "quadrature order for tgb-gam-opt")->check(CLI::Range(8, 400));
    gen->add_option("--out", o.out, "output JSON path ('-' for stdout)")->required();
    add_shaping_flags(gen, o);

    auto* sweep = app.add_subcommand("mi-sweep", "MI vs SNR per scheme and size");
    sweep->add_option("--scheme", o.schemes, "comma-separated schemes, including 'capacity'")->delimiter(',')->required();
    sweep->add_option("--m", o.sizes, "comma-separated constellation sizes")->delimiter(',');
    sweep->add_option("--snr-db", o.snr_db, "single SNR [dB]");
    sweep->add_option("--snr-grid", o.snr_grid, "start:stop:step [dB] or a comma list (default 0:35:1)");
    sweep->add_option("--out", o.out, "output CSV path ('-' for stdout)")->required();
    add_shaping_flags(sweep, o);
    add_estimator_flags(sweep, o);

    auto* gap = app.add_subcommand("gap-table", "SNR gap to capacity at a target rate");
    gap->add_option("--scheme", o.schemes, "comma-separated schemes")->delimiter(',')->required();
    gap->add_option("--m", o.sizes, "comma-separated constellation sizes")->delimiter(',');
    gap->add_option("--rate", o.rate, "target rate [b/s/Hz]");
    gap->add_option("--out", o.out, "output CSV path ('-' for stdout)")->required();
    add_shaping_flags(gap, o);
    add_estimator_flags(gap, o);

    std::string variant = "snr-form";
    auto* papr = app.add_subcommand("papr-sweep", "PAPR vs SNR of TGB-GAM");
    papr->add_option("--variant", variant, "optimized or snr-form")->check(CLI::IsMember({"optimized", "snr-form"}));
    papr->add_option("--m", o.sizes, "comma-separated constellation sizes")->delimiter(',');
    papr->add_option("--snr-db", o.snr_db, "single SNR [dB]");
    papr->add_option("--snr-grid", o.snr_grid, "start:stop:step [dB] or a comma list (default 0:35:1)");
    papr->add_option("--out", o.out, "output CSV path ('-' for stdout)")->required();
    papr->add_option("--papr-cap-db", o.papr_cap_db, "PAPR cap for the optimized variant [dB]");
    papr->add_flag("--free-rho-i", o.free_rho_i, "optimize rho_i too");
    add_estimator_flags(papr, o);

    std::string plot_in, plot_kind = "mi-curves", plot_out;
    std::optional<int> plot_m;
    auto* plot = app.add_subcommand("plot", "render a sweep CSV or constellation JSON as SVG");
    plot->add_option("--in", plot_in, "CSV (curves) or JSON (constellation-scatter)")->required();
    plot->add_option("--kind", plot_kind, "mi-curves, papr-curves or constellation-scatter")
        ->check(CLI::IsMember({"mi-curves", "papr-curves", "constellation-scatter"}));
    plot->add_option("--m", plot_m, "only plot this constellation size");
    plot->add_option("--out", plot_out, "output SVG path ('-' for stdout)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*gen) return cmd_generate(o);
        if (*sweep) return cmd_mi_sweep(o);
        if (*gap) return cmd_gap_table(o);
        if (*papr) return cmd_papr_sweep(o, variant);
        if (*plot) return cmd_plot(plot_in, plot_kind, plot_out, plot_m);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::logic_error& e) {
        // domain_error / invalid_argument from the library: bad parameter values
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const gam::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return exit_runtime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_usage;
}
