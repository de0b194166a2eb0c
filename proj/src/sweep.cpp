#include "gam/sweep.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace gam {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

double parse_double(std::string_view s) {
    const std::string str(s);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(str, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != str.size()) throw std::invalid_argument("not a number: '" + str + "'");
    return v;
}

SweepRow capacity_row(double snr_db) {
    SweepRow row;
    row.scheme = std::string(to_string(SweepScheme::capacity));
    row.snr_db = snr_db;
    row.mi_bits = awgn_capacity(db_to_linear(snr_db));
    row.std_error = 0.0;
    row.method = "closed-form";
    return row;
}

void sort_rows(std::vector<SweepRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.scheme, a.M, a.snr_db) < std::tie(b.scheme, b.M, b.snr_db);
    });
}

// Evaluates one non-capacity point; infeasible optimizer points become
// marker rows instead of aborting the sweep.
SweepRow evaluate_point(SweepScheme scheme, int M, double snr_db, const SchemeSettings& settings,
                        const EstimatorOverrides& est, const OptConfig& opt_cfg) {
    SweepRow row;
    row.scheme = std::string(to_string(scheme));
    row.M = M;
    row.snr_db = snr_db;
    const double snr = db_to_linear(snr_db);
    const EstimatorConfig cfg = resolve_estimator(M, est);
    row.budget = cfg.budget();
    row.seed = cfg.method == MiMethod::monte_carlo ? cfg.seed : 0;
    try {
        OptResult opt;
        const Constellation c = make_constellation(scheme, M, snr, settings, opt_cfg, &opt);
        const MiEstimate mi = estimate_mi(c, ChannelSpec::for_constellation(c, snr), cfg);
        row.mi_bits = mi.mi_bits;
        row.std_error = mi.std_error;
        row.papr_db = papr_db(c);
        row.method = std::string(to_string(mi.method));
        if (scheme == SweepScheme::tgb_gam) {
            row.rho_i = settings.radii->rho_i;
            row.rho_o = settings.radii->rho_o;
        } else if (scheme == SweepScheme::tgb_gam_opt) {
            row.rho_i = opt.params.rho_i;
            row.rho_o = opt.params.rho_o;
        }
    } catch (const InfeasibleError&) {
        row.method = "infeasible";
    }
    return row;
}

} // namespace

std::string_view to_string(SweepScheme s) {
    switch (s) {
    case SweepScheme::capacity: return "capacity";
    case SweepScheme::square_qam: return "square-qam";
    case SweepScheme::gb_gam: return "gb-gam";
    case SweepScheme::disc_gam: return "disc-gam";
    case SweepScheme::tgb_gam: return "tgb-gam";
    case SweepScheme::tgb_gam_snr: return "tgb-gam-snr";
    case SweepScheme::tgb_gam_opt: return "tgb-gam-opt";
    }
    return "unknown";
}

std::optional<SweepScheme> parse_sweep_scheme(std::string_view s) {
    if (s == "capacity") return SweepScheme::capacity;
    if (s == "square-qam" || s == "qam") return SweepScheme::square_qam;
    if (s == "gb-gam") return SweepScheme::gb_gam;
    if (s == "disc-gam") return SweepScheme::disc_gam;
    if (s == "tgb-gam") return SweepScheme::tgb_gam;
    if (s == "tgb-gam-snr") return SweepScheme::tgb_gam_snr;
    if (s == "tgb-gam-opt") return SweepScheme::tgb_gam_opt;
    return std::nullopt;
}

std::optional<PaprVariant> parse_papr_variant(std::string_view s) {
    if (s == "optimized") return PaprVariant::optimized;
    if (s == "snr-form") return PaprVariant::snr_form;
    return std::nullopt;
}

Constellation make_constellation(SweepScheme scheme, int M, double snr_linear, const SchemeSettings& settings,
                                 const OptConfig& opt_cfg, OptResult* opt) {
    switch (scheme) {
    case SweepScheme::square_qam: return gen_square_qam(M);
    case SweepScheme::gb_gam: return gen_gb_gam(M);
    case SweepScheme::disc_gam: return gen_disc_gam(M);
    case SweepScheme::tgb_gam:
        if (!settings.radii) throw std::invalid_argument("tgb-gam needs rho_i and rho_o");
        return gen_tgb_gam(M, *settings.radii, 1.0, {settings.grid, false});
    case SweepScheme::tgb_gam_snr: return gen_tgb_gam_snr(M, snr_linear);
    case SweepScheme::tgb_gam_opt: {
        OptConfig cfg = opt_cfg;
        cfg.tgb.grid = settings.grid;
        const OptResult r = optimize_tgb(M, ChannelSpec(snr_linear), settings.papr_cap_db, settings.fix_rho_i_zero, cfg);
        if (opt) *opt = r;
        return gen_tgb_gam(M, r.params, 1.0, cfg.tgb);
    }
    case SweepScheme::capacity: break;
    }
    throw std::invalid_argument("the capacity pseudo-scheme has no constellation");
}

EstimatorConfig resolve_estimator(int M, const EstimatorOverrides& o) {
    EstimatorConfig cfg = EstimatorConfig::defaults_for(M, o.seed);
    if (o.method) cfg.method = *o.method;
    if (o.quad_order) cfg.quad_order = *o.quad_order;
    if (o.n_samples) cfg.n_samples = *o.n_samples;
    return cfg;
}

std::vector<SweepRow> run_mi_sweep(const MiSweepConfig& cfg) {
    if (cfg.schemes.empty() || cfg.snr_db.empty()) throw std::invalid_argument("mi-sweep needs schemes and an SNR grid");
    std::vector<SweepRow> rows;
    struct Job {
        SweepScheme scheme;
        int M;
        double snr_db;
    };
    std::vector<Job> jobs;
    for (auto s : cfg.schemes) {
        if (s == SweepScheme::capacity) {
            for (double snr : cfg.snr_db) rows.push_back(capacity_row(snr));
            continue;
        }
        if (cfg.sizes.empty()) throw std::invalid_argument("mi-sweep needs at least one constellation size");
        for (int M : cfg.sizes)
            for (double snr : cfg.snr_db) jobs.push_back({s, M, snr});
    }

    std::vector<SweepRow> results(jobs.size());
    detail::parallel_for(static_cast<long long>(jobs.size()), cfg.workers, [&](long long lo, long long hi) {
        for (long long i = lo; i < hi; ++i)
            results[i] = evaluate_point(jobs[i].scheme, jobs[i].M, jobs[i].snr_db, cfg.settings, cfg.estimator, cfg.opt);
    });
    rows.insert(rows.end(), results.begin(), results.end());
    sort_rows(rows);
    return rows;
}

std::vector<GapRow> run_gap_table(const GapTableConfig& cfg) {
    if (cfg.schemes.empty()) throw std::invalid_argument("gap-table needs at least one scheme");
    struct Job {
        SweepScheme scheme;
        int M;
    };
    std::vector<Job> jobs;
    for (auto s : cfg.schemes) {
        if (s == SweepScheme::capacity) {
            jobs.push_back({s, 0});
            continue;
        }
        if (cfg.sizes.empty()) throw std::invalid_argument("gap-table needs at least one constellation size");
        for (int M : cfg.sizes) jobs.push_back({s, M});
    }

    std::vector<GapRow> rows(jobs.size());
    detail::parallel_for(static_cast<long long>(jobs.size()), cfg.workers, [&](long long lo, long long hi) {
        for (long long i = lo; i < hi; ++i) {
            const auto [scheme, M] = jobs[i];
            GapRow& row = rows[i];
            row.scheme = std::string(to_string(scheme));
            row.M = M;
            row.rate = cfg.rate;
            try {
                GapResult g;
                if (scheme == SweepScheme::capacity) {
                    const MiCurve cap = [](double snr) {
                        MiEstimate e;
                        e.mi_bits = awgn_capacity(snr);
                        return e;
                    };
                    g = snr_gap_db(cap, cfg.rate, std::nullopt, cfg.search);
                    row.method = "closed-form";
                } else {
                    const EstimatorConfig est = resolve_estimator(M, cfg.estimator);
                    const auto generator = [&, scheme = scheme, M = M](double snr) {
                        return make_constellation(scheme, M, snr, cfg.settings, cfg.opt);
                    };
                    g = snr_gap_db(generator, M, cfg.rate, est, cfg.search);
                    row.method = std::string(to_string(est.method));
                    row.budget = est.budget();
                    row.seed = est.method == MiMethod::monte_carlo ? est.seed : 0;
                }
                row.gap_db = g.gap_db;
                row.snr_db = g.snr_db;
                row.mi_bits = g.at_root.mi_bits;
                row.std_error = g.at_root.std_error;
            } catch (const InfeasibleError& e) {
                row.status = std::string("infeasible: ") + e.what();
            } catch (const std::domain_error& e) {
                row.status = std::string("error: ") + e.what();
            }
        }
    });
    return rows;
}

std::vector<SweepRow> run_papr_sweep(const PaprSweepConfig& cfg) {
    if (cfg.sizes.empty() || cfg.snr_db.empty()) throw std::invalid_argument("papr-sweep needs sizes and an SNR grid");
    struct Job {
        int M;
        double snr_db;
    };
    std::vector<Job> jobs;
    for (int M : cfg.sizes)
        for (double snr : cfg.snr_db) jobs.push_back({M, snr});

    std::vector<SweepRow> rows(jobs.size());
    detail::parallel_for(static_cast<long long>(jobs.size()), cfg.workers, [&](long long lo, long long hi) {
        for (long long i = lo; i < hi; ++i) {
            const auto [M, snr_db] = jobs[i];
            if (cfg.variant == PaprVariant::snr_form) {
                rows[i] = evaluate_point(SweepScheme::tgb_gam_snr, M, snr_db, cfg.settings, cfg.estimator, cfg.opt);
                continue;
            }
            // The optimizer already reports quadrature MI at its optimum.
            SweepRow& row = rows[i];
            row.scheme = std::string(to_string(SweepScheme::tgb_gam_opt));
            row.M = M;
            row.snr_db = snr_db;
            try {
                OptResult opt;
                const Constellation c =
                    make_constellation(SweepScheme::tgb_gam_opt, M, db_to_linear(snr_db), cfg.settings, cfg.opt, &opt);
                row.mi_bits = opt.mi_bits;
                row.std_error = 0.0;
                row.papr_db = papr_db(c);
                row.rho_i = opt.params.rho_i;
                row.rho_o = opt.params.rho_o;
                row.method = std::string(to_string(MiMethod::gauss_hermite));
                row.budget = cfg.opt.quad_order;
            } catch (const InfeasibleError&) {
                row.method = "infeasible";
            }
        }
    });
    sort_rows(rows);
    return rows;
}

std::vector<double> parse_snr_grid(std::string_view text) {
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        std::vector<double> parts;
        std::size_t start = 0;
        while (true) {
            const auto pos = text.find(':', start);
            parts.push_back(parse_double(text.substr(start, pos - start)));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        if (parts.size() != 3) throw std::invalid_argument("SNR grid must be start:stop:step");
        const double a = parts[0], b = parts[1], step = parts[2];
        if (!(step > 0.0) || b < a) throw std::invalid_argument("SNR grid needs stop >= start and step > 0");
        const long long n = static_cast<long long>(std::floor((b - a) / step + 1e-9));
        for (long long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = text.find(',', start);
        out.push_back(parse_double(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << sweep_csv_header << '\n';
    for (const auto& r : rows) {
        out << r.scheme << ',' << r.M << ',' << num(r.snr_db) << ',' << opt_num(r.mi_bits) << ','
            << opt_num(r.std_error) << ',' << opt_num(r.papr_db) << ',' << opt_num(r.rho_i) << ','
            << opt_num(r.rho_o) << ',' << r.method << ',' << r.budget << ',' << r.seed << '\n';
    }
}

void write_gap_csv(std::ostream& out, const std::vector<GapRow>& rows) {
    out << gap_csv_header << '\n';
    for (const auto& r : rows) {
        std::string status = r.status;
        std::replace(status.begin(), status.end(), ',', ';');
        out << r.scheme << ',' << r.M << ',' << num(r.rate) << ',' << opt_num(r.gap_db) << ',' << opt_num(r.snr_db)
            << ',' << opt_num(r.mi_bits) << ',' << opt_num(r.std_error) << ',' << r.method << ',' << r.budget << ','
            << r.seed << ',' << status << '\n';
    }
}

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("CSV is missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        return cells;
    };
    CsvTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (t.header.empty()) {
            t.header = split(line);
            continue;
        }
        auto cells = split(line);
        if (cells.size() != t.header.size())
            throw std::runtime_error("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                     std::to_string(t.header.size()));
        t.rows.push_back(std::move(cells));
    }
    if (t.header.empty()) throw std::runtime_error("CSV is empty");
    return t;
}

} // namespace gam
