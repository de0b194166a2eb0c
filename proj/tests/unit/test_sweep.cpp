#include "gam/plot.hpp"
#include "gam/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace gam;

namespace {

std::string csv_of(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    write_sweep_csv(os, rows);
    return os.str();
}

CsvTable table_of(const std::string& text) {
    std::istringstream is(text);
    return read_csv(is);
}

MiSweepConfig small_sweep() {
    MiSweepConfig cfg;
    cfg.schemes = {SweepScheme::tgb_gam_snr, SweepScheme::capacity, SweepScheme::square_qam, SweepScheme::disc_gam};
    cfg.sizes = {16, 4};
    cfg.snr_db = {10.0, 0.0, 5.0};
    cfg.estimator.quad_order = 24;
    return cfg;
}

} // namespace

TEST_CASE("snr grid parsing") {
    CHECK(parse_snr_grid("0:10:5") == std::vector<double>{0.0, 5.0, 10.0});
    CHECK(parse_snr_grid("0:1:0.25").size() == 5);
    CHECK(parse_snr_grid("0:0.9:0.25").back() == doctest::Approx(0.75));
    CHECK(parse_snr_grid("3,1.5, 7") == std::vector<double>{3.0, 1.5, 7.0});
    CHECK(parse_snr_grid("12") == std::vector<double>{12.0});
    CHECK_THROWS_AS(parse_snr_grid("0:10"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("10:0:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("0:10:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("a,b"), std::invalid_argument);
}

TEST_CASE("snr-form constellation at a dB design point") {
    const auto c = make_constellation(SweepScheme::tgb_gam_snr, 4, db_to_linear(6.02), {});
    const double want[] = {0.58062, 0.85223, 1.08932, 1.32286};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(c.magnitudes()[i] - want[i]) <= 1e-4);
    CHECK_THROWS_AS(make_constellation(SweepScheme::tgb_gam, 4, 1.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_constellation(SweepScheme::capacity, 4, 1.0, {}), std::invalid_argument);
}

TEST_CASE("sweep scheme names") {
    CHECK(parse_sweep_scheme("qam") == SweepScheme::square_qam);
    CHECK(parse_sweep_scheme("tgb-gam-opt") == SweepScheme::tgb_gam_opt);
    CHECK(to_string(SweepScheme::capacity) == "capacity");
    CHECK_FALSE(parse_sweep_scheme("apsk"));
}

TEST_CASE("mi sweep rows") {
    const auto rows = run_mi_sweep(small_sweep());
    CHECK(rows.size() == 3 + 3 * 2 * 3);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::tie(rows[i - 1].scheme, rows[i - 1].M, rows[i - 1].snr_db) <
              std::tie(rows[i].scheme, rows[i].M, rows[i].snr_db));
    for (const auto& r : rows) {
        REQUIRE(r.mi_bits);
        if (r.scheme == "capacity") {
            CHECK(*r.mi_bits == awgn_capacity(db_to_linear(r.snr_db)));
            CHECK(r.M == 0);
            CHECK(r.method == "closed-form");
        } else {
            CHECK(*r.mi_bits <= awgn_capacity(db_to_linear(r.snr_db)) + 1e-9);
            CHECK(r.papr_db);
            CHECK(r.method == "gauss-hermite");
            CHECK(r.budget == 24);
        }
        CHECK(r.rho_i.has_value() == false);
    }
}

TEST_CASE("snr-form matches qam at 16 points") {
    MiSweepConfig cfg;
    cfg.schemes = {SweepScheme::square_qam, SweepScheme::tgb_gam_snr};
    cfg.sizes = {16};
    cfg.snr_db = parse_snr_grid("9.6:11.6:0.5");
    const auto rows = run_mi_sweep(cfg);
    const std::size_t n = cfg.snr_db.size();
    for (std::size_t i = 0; i < n; ++i) CHECK(*rows[n + i].mi_bits >= *rows[i].mi_bits - 0.02);
}

TEST_CASE("sweep output is independent of worker count") {
    auto cfg = small_sweep();
    cfg.schemes.push_back(SweepScheme::gb_gam);
    cfg.estimator.method = MiMethod::monte_carlo;
    cfg.estimator.n_samples = 500;
    const auto one = csv_of(run_mi_sweep(cfg));
    cfg.workers = 4;
    CHECK(csv_of(run_mi_sweep(cfg)) == one);
    CHECK(csv_of(run_mi_sweep(cfg)) == one);
    CHECK(one.substr(0, one.find('\n')) == sweep_csv_header);
}

TEST_CASE("optimized and fixed-radius tgb rows") {
    MiSweepConfig cfg;
    cfg.schemes = {SweepScheme::tgb_gam_opt, SweepScheme::tgb_gam};
    cfg.sizes = {16};
    cfg.snr_db = {10.0};
    cfg.settings.radii = ShapingParams{0.0, 1.5};
    cfg.opt.quad_order = 24;
    const auto rows = run_mi_sweep(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].scheme == "tgb-gam");
    CHECK(*rows[0].rho_o == 1.5);
    CHECK(rows[1].scheme == "tgb-gam-opt");
    CHECK(*rows[1].rho_i == 0.0);
    CHECK(*rows[1].mi_bits >= *rows[0].mi_bits - 1e-3);

    cfg.schemes = {SweepScheme::tgb_gam_opt, SweepScheme::disc_gam};
    cfg.settings.papr_cap_db = 0.0;
    const auto capped = run_mi_sweep(cfg);
    REQUIRE(capped.size() == 2);
    CHECK(capped[1].method == "infeasible");
    CHECK_FALSE(capped[1].mi_bits);
    CHECK(capped[0].mi_bits);
}

TEST_CASE("gap table") {
    GapTableConfig cfg;
    cfg.schemes = {SweepScheme::capacity, SweepScheme::square_qam, SweepScheme::tgb_gam_snr};
    cfg.sizes = {16, 4};
    cfg.estimator.quad_order = 32;
    const auto rows = run_gap_table(cfg);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].scheme == "capacity");
    CHECK(std::abs(*rows[0].gap_db) <= 0.01);
    int infeasible = 0;
    for (const auto& r : rows) {
        if (r.M == 4) {
            CHECK(r.status.rfind("infeasible", 0) == 0);
            CHECK_FALSE(r.gap_db);
            ++infeasible;
        }
        if (r.M == 16 && r.scheme == "square-qam") CHECK(std::abs(*r.gap_db - 0.85) <= 0.1);
        if (r.M == 16 && r.scheme == "tgb-gam-snr") CHECK(std::abs(*r.gap_db - 0.76) <= 0.1);
    }
    CHECK(infeasible == 2);
    std::ostringstream os;
    write_gap_csv(os, rows);
    CHECK(os.str().substr(0, os.str().find('\n')) == gap_csv_header);
}

TEST_CASE("papr sweep trends") {
    PaprSweepConfig cfg;
    cfg.sizes = {16, 256};
    cfg.snr_db = parse_snr_grid("0:40:5");
    cfg.estimator.quad_order = 16;
    const auto rows = run_papr_sweep(cfg);
    const std::size_t n = cfg.snr_db.size();
    REQUIRE(rows.size() == 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) CHECK(*rows[i].papr_db <= *rows[i - 1].papr_db);
        CHECK(*rows[n + i].papr_db > *rows[i].papr_db);
    }
    CHECK(std::abs(*rows[2 * n - 1].papr_db - 10.0 * std::log10(512.0 / 257.0)) <= 0.05);
}

TEST_CASE("csv reading") {
    const auto t = table_of("a,b\n1,2\n3,\n");
    CHECK(t.column("b") == 1);
    CHECK(t.rows.size() == 2);
    CHECK(t.rows[1][1].empty());
    CHECK_THROWS_WITH_AS(t.column("zz"), "CSV is missing column 'zz'", std::runtime_error);
    CHECK_THROWS_AS(table_of(""), std::runtime_error);
    CHECK_THROWS_AS(table_of("a,b\n1\n"), std::runtime_error);
}

TEST_CASE("plots") {
    const auto table = table_of(csv_of(run_mi_sweep(small_sweep())));
    const auto fig = mi_curves_figure(table);
    REQUIRE_FALSE(fig.series.empty());
    CHECK(fig.series.front().label.rfind("capacity", 0) == 0);
    const auto& cap = fig.series.front();
    for (const auto& s : fig.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) CHECK(s.y[i] <= awgn_capacity(db_to_linear(s.x[i])) + 1e-9);
    CHECK(cap.x.front() == 0.0);
    CHECK(cap.x.back() == 10.0);
    CHECK(mi_curves_figure(table, 4).series.size() == 4);

    const auto svg = render_svg(fig);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("capacity log2(1+S)") != std::string::npos);

    const auto c = gen_disc_gam(256);
    const auto scatter = constellation_figure(c);
    CHECK(scatter.equal_aspect);
    CHECK(20.0 * std::log10(*scatter.guide_radius / std::sqrt(c.mean_power())) ==
          doctest::Approx(papr_db(c)).epsilon(1e-12));
    CHECK(render_svg(scatter).find("<circle") != std::string::npos);

    CHECK_THROWS_WITH_AS(mi_curves_figure(table_of("scheme,M,mi_bits\nx,1,2\n")), "CSV is missing column 'snr_db'",
                         std::runtime_error);
    CHECK_THROWS_AS(papr_curves_figure(table_of(std::string(sweep_csv_header) + "\n")), std::runtime_error);
}
