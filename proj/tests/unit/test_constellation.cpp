#include "gam/constellation.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace gam;

namespace {

double angle_diff(double a, double b) { return std::remainder(a - b, 2.0 * std::numbers::pi); }

// Shapes are compared after normalizing the first n points to unit rms.
std::vector<double> shape(std::vector<double> r, std::size_t n) {
    r.resize(n);
    double s = 0.0;
    for (double v : r) s += v * v;
    s = std::sqrt(s / static_cast<double>(n));
    for (double& v : r) v /= s;
    return r;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
    return worst;
}

std::vector<Constellation> all_generators(int M, double P) {
    std::vector<Constellation> out{gen_gb_gam(M, P), gen_gb_gam(M, P, true), gen_disc_gam(M, P),
                                   gen_tgb_gam(M, {0.0, 1.5}, P), gen_tgb_gam(M, {0.4, 2.0}, P),
                                   gen_tgb_gam(M, {0.0, 30.0}, P), gen_tgb_gam_snr(M, 10.0, P)};
    const int side = static_cast<int>(std::lround(std::sqrt(M)));
    if (side * side == M && (side & (side - 1)) == 0) out.push_back(gen_square_qam(M, P));
    return out;
}

} // namespace

TEST_CASE("golden phase") {
    CHECK(golden_fraction == doctest::Approx(0.3819660112501051).epsilon(1e-15));
    CHECK(golden_phase(1) == doctest::Approx(2.399963229728653).epsilon(1e-14));
    CHECK(golden_phase(1000000) >= 0.0);
    CHECK(golden_phase(1000000) < 2.0 * std::numbers::pi);
    CHECK_THROWS_AS(golden_phase(0), std::domain_error);
    CHECK_THROWS_AS(golden_phase(-3), std::domain_error);
}

TEST_CASE("gb-gam magnitudes") {
    const auto r = gen_gb_gam(4).magnitudes();
    // mpmath evaluation of the bell law at unit power
    const double want[] = {0.0, 0.6972297762871362, 1.0822616194892665, 1.5305490603175906};
    for (int i = 0; i < 4; ++i) CHECK(r[i] == doctest::Approx(want[i]).epsilon(1e-12));
    CHECK(r[0] == 0.0);
    CHECK_THROWS_AS(gen_gb_gam(1), std::domain_error);
    CHECK_THROWS_AS(gen_gb_gam(0), std::domain_error);
    CHECK_THROWS_AS(gen_gb_gam(8, 0.0), std::domain_error);
}

TEST_CASE("disc-gam magnitudes and papr") {
    const auto r = gen_disc_gam(4).magnitudes();
    const double want[] = {0.6324555320336759, 0.8944271909999159, 1.0954451150103321, 1.2649110640673518};
    for (int i = 0; i < 4; ++i) CHECK(r[i] == doctest::Approx(want[i]).epsilon(1e-13));
    CHECK(papr_db(gen_disc_gam(4)) == doctest::Approx(2.041199826559248).epsilon(1e-12));
    CHECK(gen_disc_gam(1).magnitudes()[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(papr_db(gen_disc_gam(1)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(gen_disc_gam(0), std::domain_error);
    for (int M : {2, 16, 64, 256, 1024, 4096})
        CHECK(papr_db(gen_disc_gam(M)) == doctest::Approx(10.0 * std::log10(2.0 * M / (M + 1.0))).epsilon(1e-12));
    CHECK(papr_db(gen_disc_gam(1 << 20)) == doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-5));
}

TEST_CASE("truncated gaussian quantile") {
    CHECK(trunc_gauss_quantile(1.0, {0.0, 3.0}) == 3.0);
    CHECK(trunc_gauss_quantile(1.0, {0.7, 2.2}) == 2.2);
    // oracle: bisection of the cdf in mpmath
    CHECK(trunc_gauss_quantile(0.5, {0.0, 3.0}) == doctest::Approx(0.8324804972912110).epsilon(1e-12));
    CHECK(trunc_gauss_quantile(1.0 - std::exp(-1.0), {0.0, 30.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(trunc_gauss_quantile(0.0, {0.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(trunc_gauss_quantile(1.5, {0.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(trunc_gauss_quantile(0.5, {2.0, 1.0}), std::domain_error);

    for (ShapingParams p : {ShapingParams{0.0, 3.0}, ShapingParams{0.5, 1.0}, ShapingParams{1.0, 4.0},
                            ShapingParams{0.0, 0.05}, ShapingParams{0.0, 30.0}}) {
        for (int k = 1; k <= 1000; ++k) {
            const double t = k / 1000.0;
            const double rho = trunc_gauss_quantile(t, p);
            CHECK(rho >= p.rho_i);
            CHECK(rho <= p.rho_o);
            if (t < 1.0 - 1e-6 || p.rho_o < 10.0) CHECK(std::abs(trunc_gauss_cdf(rho, p) - t) <= 1e-10);
        }
    }
}

TEST_CASE("tgb-gam magnitudes") {
    const auto r = gen_tgb_gam(2, {0.0, 1.0}).magnitudes();
    CHECK(r[0] == doctest::Approx(0.7420272047218768).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(1.2039084796830022).epsilon(1e-12));
    CHECK_THROWS_AS(gen_tgb_gam(8, {2.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(gen_tgb_gam(8, {1.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(gen_tgb_gam(8, {-0.1, 1.0}), std::domain_error);

    TgbOptions ring;
    ring.allow_degenerate_ring = true;
    for (double m : gen_tgb_gam(16, {1.0, 1.0}, 2.0, ring).magnitudes()) CHECK(m == doctest::Approx(std::sqrt(2.0)));

    TgbOptions mid;
    mid.grid = SamplingGrid::midpoint;
    const auto c = gen_tgb_gam(64, {0.0, 2.0}, 1.0, mid);
    CHECK(c.measured_power() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.peak_magnitude() < gen_tgb_gam(64, {0.0, 2.0}).peak_magnitude());
}

TEST_CASE("tgb-gam snr form") {
    const auto r = gen_tgb_gam_snr(4, 4.0).magnitudes();
    const double want[] = {0.5806229049458471, 0.8522340353217158, 1.0893139888421406, 1.3228640236261378};
    for (int i = 0; i < 4; ++i) CHECK(r[i] == doctest::Approx(want[i]).epsilon(1e-12));
    CHECK_THROWS_AS(gen_tgb_gam_snr(4, 0.0), std::domain_error);
    CHECK_THROWS_AS(gen_tgb_gam_snr(4, -1.0), std::domain_error);
    try {
        gen_tgb_gam_snr(4, 0.0);
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("ln(1 - M/(S + M))") != std::string::npos);
    }
}

TEST_CASE("square qam") {
    const auto q4 = gen_square_qam(4);
    for (const auto& p : q4.points()) {
        CHECK(std::abs(p.real()) == doctest::Approx(std::sqrt(0.5)));
        CHECK(std::abs(p.imag()) == doctest::Approx(std::sqrt(0.5)));
    }
    CHECK(papr_db(q4) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(papr_db(gen_square_qam(16)) == doctest::Approx(2.552725051033061).epsilon(1e-12));
    for (int bad : {0, 1, 2, 8, 32, 100}) CHECK_THROWS_AS(gen_square_qam(bad), std::domain_error);
}

TEST_CASE("constellation invariants") {
    for (int M : {2, 4, 16, 64, 256, 1024}) {
        for (double P : {1.0, 0.3, 17.0}) {
            for (const auto& c : all_generators(M, P)) {
                CAPTURE(to_string(c.scheme()));
                CAPTURE(M);
                REQUIRE(c.size() == static_cast<std::size_t>(M));
                CHECK(std::abs(c.measured_power() - P) / P <= 1e-12);
                const auto r = c.magnitudes();
                if (c.scheme() == Scheme::square_qam) continue;
                for (int m = 1; m < M; ++m) CHECK(r[m - 1] <= r[m]);
                for (int m = 1; m <= M; ++m)
                    if (r[m - 1] > 0.0) CHECK(std::abs(angle_diff(std::arg(c[m - 1]), golden_phase(m))) <= 1e-12);
            }
        }
    }
}

TEST_CASE("papr identity on unit-power gam") {
    for (int M : {4, 16, 256, 1024})
        for (const auto& c : all_generators(M, 1.0)) {
            if (!is_gam(c.scheme())) continue;
            CHECK(std::abs(papr_db(c) - 20.0 * std::log10(c.magnitudes().back())) <= 1e-12);
        }
}

TEST_CASE("scale equivariance") {
    for (int M : {16, 256}) {
        const auto a = all_generators(M, 2.5), b = all_generators(M, 0.7);
        for (std::size_t s = 0; s < a.size(); ++s) {
            const auto scaled = a[s].rescaled(0.7);
            for (int m = 0; m < M; ++m) CHECK(std::abs(scaled[m] - b[s][m]) <= 1e-12);
        }
    }
}

TEST_CASE("limit equivalences") {
    for (int M : {16, 64, 256}) {
        CAPTURE(M);
        CHECK(max_rel_diff(gen_tgb_gam_snr(M, 1e6).magnitudes(), gen_disc_gam(M).magnitudes()) <= 1e-3);
        const auto gb = shape(gen_gb_gam(M, 1.0, true).magnitudes(), M - 1);
        CHECK(max_rel_diff(shape(gen_tgb_gam_snr(M, 1e-6).magnitudes(), M - 1), gb) <= 1e-3);
        CHECK(max_rel_diff(shape(gen_tgb_gam(M, {0.0, 30.0}).magnitudes(), M - 1), gb) <= 1e-3);
        CHECK(std::isfinite(gen_tgb_gam(M, {0.0, 30.0}).peak_magnitude()));
    }
}

TEST_CASE("constellation validation") {
    CHECK_THROWS_AS(Constellation(Scheme::square_qam, {}, 1.0), std::domain_error);
    CHECK_THROWS_AS(Constellation(Scheme::square_qam, {{1.0, 0.0}}, 0.0), std::domain_error);
    CHECK_THROWS_AS(Constellation(Scheme::square_qam, {{NAN, 0.0}}, 1.0), std::domain_error);
    CHECK(parse_scheme("qam") == Scheme::square_qam);
    CHECK(parse_scheme("tgb-gam-snr") == Scheme::tgb_gam_snr);
    CHECK_FALSE(parse_scheme("psk"));
    CHECK(to_string(SamplingGrid::midpoint) == "(m-1/2)/M");
    CHECK(parse_sampling_grid("midpoint") == SamplingGrid::midpoint);
}
