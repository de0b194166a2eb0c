#include "gam/constellation.hpp"
#include "gam/constellation_io.hpp"
#include "gam/mi.hpp"

#include <doctest.h>

#include <filesystem>
#include <stdexcept>
#include <string>

using namespace gam;

namespace {

std::string message_of(const std::string& json) {
    try {
        constellation_from_json(json);
    } catch (const std::runtime_error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("json round trip is exact") {
    for (const auto& c : {gen_tgb_gam_snr(64, 25.0, 2.0), gen_gb_gam(16), gen_square_qam(64), gen_tgb_gam(32, {0.3, 1.9})}) {
        const auto back = constellation_from_json(to_json(c, {{"sampling_grid", "m/M"}}));
        REQUIRE(back.size() == c.size());
        CHECK(back.scheme() == c.scheme());
        CHECK(back.mean_power() == c.mean_power());
        for (std::size_t i = 0; i < c.size(); ++i) CHECK(back[i] == c[i]);
        CHECK(papr_db(back) == papr_db(c));
        const ChannelSpec ch = ChannelSpec(db_to_linear(10.0), c.mean_power());
        CHECK(estimate_mi_ghq(back, ch, 24).mi_bits == estimate_mi_ghq(c, ch, 24).mi_bits);
    }
}

TEST_CASE("json file round trip") {
    const auto path = std::filesystem::temp_directory_path() / "gam_io_test.json";
    const auto c = gen_disc_gam(16);
    write_constellation(path, c, {{"generator", "disc-gam"}});
    const auto back = read_constellation(path);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(back[i] == c[i]);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_constellation(path), std::runtime_error);
}

TEST_CASE("json schema errors name the field") {
    CHECK(message_of("{").find("constellation JSON") != std::string::npos);
    CHECK(message_of(R"({"M":1,"mean_power":1,"points":[]})").find("'scheme'") != std::string::npos);
    CHECK(message_of(R"({"scheme":"psk","M":1,"mean_power":1,"points":[]})").find("psk") != std::string::npos);
    CHECK(message_of(R"({"scheme":"qam","M":2,"mean_power":1,"points":[{"re":1,"im":0}]})").find("'points'") !=
          std::string::npos);
    CHECK(message_of(R"({"scheme":"qam","M":1,"mean_power":1,"points":[{"re":"x","im":0}]})").find("'re'") !=
          std::string::npos);
}
