#include "gam/constellation_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gam {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

} // namespace

std::string to_json(const Constellation& c, const ConstellationMeta& meta) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"scheme\": " << quoted(std::string(to_string(c.scheme()))) << ",\n";
    out << "  \"M\": " << c.size() << ",\n";
    out << "  \"mean_power\": " << fmt17(c.mean_power()) << ",\n";
    if (!meta.empty()) {
        out << "  \"meta\": {";
        for (std::size_t i = 0; i < meta.size(); ++i)
            out << (i ? ", " : "") << quoted(meta[i].first) << ": " << quoted(meta[i].second);
        out << "},\n";
    }
    out << "  \"points\": [\n";
    const std::string p = fmt17(c.prob_per_point());
    for (std::size_t i = 0; i < c.size(); ++i) {
        out << "    {\"re\": " << fmt17(c[i].real()) << ", \"im\": " << fmt17(c[i].imag()) << ", \"p\": " << p
            << "}" << (i + 1 < c.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

Constellation constellation_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("constellation JSON: ") + e.what());
    }
    auto field = [&](const char* name) -> const nlohmann::json& {
        if (!doc.is_object() || !doc.contains(name))
            throw std::runtime_error(std::string("constellation JSON: missing field '") + name + "'");
        return doc.at(name);
    };

    const auto& tag = field("scheme");
    if (!tag.is_string()) throw std::runtime_error("constellation JSON: field 'scheme' must be a string");
    const auto scheme = parse_scheme(tag.get<std::string>());
    if (!scheme) throw std::runtime_error("constellation JSON: unknown scheme '" + tag.get<std::string>() + "'");

    const auto& m = field("M");
    const auto& power = field("mean_power");
    const auto& pts = field("points");
    if (!m.is_number_integer()) throw std::runtime_error("constellation JSON: field 'M' must be an integer");
    if (!power.is_number()) throw std::runtime_error("constellation JSON: field 'mean_power' must be a number");
    if (!pts.is_array()) throw std::runtime_error("constellation JSON: field 'points' must be an array");
    if (pts.size() != m.get<std::size_t>())
        throw std::runtime_error("constellation JSON: field 'points' has " + std::to_string(pts.size()) +
                                 " entries but M = " + std::to_string(m.get<long long>()));

    std::vector<cplx> points;
    points.reserve(pts.size());
    for (const auto& p : pts) {
        if (!p.is_object() || !p.contains("re") || !p.contains("im") || !p["re"].is_number() ||
            !p["im"].is_number())
            throw std::runtime_error("constellation JSON: field 'points' entries need numeric 're' and 'im'");
        points.emplace_back(p["re"].get<double>(), p["im"].get<double>());
    }
    return Constellation(*scheme, std::move(points), power.get<double>());
}

void write_constellation(const std::filesystem::path& path, const Constellation& c, const ConstellationMeta& meta) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << to_json(c, meta);
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Constellation read_constellation(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return constellation_from_json(buf.str());
}

} // namespace gam
