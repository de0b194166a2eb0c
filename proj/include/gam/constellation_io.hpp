#ifndef GAM_CONSTELLATION_IO_HPP
#define GAM_CONSTELLATION_IO_HPP

#include "gam/constellation.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace gam {

/// Free-form provenance attached to an exported constellation
/// (sampling grid, radii, SNR, ...). Values are written as JSON strings.
using ConstellationMeta = std::vector<std::pair<std::string, std::string>>;

/// {scheme, M, mean_power, points: [{re, im, p}], meta: {...}} with re/im
/// printed to 17 significant digits.
std::string to_json(const Constellation& c, const ConstellationMeta& meta = {});

/// Parses the format written by to_json. Throws std::runtime_error naming
/// the offending field on schema mismatch.
Constellation constellation_from_json(const std::string& text);

void write_constellation(const std::filesystem::path& path, const Constellation& c,
                         const ConstellationMeta& meta = {});
Constellation read_constellation(const std::filesystem::path& path);

} // namespace gam

#endif
