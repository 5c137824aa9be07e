#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "umot/tracker.hpp"

namespace umot::eval {

/// Flat "key = value" configuration mirroring TrackerConfig. Keys use the
/// member path, e.g. "nms.iou_thresh", "cascade.match_thresholds" (comma
/// list), "cascade.binning" ("score:0.6;pseudo_depth:300,600"), "cmc_mode"
/// (off|affine|homographic). '#' starts a comment.
///
/// Unknown keys and malformed values raise ParseError with the line number.
/// The resulting config is validated.
TrackerConfig parse_config(std::istream& in, TrackerConfig base = {});
TrackerConfig parse_config_file(const std::filesystem::path& path,
                                TrackerConfig base = {});

// Sets one key; throws std::invalid_argument on unknown keys or bad values.
void set_config_value(TrackerConfig& cfg, std::string_view key,
                      std::string_view value);

void write_config(std::ostream& out, const TrackerConfig& cfg);

std::vector<std::string> config_keys();

CmcMode parse_cmc_mode(std::string_view s);
DisambiguatorKind parse_disambiguator(std::string_view s);
bool parse_bool(std::string_view s);
std::string to_string(CmcMode m);
std::string to_string(DisambiguatorKind k);

}  // namespace umot::eval
