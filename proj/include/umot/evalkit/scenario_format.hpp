#pragma once

#include <filesystem>
#include <iosfwd>

#include "umot/simworld.hpp"

namespace umot::eval {

/// JSON scenario description. Every field is optional and defaults to the
/// ScenarioConfig default:
///
///   {"image_width": 1920, "image_height": 1080, "fps": 30, "duration": 100,
///    "seed": 0,
///    "camera": {"model": "static" | "affine_drift" | "projective_drift",
///               "H1": [[a, b], [c, d]], "h2": [tx, ty], "h3_rate": [u, v]},
///    "noise": {"sigma": [sx, sy, sw, sh], "candidates_per_object": 10,
///              "miss_probability": 0, "clutter_rate": 0,
///              "score_band": [0.6, 0.95], "clutter_score_band": [0.1, 0.5],
///              "clutter_size": [16, 128], "heavy_tailed": false},
///    "objects": [{"box": [cx, cy, w, h], "velocity": [vx, vy],
///                 "oscillation": {"amplitude": A, "omega": w, "phase": p},
///                 "class_id": 0, "sigma": [sx, sy, sw, sh],
///                 "accel_sigma": 0, "hidden": [[first, last], ...],
///                 "first_frame": 1, "last_frame": 0}]}
///
/// Throws ParseError on malformed input or an invalid scenario.
sim::ScenarioConfig parse_scenario(std::istream& in);
sim::ScenarioConfig parse_scenario_file(const std::filesystem::path& path);

void write_scenario(std::ostream& out, const sim::ScenarioConfig& cfg);

}  // namespace umot::eval
