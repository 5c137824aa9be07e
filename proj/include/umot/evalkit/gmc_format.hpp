#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "umot/cmc.hpp"

namespace umot::eval {

using GmcMap = std::map<int, Homography>;

/// Lines "frame<TAB>h00 h01 h02 h10 h11 h12 h20 h21 h22", or six values for
/// an affine transform. The homography for frame f maps frame f-1 pixels to
/// frame f pixels. Throws ParseError with the line number on a wrong field
/// count, bad numbers or a singular matrix.
GmcMap parse_gmc(std::istream& in);
GmcMap parse_gmc_file(const std::filesystem::path& path);

/// Writes nine values per frame with shortest round-trip formatting.
void write_gmc(std::ostream& out, const GmcMap& gmc);
void write_gmc_file(const std::filesystem::path& path, const GmcMap& gmc);

// Missing frames map to the identity.
Homography homography_for(const GmcMap& gmc, int frame);

// One entry per frame in [first_frame, first_frame + n_frames).
std::vector<std::optional<Homography>> homography_stream(const GmcMap& gmc,
                                                         int first_frame,
                                                         int n_frames);

}  // namespace umot::eval
