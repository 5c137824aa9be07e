#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "umot/uncertain_nms.hpp"

namespace umot::eval {

struct CandidateRecord {
  int frame = 1;
  DetectionCandidate candidate;
};

/// JSON lines {"frame", "cx", "cy", "w", "h", "score", "class_id"}; class_id
/// is optional and defaults to 0. Throws ParseError with the line number.
std::vector<CandidateRecord> parse_candidates(std::istream& in);
std::vector<CandidateRecord> parse_candidates_file(
    const std::filesystem::path& path);

void write_candidates(std::ostream& out, std::span<const CandidateRecord> recs);
void write_candidates_file(const std::filesystem::path& path,
                           std::span<const CandidateRecord> recs);

// Frames first_frame..last_frame inclusive; frames without candidates are
// empty. Records outside the range are ignored.
std::vector<std::vector<DetectionCandidate>> group_by_frame(
    std::span<const CandidateRecord> recs, int first_frame, int last_frame);

std::vector<CandidateRecord> flatten_frames(
    const std::vector<std::vector<DetectionCandidate>>& frames,
    int first_frame = 1);

}  // namespace umot::eval
