#include "umot/evalkit/candidates_format.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "umot/evalkit/mot_format.hpp"

namespace umot::eval {

using nlohmann::json;

std::vector<CandidateRecord> parse_candidates(std::istream& in) {
  std::vector<CandidateRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      CandidateRecord r;
      r.frame = j.at("frame").get<int>();
      r.candidate.box = {j.at("cx").get<double>(), j.at("cy").get<double>(),
                         j.at("w").get<double>(), j.at("h").get<double>()};
      r.candidate.score = j.at("score").get<double>();
      r.candidate.class_id = j.value("class_id", 0);
      if (r.frame < 1) throw std::invalid_argument("frame must be >= 1");
      if (!r.candidate.box.valid()) throw std::invalid_argument("invalid box");
      out.push_back(r);
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return out;
}

std::vector<CandidateRecord> parse_candidates_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return parse_candidates(in);
}

void write_candidates(std::ostream& out, std::span<const CandidateRecord> recs) {
  for (const auto& r : recs) {
    json j;
    j["frame"] = r.frame;
    j["cx"] = r.candidate.box.x;
    j["cy"] = r.candidate.box.y;
    j["w"] = r.candidate.box.w;
    j["h"] = r.candidate.box.h;
    j["score"] = r.candidate.score;
    j["class_id"] = r.candidate.class_id;
    out << j.dump() << '\n';
  }
}

void write_candidates_file(const std::filesystem::path& path,
                           std::span<const CandidateRecord> recs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_candidates(out, recs);
}

std::vector<std::vector<DetectionCandidate>> group_by_frame(
    std::span<const CandidateRecord> recs, int first_frame, int last_frame) {
  std::vector<std::vector<DetectionCandidate>> out(
      static_cast<std::size_t>(std::max(0, last_frame - first_frame + 1)));
  for (const auto& r : recs) {
    if (r.frame < first_frame || r.frame > last_frame) continue;
    out[static_cast<std::size_t>(r.frame - first_frame)].push_back(r.candidate);
  }
  return out;
}

std::vector<CandidateRecord> flatten_frames(
    const std::vector<std::vector<DetectionCandidate>>& frames,
    int first_frame) {
  std::vector<CandidateRecord> out;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    for (const auto& c : frames[k]) {
      out.push_back({first_frame + static_cast<int>(k), c});
    }
  }
  return out;
}

}  // namespace umot::eval
