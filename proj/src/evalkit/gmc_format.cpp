#include "umot/evalkit/gmc_format.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "umot/evalkit/mot_format.hpp"

namespace umot::eval {

GmcMap parse_gmc(std::istream& in) {
  GmcMap out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty() || tok.front().starts_with('#')) continue;
    if (tok.size() != 10 && tok.size() != 7) {
      throw ParseError(lineno, "expected a frame index and 9 or 6 values, got " +
                                   std::to_string(tok.size() - 1) + " values");
    }
    try {
      const double fv = parse_double(tok[0]);
      const auto frame = static_cast<int>(fv);
      if (static_cast<double>(frame) != fv || frame < 1) {
        throw std::invalid_argument("frame must be a positive integer");
      }
      Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
      const std::size_t n = tok.size() - 1;
      for (std::size_t k = 0; k < n; ++k) {
        m(static_cast<Eigen::Index>(k / 3), static_cast<Eigen::Index>(k % 3)) =
            parse_double(tok[k + 1]);
      }
      if (out.count(frame)) throw std::invalid_argument("duplicate frame");
      out.emplace(frame, Homography::from_matrix(m));
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return out;
}

GmcMap parse_gmc_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return parse_gmc(in);
}

void write_gmc(std::ostream& out, const GmcMap& gmc) {
  for (const auto& [frame, hom] : gmc) {
    const Eigen::Matrix3d m = hom.matrix();
    out << frame << '\t';
    for (int k = 0; k < 9; ++k) {
      if (k > 0) out << ' ';
      out << format_double(m(k / 3, k % 3));
    }
    out << '\n';
  }
}

void write_gmc_file(const std::filesystem::path& path, const GmcMap& gmc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_gmc(out, gmc);
}

Homography homography_for(const GmcMap& gmc, int frame) {
  const auto it = gmc.find(frame);
  return it == gmc.end() ? Homography::identity() : it->second;
}

std::vector<std::optional<Homography>> homography_stream(const GmcMap& gmc,
                                                         int first_frame,
                                                         int n_frames) {
  std::vector<std::optional<Homography>> out;
  out.reserve(static_cast<std::size_t>(std::max(n_frames, 0)));
  for (int k = 0; k < n_frames; ++k) {
    out.emplace_back(homography_for(gmc, first_frame + k));
  }
  return out;
}

}  // namespace umot::eval
