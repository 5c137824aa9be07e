#include "umot/evalkit/mot_format.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <system_error>

namespace umot::eval {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                  : what),
      line_(line) {}

BBox MotRecord::box() const {
  return corner_to_center({bb_left, bb_top, bb_width, bb_height});
}

MotRecord MotRecord::from_box(int frame, int id, const BBox& box, double conf) {
  const CornerBox c = center_to_corner(box);
  MotRecord r;
  r.frame = frame;
  r.id = id;
  r.bb_left = c.left;
  r.bb_top = c.top;
  r.bb_width = c.width;
  r.bb_height = c.height;
  r.conf = conf;
  return r;
}

BBox corner_to_center(const CornerBox& c) {
  return BBox::from_corners(c.left, c.top, c.width, c.height);
}

CornerBox center_to_corner(const BBox& b) {
  return {b.left(), b.top(), b.w, b.h};
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

namespace {

int parse_int_field(std::string_view s) {
  const double v = parse_double(s);
  const auto i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return i;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

std::vector<MotRecord> parse_mot(std::istream& in) {
  std::vector<MotRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto f = split_commas(line);
    if (f.size() < 7 || f.size() > 10) {
      throw ParseError(lineno, "expected 7 to 10 comma-separated fields, got " +
                                   std::to_string(f.size()));
    }
    MotRecord r;
    try {
      r.frame = parse_int_field(f[0]);
      r.id = parse_int_field(f[1]);
      r.bb_left = parse_double(f[2]);
      r.bb_top = parse_double(f[3]);
      r.bb_width = parse_double(f[4]);
      r.bb_height = parse_double(f[5]);
      r.conf = parse_double(f[6]);
      if (f.size() > 7) r.x = parse_double(f[7]);
      if (f.size() > 8) r.y = parse_double(f[8]);
      if (f.size() > 9) r.z = parse_double(f[9]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    }
    if (r.frame < 1) throw ParseError(lineno, "frame must be >= 1");
    if (!(r.bb_width >= 0.0) || !(r.bb_height >= 0.0)) {
      throw ParseError(lineno, "box width and height must be >= 0");
    }
    out.push_back(r);
  }
  return out;
}

std::vector<MotRecord> parse_mot_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return parse_mot(in);
}

void write_mot(std::ostream& out, std::span<const MotRecord> records) {
  for (const auto& r : records) {
    out << r.frame << ',' << r.id << ',' << format_double(r.bb_left) << ','
        << format_double(r.bb_top) << ',' << format_double(r.bb_width) << ','
        << format_double(r.bb_height) << ',' << format_double(r.conf) << ','
        << format_double(r.x) << ',' << format_double(r.y) << ','
        << format_double(r.z) << '\n';
  }
}

void write_mot_file(const std::filesystem::path& path,
                    std::span<const MotRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_mot(out, records);
}

std::vector<MotRecord> records_from_tracks(std::span<const FrameOutput> frames) {
  std::vector<MotRecord> out;
  for (const auto& f : frames) {
    for (const auto& e : f.entries) {
      out.push_back(MotRecord::from_box(f.frame, e.track_id, e.box, e.score));
    }
  }
  return out;
}

std::vector<MotRecord> records_from_scene(const sim::Scene& scene) {
  std::vector<MotRecord> out;
  for (const auto& f : scene.frames) {
    for (const auto& o : f.objects) {
      out.push_back(MotRecord::from_box(f.frame, o.id, o.box, 1.0));
    }
  }
  return out;
}

}  // namespace umot::eval
