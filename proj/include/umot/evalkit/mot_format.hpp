#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "umot/geometry.hpp"
#include "umot/simworld.hpp"
#include "umot/tracker.hpp"

namespace umot::eval {

// Raised by every evalkit parser; line() is 1-based, 0 when not line-bound.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// One row of a MOT Challenge CSV file. Boxes are in corner format.
struct MotRecord {
  int frame = 1;
  int id = -1;  // -1 for raw detections
  double bb_left = 0.0;
  double bb_top = 0.0;
  double bb_width = 0.0;
  double bb_height = 0.0;
  double conf = 1.0;
  double x = -1.0;
  double y = -1.0;
  double z = -1.0;

  BBox box() const;  // center format
  static MotRecord from_box(int frame, int id, const BBox& box, double conf);

  friend bool operator==(const MotRecord&, const MotRecord&) = default;
};

struct CornerBox {
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;
  double height = 0.0;

  friend bool operator==(const CornerBox&, const CornerBox&) = default;
};

BBox corner_to_center(const CornerBox& c);
CornerBox center_to_corner(const BBox& b);

/// Parses "frame,id,bb_left,bb_top,bb_width,bb_height,conf,x,y,z" lines.
/// Lines with 7 to 9 fields take -1 for the missing world coordinates.
/// Blank lines are skipped. Throws ParseError with the offending line.
std::vector<MotRecord> parse_mot(std::istream& in);
std::vector<MotRecord> parse_mot_file(const std::filesystem::path& path);

/// Writes 10-field lines with shortest round-trip number formatting.
void write_mot(std::ostream& out, std::span<const MotRecord> records);
void write_mot_file(const std::filesystem::path& path,
                    std::span<const MotRecord> records);

std::vector<MotRecord> records_from_tracks(std::span<const FrameOutput> frames);
std::vector<MotRecord> records_from_scene(const sim::Scene& scene);

// Shortest string that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(std::string_view s);

}  // namespace umot::eval
