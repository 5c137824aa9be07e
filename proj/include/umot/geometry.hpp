#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace umot {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Axis-aligned box in center format. All quantities in pixels.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double left() const { return x - 0.5 * w; }
  double right() const { return x + 0.5 * w; }
  double top() const { return y - 0.5 * h; }
  double bottom() const { return y + 0.5 * h; }
  double area() const { return w * h; }

  bool valid() const;

  static BBox from_corners(double left, double top, double width,
                           double height) {
    return {left + 0.5 * width, top + 0.5 * height, width, height};
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Per-coordinate standard deviations of a BBox.
struct BoxSigma {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool valid() const;
  static BoxSigma uniform(double s) { return {s, s, s, s}; }

  friend bool operator==(const BoxSigma&, const BoxSigma&) = default;
};

struct UncertainBox {
  BBox box;
  BoxSigma sigma;
};

// How the center-coordinate uncertainties of the two boxes combine when
// propagating into the intersection extent. `literal` subtracts the
// uncertainty of the box that supplies the intersection's left edge;
// `additive` adds it.
enum class ErrorMode { literal, additive };

double iou(const BBox& a, const BBox& b);

/// Relative error of the intersection area of two overlapping boxes,
/// used as the relative error of their IoU.
///
/// Per axis, the operand supplying the intersection's near edge (the larger
/// left/top edge; ties resolve to `b`) provides the subtracted center term.
/// The denominators are the intersection extents.
///
/// Throws std::invalid_argument when the boxes do not overlap.
double intersection_relative_error(const BBox& a, const BoxSigma& sa,
                                   const BBox& b, const BoxSigma& sb,
                                   ErrorMode mode = ErrorMode::literal);

// IoU values paired with their relative errors, indexed (track, detection).
struct UncertainIoUMatrix {
  RowMatrix iou;
  RowMatrix delta;

  Eigen::Index rows() const { return iou.rows(); }
  Eigen::Index cols() const { return iou.cols(); }
};

UncertainIoUMatrix iou_matrix_with_errors(
    std::span<const UncertainBox> tracks,
    std::span<const UncertainBox> detections,
    ErrorMode mode = ErrorMode::literal);

inline constexpr double kDefaultAmbiguityFloor = 1e-6;

/// Groups the columns of one IoU row whose uncertainty intervals
/// [iou - iou*delta, iou + iou*delta] overlap (connected components of the
/// interval-overlap graph). Columns with iou <= floor never participate and
/// singleton components are dropped. Each group is sorted ascending; groups
/// are ordered by their smallest member.
std::vector<std::vector<std::size_t>> ambiguity_groups(
    std::span<const double> iou_row, std::span<const double> delta_row,
    double floor = kDefaultAmbiguityFloor);

}  // namespace umot
