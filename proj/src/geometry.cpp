#include "umot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace umot {

bool BBox::valid() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) &&
         std::isfinite(h) && w >= 0.0 && h >= 0.0;
}

bool BoxSigma::valid() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) &&
         std::isfinite(h) && x >= 0.0 && y >= 0.0 && w >= 0.0 && h >= 0.0;
}

double iou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

namespace {

// Relative error of one axis of the intersection extent.
// `near_is_a` marks that `a` supplies the intersection's near edge (the
// tilded operand).
double axis_term(double center_a, double size_a, double center_b,
                 double size_b, bool near_is_a, double extent, ErrorMode mode) {
  const double plain = near_is_a ? center_b : center_a;
  const double tilded = near_is_a ? center_a : center_b;
  const double center_term =
      mode == ErrorMode::literal ? plain - tilded : plain + tilded;
  return (center_term + 0.5 * (size_a + size_b)) / extent;
}

}  // namespace

double intersection_relative_error(const BBox& a, const BoxSigma& sa,
                                   const BBox& b, const BoxSigma& sb,
                                   ErrorMode mode) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (!(iw > 0.0) || !(ih > 0.0)) {
    throw std::invalid_argument(
        "intersection_relative_error: boxes do not overlap");
  }
  const double tx =
      axis_term(sa.x, sa.w, sb.x, sb.w, a.left() > b.left(), iw, mode);
  const double ty =
      axis_term(sa.y, sa.h, sb.y, sb.h, a.top() > b.top(), ih, mode);
  return std::max(0.0, std::abs(tx + ty));
}

UncertainIoUMatrix iou_matrix_with_errors(
    std::span<const UncertainBox> tracks,
    std::span<const UncertainBox> detections, ErrorMode mode) {
  const auto n = static_cast<Eigen::Index>(tracks.size());
  const auto m = static_cast<Eigen::Index>(detections.size());
  UncertainIoUMatrix out{RowMatrix::Zero(n, m), RowMatrix::Zero(n, m)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& t = tracks[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& d = detections[static_cast<std::size_t>(j)];
      const double v = iou(t.box, d.box);
      out.iou(i, j) = v;
      if (v > 0.0) {
        out.delta(i, j) =
            intersection_relative_error(t.box, t.sigma, d.box, d.sigma, mode);
      }
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> ambiguity_groups(
    std::span<const double> iou_row, std::span<const double> delta_row,
    double floor) {
  if (iou_row.size() != delta_row.size()) {
    throw std::invalid_argument("ambiguity_groups: row length mismatch");
  }
  struct Interval {
    double lo;
    double hi;
    std::size_t col;
  };
  std::vector<Interval> intervals;
  for (std::size_t j = 0; j < iou_row.size(); ++j) {
    const double v = iou_row[j];
    if (!(v > floor)) continue;
    const double half = v * delta_row[j];
    intervals.push_back({v - half, v + half, j});
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& p, const Interval& q) {
              return p.lo < q.lo || (p.lo == q.lo && p.col < q.col);
            });

  // Sweep: sorted by lower end, a component ends when the next interval
  // starts past the running maximum upper end.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> current;
  double reach = 0.0;
  for (const auto& iv : intervals) {
    if (!current.empty() && iv.lo > reach) {
      if (current.size() >= 2) groups.push_back(current);
      current.clear();
    }
    if (current.empty()) reach = iv.hi;
    current.push_back(iv.col);
    reach = std::max(reach, iv.hi);
  }
  if (current.size() >= 2) groups.push_back(current);

  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(),
            [](const auto& p, const auto& q) { return p.front() < q.front(); });
  return groups;
}

}  // namespace umot
