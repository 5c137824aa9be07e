#pragma once

#include <stdexcept>

#include <Eigen/Core>

#include "umot/kalman.hpp"

namespace umot {

// Frame-to-frame homography partitioned as
//   [ H1   h2 ]
//   [ h3^T h4 ]
// mapping pixel coordinates of the previous frame into the current one.
struct Homography {
  Eigen::Matrix2d H1 = Eigen::Matrix2d::Identity();
  Eigen::Vector2d h2 = Eigen::Vector2d::Zero();
  Eigen::Vector2d h3 = Eigen::Vector2d::Zero();
  double h4 = 1.0;

  static Homography identity() { return {}; }
  static Homography affine(const Eigen::Matrix2d& h1, const Eigen::Vector2d& t);
  // Scales to h4 = 1 when |h4| > 1e-9. Throws std::invalid_argument on a
  // singular matrix.
  static Homography from_matrix(const Eigen::Matrix3d& m);

  Eigen::Matrix3d matrix() const;
  Homography inverse() const;
  bool is_affine() const { return h3.isZero(0.0) && h4 == 1.0; }
};

// Raised when h3^T p + h4 vanishes at a point to be warped.
class DegenerateHomography : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kDegenerateDenominator = 1e-12;

// g(p) = (H1 p + h2) / (h3^T p + h4)
Eigen::Vector2d warp_point(const Homography& hom, const Eigen::Vector2d& p);

// dg/dp = [H1 d - (H1 p + h2) h3^T] / d^2 with d = h3^T p + h4.
Eigen::Matrix2d jacobian(const Homography& hom, const Eigen::Vector2d& p);

// (1_4 (x) H1) applied to mean and covariance, h2 added to (x, y).
KalmanState apply_affine(const KalmanState& state, const Homography& hom);

/// Exact warp of the box: center through g, width and height from the warped
/// top-left / bottom-right corners. Velocities of both 2D sectors and the
/// covariance are transformed with the Jacobian at the center, extended as
/// 1_4 (x) G. Throws DegenerateHomography if any of the three warped pixels
/// is degenerate.
KalmanState apply_homographic(const KalmanState& state, const Homography& hom);

}  // namespace umot
