#include "umot/cmc.hpp"

#include <cmath>

#include <Eigen/LU>

namespace umot {

Homography Homography::affine(const Eigen::Matrix2d& h1,
                              const Eigen::Vector2d& t) {
  Homography hom;
  hom.H1 = h1;
  hom.h2 = t;
  return hom;
}

Homography Homography::from_matrix(const Eigen::Matrix3d& m) {
  if (!m.allFinite() || std::abs(m.determinant()) < 1e-300) {
    throw std::invalid_argument("homography: singular or non-finite matrix");
  }
  Eigen::Matrix3d n = m;
  if (std::abs(n(2, 2)) > 1e-9) n /= n(2, 2);
  Homography hom;
  hom.H1 = n.topLeftCorner<2, 2>();
  hom.h2 = n.topRightCorner<2, 1>();
  hom.h3 = n.bottomLeftCorner<1, 2>().transpose();
  hom.h4 = n(2, 2);
  return hom;
}

Eigen::Matrix3d Homography::matrix() const {
  Eigen::Matrix3d m;
  m.topLeftCorner<2, 2>() = H1;
  m.topRightCorner<2, 1>() = h2;
  m.bottomLeftCorner<1, 2>() = h3.transpose();
  m(2, 2) = h4;
  return m;
}

Homography Homography::inverse() const {
  return from_matrix(matrix().inverse());
}

namespace {

double denominator(const Homography& hom, const Eigen::Vector2d& p) {
  const double d = hom.h3.dot(p) + hom.h4;
  if (!(std::abs(d) >= kDegenerateDenominator)) {
    throw DegenerateHomography("homography denominator vanishes");
  }
  return d;
}

// Block-diagonal 1_4 (x) m over the sectors (x,y), (w,h), (vx,vy), (vw,vh).
StateMatrix kron_identity4(const Eigen::Matrix2d& m) {
  StateMatrix out = StateMatrix::Zero();
  for (int k = 0; k < 4; ++k) out.block<2, 2>(2 * k, 2 * k) = m;
  return out;
}

}  // namespace

Eigen::Vector2d warp_point(const Homography& hom, const Eigen::Vector2d& p) {
  const double d = denominator(hom, p);
  return (hom.H1 * p + hom.h2) / d;
}

Eigen::Matrix2d jacobian(const Homography& hom, const Eigen::Vector2d& p) {
  const double d = denominator(hom, p);
  const Eigen::Vector2d num = hom.H1 * p + hom.h2;
  return (hom.H1 * d - num * hom.h3.transpose()) / (d * d);
}

KalmanState apply_affine(const KalmanState& state, const Homography& hom) {
  const StateMatrix t = kron_identity4(hom.H1);
  KalmanState out;
  out.mean = t * state.mean;
  out.mean.head<2>() += hom.h2;
  out.cov = t * state.cov * t.transpose();
  return out;
}

KalmanState apply_homographic(const KalmanState& state,
                              const Homography& hom) {
  const Eigen::Vector2d center = state.mean.head<2>();
  const Eigen::Vector2d half = 0.5 * state.mean.segment<2>(2);
  const Eigen::Vector2d c = warp_point(hom, center);
  const Eigen::Vector2d tl = warp_point(hom, center - half);
  const Eigen::Vector2d br = warp_point(hom, center + half);
  const Eigen::Matrix2d g = jacobian(hom, center);

  KalmanState out;
  out.mean.head<2>() = c;
  out.mean.segment<2>(2) = (br - tl).cwiseAbs();
  out.mean.segment<2>(4) = g * state.mean.segment<2>(4);
  out.mean.segment<2>(6) = g * state.mean.segment<2>(6);
  const StateMatrix t = kron_identity4(g);
  out.cov = t * state.cov * t.transpose();
  return out;
}

}  // namespace umot
