#pragma once

#include <Eigen/Core>

#include "umot/geometry.hpp"
#include "umot/uncertain_nms.hpp"

namespace umot {

using StateVector = Eigen::Matrix<double, 8, 1>;
using StateMatrix = Eigen::Matrix<double, 8, 8>;
using MeasurementVector = Eigen::Matrix<double, 4, 1>;
using MeasurementMatrix = Eigen::Matrix<double, 4, 4>;
using ObservationMatrix = Eigen::Matrix<double, 4, 8>;

// Constant-velocity state (x, y, w, h, vx, vy, vw, vh); pixels and
// pixels per frame.
struct KalmanState {
  StateVector mean = StateVector::Zero();
  StateMatrix cov = StateMatrix::Zero();

  BBox box() const { return {mean(0), mean(1), mean(2), mean(3)}; }
};

// Process-noise weights are standard deviations per unit of box height.
struct KalmanConfig {
  double w_pos = 1.0 / 20.0;
  double w_vel = 1.0 / 160.0;
  double dt = 1.0;

  StateMatrix transition() const;
  static ObservationMatrix observation();
  StateMatrix process_noise(double height) const;
  void validate() const;
};

KalmanState initiate(const BBox& box, const KalmanConfig& cfg);
KalmanState initiate(const UncertainDetection& det, const KalmanConfig& cfg);

KalmanState predict(const KalmanState& state, const KalmanConfig& cfg);

struct Projection {
  MeasurementVector mean;
  MeasurementMatrix cov;
};

// H * mean and H * P * H^T + diag(r^2).
Projection project(const KalmanState& state, const BoxSigma& r,
                   const KalmanConfig& cfg);

/// Kalman correction with observation covariance diag(r.x^2, r.y^2, r.w^2,
/// r.h^2). Uses the Joseph form and symmetrizes the result. Throws
/// std::invalid_argument if any component of `r` is not strictly positive.
KalmanState update(const KalmanState& state, const BBox& z, const BoxSigma& r,
                   const KalmanConfig& cfg);

double asymmetry(const StateMatrix& m);

}  // namespace umot
