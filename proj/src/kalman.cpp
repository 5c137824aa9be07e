#include "umot/kalman.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace umot {

StateMatrix KalmanConfig::transition() const {
  StateMatrix f = StateMatrix::Identity();
  for (int i = 0; i < 4; ++i) f(i, 4 + i) = dt;
  return f;
}

ObservationMatrix KalmanConfig::observation() {
  ObservationMatrix hm = ObservationMatrix::Zero();
  for (int i = 0; i < 4; ++i) hm(i, i) = 1.0;
  return hm;
}

StateMatrix KalmanConfig::process_noise(double height) const {
  const double h = std::abs(height);
  const double sp = w_pos * h;
  const double sv = w_vel * h;
  StateMatrix q = StateMatrix::Zero();
  for (int i = 0; i < 4; ++i) {
    q(i, i) = sp * sp;
    q(4 + i, 4 + i) = sv * sv;
  }
  return q;
}

void KalmanConfig::validate() const {
  if (!(w_pos > 0.0) || !(w_vel > 0.0)) {
    throw std::invalid_argument("kalman: noise weights must be positive");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("kalman: dt must be positive");
}

KalmanState initiate(const BBox& box, const KalmanConfig& cfg) {
  KalmanState s;
  s.mean << box.x, box.y, box.w, box.h, 0.0, 0.0, 0.0, 0.0;
  const double h = std::abs(box.h);
  const double sp = 2.0 * cfg.w_pos * h;
  const double sv = 10.0 * cfg.w_vel * h;
  for (int i = 0; i < 4; ++i) {
    s.cov(i, i) = sp * sp;
    s.cov(4 + i, 4 + i) = sv * sv;
  }
  return s;
}

KalmanState initiate(const UncertainDetection& det, const KalmanConfig& cfg) {
  return initiate(det.box, cfg);
}

KalmanState predict(const KalmanState& state, const KalmanConfig& cfg) {
  const StateMatrix f = cfg.transition();
  KalmanState out;
  out.mean = f * state.mean;
  out.cov = f * state.cov * f.transpose() + cfg.process_noise(state.mean(3));
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

namespace {

MeasurementMatrix noise_matrix(const BoxSigma& r) {
  MeasurementMatrix m = MeasurementMatrix::Zero();
  m(0, 0) = r.x * r.x;
  m(1, 1) = r.y * r.y;
  m(2, 2) = r.w * r.w;
  m(3, 3) = r.h * r.h;
  return m;
}

}  // namespace

Projection project(const KalmanState& state, const BoxSigma& r,
                   const KalmanConfig& /*cfg*/) {
  const ObservationMatrix hm = KalmanConfig::observation();
  Projection p;
  p.mean = hm * state.mean;
  p.cov = hm * state.cov * hm.transpose() + noise_matrix(r);
  return p;
}

KalmanState update(const KalmanState& state, const BBox& z, const BoxSigma& r,
                   const KalmanConfig& cfg) {
  for (double v : {r.x, r.y, r.w, r.h}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(
          "kalman update: observation std must be positive and finite");
    }
  }
  const ObservationMatrix hm = KalmanConfig::observation();
  const MeasurementMatrix rm = noise_matrix(r);
  const Projection proj = project(state, r, cfg);

  MeasurementVector zv;
  zv << z.x, z.y, z.w, z.h;
  const MeasurementVector innovation = zv - proj.mean;

  // K = P H^T S^-1, solved as S K^T = H P.
  const Eigen::LLT<MeasurementMatrix> llt(proj.cov);
  const Eigen::Matrix<double, 8, 4> gain =
      llt.solve(hm * state.cov).transpose();

  KalmanState out;
  out.mean = state.mean + gain * innovation;
  const StateMatrix ikh = StateMatrix::Identity() - gain * hm;
  out.cov = ikh * state.cov * ikh.transpose() + gain * rm * gain.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

double asymmetry(const StateMatrix& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace umot
