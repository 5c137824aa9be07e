#include "oracles/textbook_kalman.hpp"

#include <cmath>

namespace oracle {

namespace {

Eigen::MatrixXd transition() {
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(8, 8);
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
  return f;
}

Eigen::MatrixXd observation() {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4, 8);
  for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
  return h;
}

}  // namespace

TextbookKalman::TextbookKalman(double wp, double wv, const Eigen::Vector4d& z0)
    : w_pos(wp), w_vel(wv), x(Eigen::VectorXd::Zero(8)),
      p(Eigen::MatrixXd::Zero(8, 8)) {
  x.head(4) = z0;
  const double h = std::abs(z0(3));
  for (int i = 0; i < 4; ++i) {
    p(i, i) = std::pow(2.0 * w_pos * h, 2);
    p(i + 4, i + 4) = std::pow(10.0 * w_vel * h, 2);
  }
}

void TextbookKalman::predict() {
  const Eigen::MatrixXd f = transition();
  const double h = std::abs(x(3));
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(8, 8);
  for (int i = 0; i < 4; ++i) {
    q(i, i) = std::pow(w_pos * h, 2);
    q(i + 4, i + 4) = std::pow(w_vel * h, 2);
  }
  x = f * x;
  p = f * p * f.transpose() + q;
}

void TextbookKalman::update(const Eigen::Vector4d& z,
                            const Eigen::Vector4d& r_std) {
  const Eigen::MatrixXd h = observation();
  const Eigen::MatrixXd r = r_std.array().square().matrix().asDiagonal();
  const Eigen::MatrixXd s = h * p * h.transpose() + r;
  const Eigen::MatrixXd k = p * h.transpose() * s.inverse();
  x = x + k * (z - h * x);
  p = (Eigen::MatrixXd::Identity(8, 8) - k * h) * p;
}

}  // namespace oracle
