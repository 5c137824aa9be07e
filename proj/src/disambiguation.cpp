#include "umot/disambiguation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace umot {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void PhaseConfig::validate() const {
  if (capacity < 2) throw std::invalid_argument("phase: capacity must be >= 2");
  if (level_window < 1 || level_window > capacity) {
    throw std::invalid_argument("phase: level_window must be in [1, capacity]");
  }
  if (min_samples < 2 || min_samples > capacity) {
    throw std::invalid_argument("phase: min_samples must be in [2, capacity]");
  }
  if (!(smoothing > 0.0 && smoothing <= 1.0)) {
    throw std::invalid_argument("phase: smoothing must lie in (0, 1]");
  }
  if (!(stale_periods > 0.0)) {
    throw std::invalid_argument("phase: stale_periods must be positive");
  }
}

PhaseState::PhaseState(PhaseConfig cfg) : cfg_(cfg) { cfg_.validate(); }

double PhaseState::level() const {
  const std::size_t n = std::min(cfg_.level_window, buffer_.size());
  double s = 0.0;
  for (std::size_t k = buffer_.size() - n; k < buffer_.size(); ++k) {
    s += buffer_[k].w;
  }
  return s / static_cast<double>(n);
}

void PhaseState::anchor(double t, double level, int direction) {
  t0_ = t;
  ref_level_ = level;
  direction_ = direction;
  armed_ = false;
}

void PhaseState::observe(double w, double sigma_w, double t) {
  if (!buffer_.empty() && t < buffer_.back().t) {
    throw std::invalid_argument("observe_width: time must be nondecreasing");
  }
  const double t_prev = buffer_.empty() ? t : buffer_.back().t;
  buffer_.push_back({t, w, sigma_w});
  if (buffer_.size() > cfg_.capacity) buffer_.pop_front();

  last_change_ = false;
  last_back_ = false;
  const double lvl = level();
  if (buffer_.size() < 2) {
    prev_level_ = lvl;
    prev_ref_ = lvl;
    return;
  }

  double sigma_bar = 0.0;
  double mid = 0.0;
  double w_min = buffer_.front().w;
  double w_max = buffer_.front().w;
  for (const auto& s : buffer_) {
    sigma_bar += s.sigma;
    mid += s.w;
    w_min = std::min(w_min, s.w);
    w_max = std::max(w_max, s.w);
  }
  const auto n = static_cast<double>(buffer_.size());
  sigma_bar /= n;
  mid /= n;
  last_change_ = (w_max - w_min) > 3.0 * sigma_bar;

  if (buffer_.size() >= cfg_.min_samples && prev_level_) {
    const double prev = *prev_level_;
    // The reference is the live buffer mean, so the comparison acts as a
    // high-pass filter whose crossings keep the signal's period.
    auto crossing = [&](int dir) -> std::optional<double> {
      const bool crossed = dir > 0 ? (prev < prev_ref_ && lvl >= mid)
                                   : (prev > prev_ref_ && lvl <= mid);
      if (!crossed) return std::nullopt;
      const double d0 = prev - prev_ref_;
      const double d1 = lvl - mid;
      const double frac = d0 == d1 ? 1.0 : d0 / (d0 - d1);
      return t_prev + frac * (t - t_prev);
    };

    if (!t0_) {
      // Anchor only on a full buffer so the reference mean is unbiased.
      if (last_change_ && buffer_.size() == cfg_.capacity) {
        if (auto tc = crossing(+1)) {
          anchor(*tc, mid, +1);
        } else if (auto tc2 = crossing(-1)) {
          anchor(*tc2, mid, -1);
        }
      }
    } else {
      const bool departed = direction_ > 0 ? lvl < mid - sigma_bar
                                           : lvl > mid + sigma_bar;
      if (departed) armed_ = true;
      if (armed_) {
        if (auto tc = crossing(direction_)) {
          last_back_ = true;
          const double period = *tc - *t0_;
          if (last_change_ && period > 0.0) {
            const double raw = kTwoPi / period;
            omega_ = completions_ == 0
                         ? raw
                         : cfg_.smoothing * raw + (1.0 - cfg_.smoothing) * omega_;
            ++completions_;
            oscillating_ = true;
          }
          anchor(*tc, mid, direction_);
        }
      }

      const double span = buffer_.back().t - buffer_.front().t;
      const double limit = omega_ > 0.0 ? cfg_.stale_periods * kTwoPi / omega_
                                        : 2.0 * cfg_.stale_periods * span;
      if (t - *t0_ > limit) {
        oscillating_ = false;
        omega_ = 0.0;
        completions_ = 0;
        t0_.reset();
        armed_ = false;
      }
    }
  }
  prev_ref_ = mid;
  prev_level_ = lvl;
}

PhaseState observe_width(PhaseState ps, double w, double sigma_w, double t) {
  ps.observe(w, sigma_w, t);
  return ps;
}

double phase_angle(const PhaseState& ps, double t) {
  if (!ps.oscillating()) {
    throw PhaseUndefined("phase_angle: track is not oscillating");
  }
  double phi = std::fmod(ps.omega() * t, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
  return phi;
}

double phase_similarity(double phi_i, double phi_j) {
  return 0.5 * (1.0 + std::cos(phi_i - phi_j));
}

double osc_posterior(bool x_osc, double p_osc) {
  const double x = x_osc ? 1.0 : 0.0;
  const double num = x * p_osc;
  const double den = num + (1.0 - x) * (1.0 - p_osc);
  if (den == 0.0) return x;
  return num / den;
}

PhaseHypothesis hypothesis(const PhaseState& ps, double t) {
  if (!ps.oscillating()) return {};
  return {true, phase_angle(ps, t)};
}

double oscillation_frequency(std::span<const PhaseHypothesis> tracks,
                             std::span<const PhaseHypothesis> detections) {
  if (tracks.empty() || detections.empty()) return 0.5;
  const auto nt = std::count_if(tracks.begin(), tracks.end(),
                                [](const auto& h) { return h.oscillating; });
  const auto nd = std::count_if(detections.begin(), detections.end(),
                                [](const auto& h) { return h.oscillating; });
  return static_cast<double>(nt * nd) /
         static_cast<double>(tracks.size() * detections.size());
}

RowMatrix phase_disambiguator(std::span<const PhaseHypothesis> tracks,
                              std::span<const PhaseHypothesis> detections) {
  const auto n = static_cast<Eigen::Index>(tracks.size());
  const auto m = static_cast<Eigen::Index>(detections.size());
  RowMatrix d = RowMatrix::Zero(n, m);
  const double p = oscillation_frequency(tracks, detections);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& ti = tracks[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& dj = detections[static_cast<std::size_t>(j)];
      const bool x = ti.oscillating && dj.oscillating;
      if (!x) continue;
      d(i, j) = osc_posterior(x, p) * phase_similarity(ti.phase, dj.phase);
    }
  }
  return d;
}

namespace {

std::vector<double> standardized_areas(std::span<const BBox> boxes) {
  std::vector<double> a;
  a.reserve(boxes.size());
  for (const auto& b : boxes) a.push_back(b.area());
  if (a.empty()) return a;
  const auto n = static_cast<double>(a.size());
  const double mu = std::accumulate(a.begin(), a.end(), 0.0) / n;
  double var = 0.0;
  for (double v : a) var += (v - mu) * (v - mu);
  const double sd = std::max(std::sqrt(var / n), 1e-9);
  for (double& v : a) v = (v - mu) / sd;
  return a;
}

}  // namespace

RowMatrix size_disambiguator(std::span<const BBox> tracks,
                             std::span<const BBox> detections) {
  const auto at = standardized_areas(tracks);
  const auto ad = standardized_areas(detections);
  RowMatrix d(static_cast<Eigen::Index>(at.size()),
              static_cast<Eigen::Index>(ad.size()));
  for (std::size_t i = 0; i < at.size(); ++i) {
    for (std::size_t j = 0; j < ad.size(); ++j) {
      const double g = at[i] - ad[j];
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::exp(-0.5 * g * g);
    }
  }
  return d;
}

UncertainIoUMatrix apply_disambiguation(const UncertainIoUMatrix& m,
                                        const RowMatrix& d, double floor) {
  if (d.rows() != m.rows() || d.cols() != m.cols() ||
      m.delta.rows() != m.rows() || m.delta.cols() != m.cols()) {
    throw std::invalid_argument("apply_disambiguation: shape mismatch");
  }
  UncertainIoUMatrix out = m;
  const auto cols = static_cast<std::size_t>(m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const std::span<const double> iou_row(m.iou.row(i).data(), cols);
    const std::span<const double> delta_row(m.delta.row(i).data(), cols);
    for (auto group : ambiguity_groups(iou_row, delta_row, floor)) {
      std::vector<double> values;
      values.reserve(group.size());
      for (auto j : group) values.push_back(iou_row[j]);
      std::sort(values.begin(), values.end(), std::greater<>());

      std::sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
        const double da = d(i, static_cast<Eigen::Index>(a));
        const double db = d(i, static_cast<Eigen::Index>(b));
        if (da != db) return da > db;
        if (iou_row[a] != iou_row[b]) return iou_row[a] > iou_row[b];
        return a < b;
      });
      for (std::size_t k = 0; k < group.size(); ++k) {
        out.iou(i, static_cast<Eigen::Index>(group[k])) = values[k];
      }
    }
  }
  return out;
}

}  // namespace umot
