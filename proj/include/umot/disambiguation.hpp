#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>

#include "umot/geometry.hpp"

namespace umot {

struct PhaseConfig {
  std::size_t capacity = 30;     // rolling width buffer length (samples)
  std::size_t level_window = 3;  // samples averaged for the current level
  std::size_t min_samples = 5;   // buffer fill required before detection
  double smoothing = 0.5;        // EMA weight of each new frequency sample
  double stale_periods = 2.0;    // oscillation lapses after this many periods

  void validate() const;
};

struct WidthSample {
  double t = 0.0;      // seconds
  double w = 0.0;      // pixels
  double sigma = 0.0;  // pixels
};

// Thrown when the phase of a non-oscillating track is requested.
class PhaseUndefined : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Width-oscillation detector for one track.
///
/// Each observation rolls the width buffer and evaluates
///   change: w_max - w_min > 3 * mean(sigma_w) over the buffer,
///   back:   the current level (mean of the last `level_window` widths)
///           crosses the buffer mean in the same direction as at t0, after
///           having departed by more than mean(sigma_w) to the other side.
/// change && back completes an oscillation: the period t - t0 (with t the
/// interpolated crossing time) yields a frequency sample blended into
/// omega, and t0 moves to t. Without a completion for stale_periods
/// periods the detector resets.
class PhaseState {
 public:
  explicit PhaseState(PhaseConfig cfg = {});

  // Throws std::invalid_argument when t decreases.
  void observe(double w, double sigma_w, double t);

  const std::deque<WidthSample>& buffer() const { return buffer_; }
  std::optional<double> t0() const { return t0_; }
  double reference_width() const { return ref_level_; }
  double omega() const { return omega_; }
  bool oscillating() const { return oscillating_; }
  bool last_change() const { return last_change_; }
  bool last_back() const { return last_back_; }
  std::size_t completed_oscillations() const { return completions_; }
  const PhaseConfig& config() const { return cfg_; }

 private:
  double level() const;
  void anchor(double t, double level, int direction);

  PhaseConfig cfg_;
  std::deque<WidthSample> buffer_;
  std::optional<double> t0_;
  double ref_level_ = 0.0;
  int direction_ = 0;  // +1 rising through the reference at t0, -1 falling
  bool armed_ = false;
  std::optional<double> prev_level_;
  double prev_ref_ = 0.0;
  double omega_ = 0.0;
  bool oscillating_ = false;
  bool last_change_ = false;
  bool last_back_ = false;
  std::size_t completions_ = 0;
};

PhaseState observe_width(PhaseState ps, double w, double sigma_w, double t);

// (omega * t) mod 2pi, in [0, 2pi). Throws PhaseUndefined unless oscillating.
double phase_angle(const PhaseState& ps, double t);

// 0.5 * (1 + cos(a - b))
double phase_similarity(double phi_i, double phi_j);

// Bayes posterior x p / (x p + (1 - x)(1 - p)); returns x when the
// denominator vanishes.
double osc_posterior(bool x_osc, double p_osc);

// What the phase disambiguator knows about one side of a pair.
struct PhaseHypothesis {
  bool oscillating = false;
  double phase = 0.0;
};

PhaseHypothesis hypothesis(const PhaseState& ps, double t);

// Frequency of ones in the matrix X_ij = X_i X_j; 0.5 for an empty matrix.
double oscillation_frequency(std::span<const PhaseHypothesis> tracks,
                             std::span<const PhaseHypothesis> detections);

RowMatrix phase_disambiguator(std::span<const PhaseHypothesis> tracks,
                              std::span<const PhaseHypothesis> detections);

// exp(-0.5 (a_T - a_d)^2) over standardized areas. Each population is
// standardized with its own mean and population std, the std floored at
// 1e-9.
RowMatrix size_disambiguator(std::span<const BBox> tracks,
                             std::span<const BBox> detections);

/// Within every ambiguity group of every row, reassigns the group's IoU
/// values so that descending IoU follows descending disambiguator value.
/// Ties in the disambiguator keep the original IoU order (then column
/// index), so an uninformative row is left as is. Deltas are unchanged.
UncertainIoUMatrix apply_disambiguation(const UncertainIoUMatrix& m,
                                        const RowMatrix& d,
                                        double floor = kDefaultAmbiguityFloor);

}  // namespace umot
