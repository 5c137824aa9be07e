#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "umot/association.hpp"
#include "umot/cmc.hpp"
#include "umot/disambiguation.hpp"
#include "umot/kalman.hpp"
#include "umot/uncertain_nms.hpp"

namespace umot {

enum class TrackStatus { tentative, confirmed, lost, removed };
enum class CmcMode { off, affine, homographic };

struct Track {
  int id = 0;
  KalmanState kstate;
  PhaseState phase;
  TrackStatus status = TrackStatus::tentative;
  int age = 0;                // frames since birth
  int time_since_update = 0;  // frames since the last match
  int hits = 0;               // consecutive matches
  double last_score = 0.0;
  int class_id = 0;
  BoxSigma last_sigma;     // sigma of the last matched detection
  BBox last_measurement;   // last matched detection box
  BBox predicted_box;      // prior of the current frame (after CMC + predict)

  BBox box() const { return kstate.box(); }
};

struct TrackerConfig {
  NmsConfig nms;
  KalmanConfig kalman;
  CascadeConfig cascade;
  PhaseConfig phase;
  CmcMode cmc_mode = CmcMode::off;
  // Observation noise from the NMS cluster spread; otherwise every
  // coordinate uses std parametric_r_weight * h.
  bool use_measured_r = true;
  double parametric_r_weight = 1.0 / 20.0;
  int max_age = 30;
  int n_init = 2;
  double fps = 30.0;
  double image_height = 1080.0;

  void validate() const;
};

struct FrameEntry {
  int track_id = 0;
  BBox box;
  double score = 0.0;
  int class_id = 0;
  BoxSigma sigma;
};

struct FrameOutput {
  int frame = 0;
  std::vector<FrameEntry> entries;  // confirmed tracks, ascending id
};

/// Per-sequence tracking state. Each step runs NMS with statistics, camera
/// motion compensation of the previous posteriors, prediction, cascade
/// association, the Kalman update and the track lifecycle.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg);

  // Throws std::invalid_argument unless frame_index increases.
  FrameOutput step(int frame_index,
                   std::span<const DetectionCandidate> candidates,
                   const std::optional<Homography>& homography = std::nullopt);

  const std::vector<Track>& tracks() const { return tracks_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const TrackerConfig& config() const { return cfg_; }

 private:
  void compensate(const Homography& hom, int frame_index);
  std::vector<PhaseHypothesis> detection_phases(
      std::span<const UncertainDetection> dets, double t) const;
  BoxSigma observation_sigma(const Track& tr,
                             const UncertainDetection& det) const;

  TrackerConfig cfg_;
  std::vector<Track> tracks_;
  std::vector<std::string> warnings_;
  std::optional<int> last_frame_;
  int next_id_ = 1;
};

/// Folds Tracker::step over a frame-aligned stream starting at first_frame.
/// `homographies` is either empty or has one entry per frame. Throws
/// std::invalid_argument on misaligned streams.
std::vector<FrameOutput> run_sequence(
    const std::vector<std::vector<DetectionCandidate>>& frames,
    const std::vector<std::optional<Homography>>& homographies,
    const TrackerConfig& cfg, int first_frame = 1);

}  // namespace umot
