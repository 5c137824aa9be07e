#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "umot/cmc.hpp"
#include "umot/geometry.hpp"
#include "umot/uncertain_nms.hpp"

namespace umot::sim {

struct ObjectSpec {
  BBox initial;  // frame-1 box in center format
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();  // pixels per frame
  // Width oscillation w(t) = w0 + amplitude * sin(omega t + phase), t in s.
  double osc_amplitude = 0.0;
  double osc_omega = 0.0;
  double osc_phase = 0.0;
  int class_id = 0;
  std::optional<BoxSigma> candidate_sigma;  // overrides the scenario noise
  double accel_sigma = 0.0;  // random-walk acceleration, pixels / frame^2
  // Inclusive frame ranges in which the object yields no candidates.
  std::vector<std::pair<int, int>> hidden;
  int first_frame = 1;
  int last_frame = 0;  // 0: until the end
};

enum class CameraModel { static_camera, affine_drift, projective_drift };

// Per-frame camera motion. For projective drift the frame-f homography has
// h3 = h3_rate * f on top of the affine part.
struct CameraSpec {
  CameraModel model = CameraModel::static_camera;
  Eigen::Matrix2d H1 = Eigen::Matrix2d::Identity();
  Eigen::Vector2d h2 = Eigen::Vector2d::Zero();
  Eigen::Vector2d h3_rate = Eigen::Vector2d::Zero();

  // Rotation by `angle` about `pivot` followed by `translation`.
  static CameraSpec rotation(const Eigen::Vector2d& pivot, double angle,
                             const Eigen::Vector2d& translation);
};

struct NoiseSpec {
  BoxSigma sigma{2.0, 2.0, 3.0, 3.0};
  int candidates_per_object = 10;
  double miss_probability = 0.0;
  double clutter_rate = 0.0;  // expected clutter boxes per frame
  double score_low = 0.6;
  double score_high = 0.95;
  double clutter_score_low = 0.1;
  double clutter_score_high = 0.5;
  double clutter_min_size = 16.0;
  double clutter_max_size = 128.0;
  bool heavy_tailed = false;  // Student-t (3 dof) scaled to the same std
};

struct ScenarioConfig {
  double image_width = 1920.0;
  double image_height = 1080.0;
  double fps = 30.0;
  int duration = 100;
  std::vector<ObjectSpec> objects;
  CameraSpec camera;
  NoiseSpec noise;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GtObject {
  int id = 0;  // 1-based object index
  BBox box;
  int class_id = 0;
  BoxSigma sigma;         // injected candidate noise
  bool occluded = false;  // IoU > 0.7 with another object
  bool hidden = false;    // inside a hidden window: no candidates
  bool clipped = false;
};

struct GtFrame {
  int frame = 0;
  std::vector<GtObject> objects;
};

struct Scene {
  std::vector<GtFrame> frames;  // frames 1..duration
  // homographies[k] maps frame k to frame k+1 (1-based frames); the first
  // entry is the identity.
  std::vector<Homography> homographies;
};

inline constexpr double kOcclusionIou = 0.7;

/// Ground truth and camera motion for every frame; deterministic given the
/// config (the seed drives only the random-walk accelerations).
Scene generate_scene(const ScenarioConfig& cfg);

/// Noisy pre-NMS candidates for one frame, deterministic given
/// (frame, noise, seed).
std::vector<DetectionCandidate> render_candidates(const GtFrame& gt,
                                                  const NoiseSpec& noise,
                                                  std::uint64_t seed,
                                                  double image_width,
                                                  double image_height);

std::vector<std::vector<DetectionCandidate>> render_sequence(
    const Scene& scene, const ScenarioConfig& cfg, std::uint64_t seed);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace umot::sim
