#include "umot/simworld.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Geometry>

namespace umot::sim {

CameraSpec CameraSpec::rotation(const Eigen::Vector2d& pivot, double angle,
                                const Eigen::Vector2d& translation) {
  CameraSpec c;
  c.model = CameraModel::affine_drift;
  c.H1 = Eigen::Rotation2Dd(angle).toRotationMatrix();
  c.h2 = pivot - c.H1 * pivot + translation;
  return c;
}

void ScenarioConfig::validate() const {
  if (duration < 1) throw std::invalid_argument("scenario: duration must be >= 1");
  if (!(fps > 0.0)) throw std::invalid_argument("scenario: fps must be positive");
  if (!(image_width > 0.0) || !(image_height > 0.0)) {
    throw std::invalid_argument("scenario: image size must be positive");
  }
  if (noise.candidates_per_object < 1) {
    throw std::invalid_argument("scenario: candidates_per_object must be >= 1");
  }
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(noise.miss_probability) || !prob(noise.score_low) ||
      !prob(noise.score_high) || noise.score_low > noise.score_high ||
      !prob(noise.clutter_score_low) || !prob(noise.clutter_score_high) ||
      noise.clutter_score_low > noise.clutter_score_high) {
    throw std::invalid_argument("scenario: probabilities must lie in [0, 1]");
  }
  if (noise.clutter_rate < 0.0 || !noise.sigma.valid()) {
    throw std::invalid_argument("scenario: invalid noise specification");
  }
  for (const auto& o : objects) {
    if (!o.initial.valid() || (o.candidate_sigma && !o.candidate_sigma->valid())) {
      throw std::invalid_argument("scenario: invalid object specification");
    }
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

Homography frame_homography(const CameraSpec& cam, int frame) {
  if (frame <= 1 || cam.model == CameraModel::static_camera) {
    return Homography::identity();
  }
  Homography hom = Homography::affine(cam.H1, cam.h2);
  if (cam.model == CameraModel::projective_drift) {
    hom.h3 = cam.h3_rate * static_cast<double>(frame);
  }
  return hom;
}

// Axis-aligned hull of the four warped corners.
std::optional<BBox> warp_box(const Eigen::Matrix3d& c, const BBox& b) {
  double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
  for (double px : {b.left(), b.right()}) {
    for (double py : {b.top(), b.bottom()}) {
      const Eigen::Vector3d q = c * Eigen::Vector3d(px, py, 1.0);
      if (!(q.z() > kDegenerateDenominator)) return std::nullopt;
      x0 = std::min(x0, q.x() / q.z());
      x1 = std::max(x1, q.x() / q.z());
      y0 = std::min(y0, q.y() / q.z());
      y1 = std::max(y1, q.y() / q.z());
    }
  }
  return BBox::from_corners(x0, y0, x1 - x0, y1 - y0);
}

bool in_ranges(const std::vector<std::pair<int, int>>& ranges, int f) {
  return std::any_of(ranges.begin(), ranges.end(), [f](const auto& r) {
    return f >= r.first && f <= r.second;
  });
}

}  // namespace

Scene generate_scene(const ScenarioConfig& cfg) {
  cfg.validate();
  Scene scene;
  std::mt19937_64 rng(mix_seed(cfg.seed, 0x5ce7e));
  std::normal_distribution<double> unit(0.0, 1.0);

  struct Motion {
    Eigen::Vector2d pos;
    Eigen::Vector2d vel;
  };
  std::vector<Motion> motion;
  for (const auto& o : cfg.objects) {
    motion.push_back({{o.initial.x, o.initial.y}, o.velocity});
  }

  Eigen::Matrix3d cumulative = Eigen::Matrix3d::Identity();
  for (int f = 1; f <= cfg.duration; ++f) {
    const Homography hom = frame_homography(cfg.camera, f);
    scene.homographies.push_back(hom);
    cumulative = hom.matrix() * cumulative;

    GtFrame gt;
    gt.frame = f;
    const double t = static_cast<double>(f) / cfg.fps;
    for (std::size_t k = 0; k < cfg.objects.size(); ++k) {
      const auto& o = cfg.objects[k];
      auto& mo = motion[k];
      if (f > 1) {
        mo.pos += mo.vel;
        if (o.accel_sigma > 0.0) {
          mo.vel += o.accel_sigma * Eigen::Vector2d(unit(rng), unit(rng));
        }
      }
      if (f < o.first_frame || (o.last_frame > 0 && f > o.last_frame)) continue;

      BBox ref{mo.pos.x(), mo.pos.y(),
               o.initial.w + o.osc_amplitude * std::sin(o.osc_omega * t + o.osc_phase),
               o.initial.h};
      ref.w = std::max(ref.w, 1.0);
      const auto warped = warp_box(cumulative, ref);
      if (!warped) continue;

      const double x0 = std::max(0.0, warped->left());
      const double y0 = std::max(0.0, warped->top());
      const double x1 = std::min(cfg.image_width, warped->right());
      const double y1 = std::min(cfg.image_height, warped->bottom());
      if (x1 - x0 <= 0.0 || y1 - y0 <= 0.0) continue;

      GtObject g;
      g.id = static_cast<int>(k) + 1;
      g.box = BBox::from_corners(x0, y0, x1 - x0, y1 - y0);
      g.clipped = !(g.box == *warped);
      g.class_id = o.class_id;
      g.sigma = o.candidate_sigma.value_or(cfg.noise.sigma);
      g.hidden = in_ranges(o.hidden, f);
      gt.objects.push_back(g);
    }
    for (auto& a : gt.objects) {
      for (const auto& b : gt.objects) {
        if (a.id != b.id && iou(a.box, b.box) > kOcclusionIou) a.occluded = true;
      }
    }
    scene.frames.push_back(std::move(gt));
  }
  return scene;
}

std::vector<DetectionCandidate> render_candidates(const GtFrame& gt,
                                                  const NoiseSpec& noise,
                                                  std::uint64_t seed,
                                                  double image_width,
                                                  double image_height) {
  std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(gt.frame)));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::student_t_distribution<double> student(3.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double t_scale = 1.0 / std::sqrt(3.0);  // unit variance for 3 dof

  auto draw = [&]() {
    return noise.heavy_tailed ? t_scale * student(rng) : gauss(rng);
  };
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * uni(rng); };

  std::vector<DetectionCandidate> out;
  for (const auto& g : gt.objects) {
    const bool missed = uni(rng) < noise.miss_probability;
    if (g.hidden || missed) continue;
    for (int k = 0; k < noise.candidates_per_object; ++k) {
      DetectionCandidate c;
      c.box.x = g.box.x + g.sigma.x * draw();
      c.box.y = g.box.y + g.sigma.y * draw();
      c.box.w = std::max(1.0, g.box.w + g.sigma.w * draw());
      c.box.h = std::max(1.0, g.box.h + g.sigma.h * draw());
      c.score = uniform(noise.score_low, noise.score_high);
      c.class_id = g.class_id;
      out.push_back(c);
    }
  }

  std::poisson_distribution<int> clutter(noise.clutter_rate);
  const int n_clutter = noise.clutter_rate > 0.0 ? clutter(rng) : 0;
  for (int k = 0; k < n_clutter; ++k) {
    DetectionCandidate c;
    c.box.w = uniform(noise.clutter_min_size, noise.clutter_max_size);
    c.box.h = uniform(noise.clutter_min_size, noise.clutter_max_size);
    c.box.x = uniform(0.0, image_width);
    c.box.y = uniform(0.0, image_height);
    c.score = uniform(noise.clutter_score_low, noise.clutter_score_high);
    c.class_id = 0;
    out.push_back(c);
  }
  return out;
}

std::vector<std::vector<DetectionCandidate>> render_sequence(
    const Scene& scene, const ScenarioConfig& cfg, std::uint64_t seed) {
  std::vector<std::vector<DetectionCandidate>> out;
  out.reserve(scene.frames.size());
  for (const auto& gt : scene.frames) {
    out.push_back(render_candidates(gt, cfg.noise, seed, cfg.image_width,
                                    cfg.image_height));
  }
  return out;
}

}  // namespace umot::sim
