#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "umot/simworld.hpp"

using namespace umot;
using namespace umot::sim;

namespace {

ScenarioConfig one_object(double x = 400, double y = 500) {
  ScenarioConfig cfg;
  cfg.duration = 20;
  ObjectSpec o;
  o.initial = {x, y, 60, 150};
  cfg.objects.push_back(o);
  return cfg;
}

double sample_std(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST(Scenario, Validation) {
  auto cfg = one_object();
  cfg.duration = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = one_object();
  cfg.noise.miss_probability = 1.5;
  EXPECT_THROW(generate_scene(cfg), std::invalid_argument);
  cfg = one_object();
  cfg.objects[0].initial.w = -1;
  EXPECT_THROW(generate_scene(cfg), std::invalid_argument);
}

TEST(Scene, StaticObjectIsExact) {
  const auto scene = generate_scene(one_object());
  ASSERT_EQ(scene.frames.size(), 20u);
  ASSERT_EQ(scene.homographies.size(), 20u);
  for (std::size_t k = 0; k < scene.frames.size(); ++k) {
    EXPECT_EQ(scene.frames[k].frame, static_cast<int>(k) + 1);
    ASSERT_EQ(scene.frames[k].objects.size(), 1u);
    const auto& g = scene.frames[k].objects[0];
    EXPECT_EQ(g.id, 1);
    EXPECT_NEAR(g.box.x, 400, 1e-9);
    EXPECT_NEAR(g.box.w, 60, 1e-9);
    EXPECT_FALSE(g.occluded || g.hidden || g.clipped);
    EXPECT_EQ(g.sigma, NoiseSpec{}.sigma);
  }
}

TEST(Scene, ConstantVelocityAndOscillation) {
  auto cfg = one_object();
  cfg.objects[0].velocity = {3.0, -1.0};
  cfg.objects[0].osc_amplitude = 6.0;
  cfg.objects[0].osc_omega = 2 * std::numbers::pi;
  cfg.objects[0].osc_phase = 0.3;
  const auto scene = generate_scene(cfg);
  for (const auto& fr : scene.frames) {
    const auto& g = fr.objects[0];
    const double t = fr.frame / cfg.fps;
    EXPECT_NEAR(g.box.x, 400 + 3.0 * (fr.frame - 1), 1e-9);
    EXPECT_NEAR(g.box.y, 500 - 1.0 * (fr.frame - 1), 1e-9);
    EXPECT_NEAR(g.box.w, 60 + 6.0 * std::sin(2 * std::numbers::pi * t + 0.3), 1e-9);
  }
}

TEST(Scene, LifetimeAndHiddenWindows) {
  auto cfg = one_object();
  cfg.objects[0].first_frame = 3;
  cfg.objects[0].last_frame = 10;
  cfg.objects[0].hidden = {{5, 6}};
  const auto scene = generate_scene(cfg);
  for (const auto& fr : scene.frames) {
    const bool alive = fr.frame >= 3 && fr.frame <= 10;
    ASSERT_EQ(fr.objects.size(), alive ? 1u : 0u) << fr.frame;
    if (!alive) continue;
    EXPECT_EQ(fr.objects[0].hidden, fr.frame == 5 || fr.frame == 6);
    const auto cands = render_candidates(fr, cfg.noise, 1, 1920, 1080);
    EXPECT_EQ(cands.empty(), fr.objects[0].hidden);
  }
}

TEST(Scene, OcclusionFlag) {
  ScenarioConfig cfg = one_object();
  ObjectSpec b;
  b.initial = {402, 500, 60, 150};
  cfg.objects.push_back(b);
  ObjectSpec c;
  c.initial = {1200, 500, 60, 150};
  cfg.objects.push_back(c);
  const auto scene = generate_scene(cfg);
  const auto& objs = scene.frames[0].objects;
  ASSERT_EQ(objs.size(), 3u);
  EXPECT_TRUE(objs[0].occluded);
  EXPECT_TRUE(objs[1].occluded);
  EXPECT_FALSE(objs[2].occluded);
}

TEST(Scene, ClippingAtImageBorder) {
  const auto scene = generate_scene(one_object(10, 500));
  const auto& g = scene.frames[0].objects[0];
  EXPECT_TRUE(g.clipped);
  EXPECT_NEAR(g.box.left(), 0.0, 1e-12);
  EXPECT_NEAR(g.box.right(), 40.0, 1e-12);
}

TEST(Scene, ObjectsLeavingTheImageDisappear) {
  auto cfg = one_object(1900, 500);
  cfg.objects[0].velocity = {20.0, 0.0};
  const auto scene = generate_scene(cfg);
  EXPECT_FALSE(scene.frames.front().objects.empty());
  EXPECT_TRUE(scene.frames.back().objects.empty());
}

TEST(Scene, CameraMotionMapsConsecutiveFrames) {
  auto cfg = one_object(900, 500);
  cfg.camera = CameraSpec::rotation({960, 540}, 0.002, {1.5, -0.5});
  cfg.camera.model = CameraModel::affine_drift;
  const auto scene = generate_scene(cfg);
  EXPECT_TRUE(scene.homographies[0].matrix().isIdentity(0.0));
  for (std::size_t k = 1; k < scene.frames.size(); ++k) {
    const auto& prev = scene.frames[k - 1].objects[0].box;
    const auto& cur = scene.frames[k].objects[0].box;
    const Eigen::Vector2d p =
        warp_point(scene.homographies[k], Eigen::Vector2d(prev.x, prev.y));
    // A static world point follows the frame-to-frame homography; the hull
    // center of a slightly rotated box coincides with the warped center.
    EXPECT_NEAR(p.x(), cur.x, 1e-6);
    EXPECT_NEAR(p.y(), cur.y, 1e-6);
  }
}

TEST(Scene, ProjectiveDriftRamps) {
  auto cfg = one_object();
  cfg.camera.model = CameraModel::projective_drift;
  cfg.camera.h3_rate = {1e-7, 0.0};
  const auto scene = generate_scene(cfg);
  EXPECT_TRUE(scene.homographies[0].is_affine());
  EXPECT_NEAR(scene.homographies[9].h3.x(), 1e-6, 1e-18);
  EXPECT_FALSE(scene.homographies[9].is_affine());
}

TEST(Scene, AccelerationIsSeeded) {
  auto cfg = one_object();
  cfg.objects[0].accel_sigma = 0.5;
  cfg.seed = 4;
  const auto a = generate_scene(cfg);
  const auto b = generate_scene(cfg);
  cfg.seed = 5;
  const auto c = generate_scene(cfg);
  EXPECT_EQ(a.frames.back().objects[0].box, b.frames.back().objects[0].box);
  EXPECT_NE(a.frames.back().objects[0].box, c.frames.back().objects[0].box);
}

TEST(Render, DeterministicPerSeedAndFrame) {
  const auto scene = generate_scene(one_object());
  const NoiseSpec noise;
  const auto a = render_candidates(scene.frames[3], noise, 9, 1920, 1080);
  const auto b = render_candidates(scene.frames[3], noise, 9, 1920, 1080);
  const auto c = render_candidates(scene.frames[3], noise, 10, 1920, 1080);
  const auto d = render_candidates(scene.frames[4], noise, 9, 1920, 1080);
  ASSERT_EQ(a.size(), 10u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].box, b[k].box);
    EXPECT_EQ(a[k].score, b[k].score);
  }
  EXPECT_NE(a[0].box, c[0].box);
  EXPECT_NE(a[0].box.x - scene.frames[3].objects[0].box.x,
            d[0].box.x - scene.frames[4].objects[0].box.x);
}

TEST(Render, ScoresInBand) {
  const auto scene = generate_scene(one_object());
  for (const auto& c : render_candidates(scene.frames[0], NoiseSpec{}, 1, 1920, 1080)) {
    EXPECT_GE(c.score, 0.6);
    EXPECT_LE(c.score, 0.95);
  }
}

TEST(Render, EmpiricalSpreadMatchesInjectedSigma) {
  for (bool heavy : {false, true}) {
    auto cfg = one_object();
    cfg.noise.candidates_per_object = 20000;
    cfg.noise.heavy_tailed = heavy;
    const auto scene = generate_scene(cfg);
    const auto cands = render_candidates(scene.frames[0], cfg.noise, 3, 1920, 1080);
    std::vector<double> xs, ws;
    for (const auto& c : cands) {
      xs.push_back(c.box.x);
      ws.push_back(c.box.w);
    }
    // Student-t std has a heavy-tailed sampling distribution; allow more.
    const double tol = heavy ? 0.1 : 0.03;
    EXPECT_NEAR(sample_std(xs), 2.0, 2.0 * tol) << heavy;
    EXPECT_NEAR(sample_std(ws), 3.0, 3.0 * tol) << heavy;
  }
}

TEST(Render, MissesAndClutter) {
  auto cfg = one_object();
  cfg.noise.miss_probability = 1.0;
  cfg.noise.clutter_rate = 4.0;
  cfg.duration = 400;
  const auto scene = generate_scene(cfg);
  const auto seq = render_sequence(scene, cfg, 7);
  ASSERT_EQ(seq.size(), 400u);
  double total = 0.0;
  for (const auto& fr : seq) {
    for (const auto& c : fr) {
      EXPECT_LE(c.score, 0.5);
      EXPECT_GE(c.box.w, 16.0);
      EXPECT_LE(c.box.w, 128.0);
    }
    total += static_cast<double>(fr.size());
  }
  // Poisson(4) mean over 400 frames: std of the mean is 0.1.
  EXPECT_NEAR(total / 400.0, 4.0, 0.5);
}

TEST(MixSeed, SpreadsNearbyInputs) {
  EXPECT_NE(mix_seed(1, 1), mix_seed(1, 2));
  EXPECT_NE(mix_seed(1, 1), mix_seed(2, 1));
  EXPECT_EQ(mix_seed(3, 4), mix_seed(3, 4));
}
