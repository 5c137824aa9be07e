#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "umot/evalkit/candidates_format.hpp"
#include "umot/evalkit/gmc_format.hpp"
#include "umot/evalkit/metrics.hpp"
#include "umot/evalkit/mot_format.hpp"
#include "umot/evalkit/scenario_format.hpp"
#include "umot/evalkit/sweep.hpp"
#include "umot/simworld.hpp"
#include "umot/tracker.hpp"

using namespace umot;
using namespace umot::eval;

namespace {

sim::ScenarioConfig fixture_scenario() {
  return parse_scenario_file(std::filesystem::path(UMOT_FIXTURE_DIR) /
                             "two_walkers.json");
}

std::vector<std::optional<Homography>> optional_homs(const sim::Scene& scene) {
  return {scene.homographies.begin(), scene.homographies.end()};
}

std::string mot_text(const std::vector<FrameOutput>& out) {
  std::ostringstream ss;
  write_mot(ss, records_from_tracks(out));
  return ss.str();
}

}  // namespace

TEST(Pipeline, BitIdenticalReruns) {
  const auto scenario = fixture_scenario();
  TrackerConfig cfg;
  cfg.cmc_mode = CmcMode::homographic;
  cfg.cascade.disambiguator = DisambiguatorKind::phase;
  const auto scene = sim::generate_scene(scenario);
  const auto frames = sim::render_sequence(scene, scenario, 17);
  const auto a = mot_text(run_sequence(frames, optional_homs(scene), cfg));
  const auto scene2 = sim::generate_scene(scenario);
  const auto frames2 = sim::render_sequence(scene2, scenario, 17);
  const auto b = mot_text(run_sequence(frames2, optional_homs(scene2), cfg));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}

TEST(Pipeline, FileRoundTripPreservesTracking) {
  const auto scenario = fixture_scenario();
  const auto scene = sim::generate_scene(scenario);
  const auto frames = sim::render_sequence(scene, scenario, 3);
  TrackerConfig cfg;
  cfg.cmc_mode = CmcMode::affine;
  const auto direct = mot_text(run_sequence(frames, optional_homs(scene), cfg));

  std::stringstream cand, gmc_text;
  write_candidates(cand, flatten_frames(frames, 1));
  GmcMap gmc;
  for (std::size_t k = 0; k < scene.homographies.size(); ++k) {
    gmc.emplace(static_cast<int>(k) + 1, scene.homographies[k]);
  }
  write_gmc(gmc_text, gmc);
  const auto frames_back =
      group_by_frame(parse_candidates(cand), 1, scenario.duration);
  const auto homs_back = homography_stream(parse_gmc(gmc_text), 1, scenario.duration);
  EXPECT_EQ(mot_text(run_sequence(frames_back, homs_back, cfg)), direct);
}

TEST(Pipeline, FixtureTracksWell) {
  const auto scenario = fixture_scenario();
  const auto scene = sim::generate_scene(scenario);
  TrackerConfig cfg;
  cfg.cmc_mode = CmcMode::affine;
  const auto report = run_once(cfg, scene, scenario, 5);
  EXPECT_GT(report.mota, 80.0);
  EXPECT_GT(report.idf1, 80.0);
  EXPECT_LE(report.idsw, 1);
}

TEST(Pipeline, ZeroNoiseReproducesGroundTruth) {
  // Noise-free candidates and a vanishing sigma floor: the Kalman posterior
  // collapses onto the measurement, so outputs match the ground truth up to
  // the residual prior weight R / (P + R).
  sim::ScenarioConfig scenario;
  scenario.duration = 60;
  scenario.noise.sigma = {0, 0, 0, 0};
  scenario.noise.candidates_per_object = 3;
  for (int k = 0; k < 3; ++k) {
    sim::ObjectSpec o;
    o.initial = {300.0 + 500.0 * k, 400.0 + 50.0 * k, 50, 120};
    o.velocity = {1.5 * (k - 1), 0.5};
    scenario.objects.push_back(o);
  }
  const auto scene = sim::generate_scene(scenario);
  const auto frames = sim::render_sequence(scene, scenario, 1);
  TrackerConfig cfg;
  cfg.nms.sigma_floor = 1e-6;
  cfg.n_init = 1;
  const auto out = run_sequence(frames, {}, cfg);
  // Track ids are arbitrary labels; the mapping to objects must stay fixed.
  std::map<int, int> gt_of;
  double worst = 0.0;
  for (std::size_t f = 0; f < out.size(); ++f) {
    ASSERT_EQ(out[f].entries.size(), scene.frames[f].objects.size());
    for (const auto& got : out[f].entries) {
      const sim::GtObject* best = nullptr;
      for (const auto& g : scene.frames[f].objects) {
        if (!best || iou(g.box, got.box) > iou(best->box, got.box)) best = &g;
      }
      const auto [it, fresh] = gt_of.try_emplace(got.track_id, best->id);
      EXPECT_EQ(it->second, best->id);
      worst = std::max({worst, std::abs(got.box.x - best->box.x),
                        std::abs(got.box.y - best->box.y),
                        std::abs(got.box.w - best->box.w),
                        std::abs(got.box.h - best->box.h)});
    }
  }
  EXPECT_EQ(gt_of.size(), 3u);
  EXPECT_LT(worst, 1e-6);
  const auto report =
      evaluate(records_from_scene(scene), records_from_tracks(out));
  EXPECT_NEAR(report.hota, 100.0, 1e-6);
  EXPECT_DOUBLE_EQ(report.mota, 100.0);
  EXPECT_DOUBLE_EQ(report.idf1, 100.0);
}

TEST(Pipeline, SweepMatchesSingleRuns) {
  const auto scenario = fixture_scenario();
  SweepOptions opts;
  opts.n_seeds = 3;
  opts.base_seed = 11;
  const TrackerConfig cfg;
  const auto sweep = run_sweep(cfg, scenario, opts);
  const auto scene = sim::generate_scene(scenario);
  for (const auto& row : sweep.rows) {
    const auto r = run_once(cfg, scene, scenario, row.seed);
    EXPECT_EQ(r.hota, row.report.hota);
    EXPECT_EQ(r.idsw, row.report.idsw);
  }
}
