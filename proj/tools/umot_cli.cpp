// Command-line front end: track, simulate, evaluate, sweep.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "umot/evalkit/candidates_format.hpp"
#include "umot/evalkit/config.hpp"
#include "umot/evalkit/gmc_format.hpp"
#include "umot/evalkit/metrics.hpp"
#include "umot/evalkit/mot_format.hpp"
#include "umot/evalkit/scenario_format.hpp"
#include "umot/evalkit/sweep.hpp"
#include "umot/simworld.hpp"
#include "umot/tracker.hpp"

namespace fs = std::filesystem;
using namespace umot;

namespace {

struct TrackerFlags {
  std::string config;
  std::string cmc;
  std::string disambiguator;
  std::string measured_r;
  std::string confirm_all_bins;

  void add_to(CLI::App* app) {
    app->add_option("--config", config, "Tracker config file (key = value)");
    app->add_option("--cmc", cmc, "Camera motion compensation")
        ->check(CLI::IsMember({"off", "affine", "homographic"}));
    app->add_option("--disambiguator", disambiguator, "IoU disambiguator")
        ->check(CLI::IsMember({"none", "phase", "size"}));
    app->add_option("--measured-r", measured_r,
                    "Use the measured NMS spread as observation noise");
    app->add_option("--confirm-all-bins", confirm_all_bins,
                    "Start tracks from every cascade bin");
  }

  // File first, then every flag given on the command line.
  TrackerConfig resolve() const {
    TrackerConfig cfg;
    if (!config.empty()) cfg = eval::parse_config_file(config);
    if (!cmc.empty()) cfg.cmc_mode = eval::parse_cmc_mode(cmc);
    if (!disambiguator.empty()) {
      cfg.cascade.disambiguator = eval::parse_disambiguator(disambiguator);
    }
    if (!measured_r.empty()) cfg.use_measured_r = eval::parse_bool(measured_r);
    if (!confirm_all_bins.empty()) {
      cfg.cascade.confirm_from_all_bins = eval::parse_bool(confirm_all_bins);
    }
    cfg.validate();
    return cfg;
  }
};

int run_track(const std::string& candidates_path, const std::string& gmc_path,
              const std::string& out_path, const TrackerFlags& flags) {
  const TrackerConfig cfg = flags.resolve();
  const auto recs = eval::parse_candidates_file(candidates_path);
  std::optional<eval::GmcMap> gmc;
  if (!gmc_path.empty()) gmc = eval::parse_gmc_file(gmc_path);

  int last = 0;
  for (const auto& r : recs) last = std::max(last, r.frame);
  if (gmc && !gmc->empty()) last = std::max(last, gmc->rbegin()->first);

  const auto frames = eval::group_by_frame(recs, 1, last);
  std::vector<std::optional<Homography>> homs;
  if (gmc) homs = eval::homography_stream(*gmc, 1, last);

  Tracker tracker(cfg);
  std::vector<FrameOutput> outputs;
  for (int f = 1; f <= last; ++f) {
    const auto k = static_cast<std::size_t>(f - 1);
    outputs.push_back(tracker.step(
        f, frames[k], homs.empty() ? std::nullopt : homs[k]));
  }
  for (const auto& w : tracker.warnings()) std::cerr << "warning: " << w << '\n';
  eval::write_mot_file(out_path, eval::records_from_tracks(outputs));
  return 0;
}

int run_simulate(const std::string& scenario_path,
                 std::optional<std::uint64_t> seed, const std::string& out_dir) {
  sim::ScenarioConfig scenario = eval::parse_scenario_file(scenario_path);
  const std::uint64_t noise_seed = seed.value_or(scenario.seed);
  const sim::Scene scene = sim::generate_scene(scenario);
  const auto candidates = sim::render_sequence(scene, scenario, noise_seed);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  eval::write_mot_file(dir / "gt.txt", eval::records_from_scene(scene));
  eval::write_candidates_file(dir / "candidates.jsonl",
                              eval::flatten_frames(candidates, 1));
  eval::GmcMap gmc;
  for (std::size_t k = 0; k < scene.homographies.size(); ++k) {
    gmc.emplace(static_cast<int>(k) + 1, scene.homographies[k]);
  }
  eval::write_gmc_file(dir / "gmc.txt", gmc);
  return 0;
}

int run_evaluate(const std::string& gt_path, const std::string& pred_path,
                 const std::string& metrics) {
  const auto gt = eval::parse_mot_file(gt_path);
  const auto pred = eval::parse_mot_file(pred_path);

  std::vector<std::string> wanted;
  std::stringstream ss(metrics);
  for (std::string m; std::getline(ss, m, ',');) {
    if (m != "hota" && m != "idf1" && m != "mota") {
      throw std::invalid_argument("unknown metric '" + m + "'");
    }
    wanted.push_back(m);
  }
  for (const auto& m : wanted) {
    if (m == "hota") {
      const auto h = eval::hota(gt, pred);
      std::cout << "HOTA " << h.hota << "\nDetA " << h.deta << "\nAssA "
                << h.assa << "\nLocA " << h.loca << '\n';
    } else if (m == "idf1") {
      const auto id = eval::identity_metrics(gt, pred);
      std::cout << "IDF1 " << id.idf1 << "\nIDTP " << id.idtp << "\nIDFP "
                << id.idfp << "\nIDFN " << id.idfn << '\n';
    } else {
      const auto c = eval::clear_mot(gt, pred);
      std::cout << "MOTA " << c.mota << "\nIDSW " << c.idsw << "\nFP " << c.fp
                << "\nFN " << c.fn << '\n';
    }
  }
  return 0;
}

int run_sweep_cmd(int seeds, std::uint64_t base_seed, unsigned threads,
                  const std::string& scenario_path, const std::string& csv,
                  const std::string& plot, const TrackerFlags& flags) {
  const TrackerConfig cfg = flags.resolve();
  const auto scenario = eval::parse_scenario_file(scenario_path);
  eval::SweepOptions opts;
  opts.n_seeds = seeds;
  opts.base_seed = base_seed;
  opts.threads = threads;
  const auto result = eval::run_sweep(cfg, scenario, opts);
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write " + csv);
    eval::write_sweep_csv(out, result);
  }
  if (!plot.empty()) eval::write_sweep_plot(plot, result);
  eval::write_sweep_summary(std::cout, result.summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty-aware multi-object tracking toolkit"};
  app.require_subcommand(1);

  auto* track = app.add_subcommand("track", "Track pre-NMS candidates");
  std::string candidates, gmc_path, out_path;
  TrackerFlags track_flags;
  track->add_option("--candidates", candidates, "Candidate JSONL file")
      ->required()
      ->check(CLI::ExistingFile);
  track->add_option("--gmc", gmc_path, "Per-frame homography file")
      ->check(CLI::ExistingFile);
  track->add_option("--out", out_path, "Output MOT file")->required();
  track_flags.add_to(track);

  auto* simulate = app.add_subcommand("simulate", "Render a synthetic scenario");
  std::string scenario_path, out_dir;
  std::optional<std::uint64_t> seed;
  simulate->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "Detector-noise seed");
  simulate->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions");
  std::string gt_path, pred_path, metrics = "hota,idf1,mota";
  evaluate->add_option("--gt", gt_path, "Ground-truth MOT file")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--pred", pred_path, "Predicted MOT file")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--metrics", metrics, "Comma list of hota,idf1,mota");

  auto* sweep = app.add_subcommand("sweep", "Multi-seed evaluation");
  int seeds = 20;
  std::uint64_t base_seed = 0;
  unsigned threads = 0;
  std::string sweep_scenario, out_csv, plot;
  TrackerFlags sweep_flags;
  sweep->add_option("--seeds", seeds, "Number of seeds")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--base-seed", base_seed, "First seed");
  sweep->add_option("--threads", threads, "Worker threads (0: all cores)");
  sweep->add_option("--scenario", sweep_scenario, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--out-csv", out_csv, "Per-seed CSV output");
  sweep->add_option("--plot", plot, "HOTA vs IDF1 plot (.svg or CSV)");
  sweep_flags.add_to(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*track) return run_track(candidates, gmc_path, out_path, track_flags);
    if (*simulate) return run_simulate(scenario_path, seed, out_dir);
    if (*evaluate) return run_evaluate(gt_path, pred_path, metrics);
    if (*sweep) {
      return run_sweep_cmd(seeds, base_seed, threads, sweep_scenario, out_csv,
                           plot, sweep_flags);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
