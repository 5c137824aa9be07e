#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "umot/evalkit/metrics.hpp"
#include "umot/simworld.hpp"
#include "umot/tracker.hpp"

namespace umot::eval {

struct SweepRow {
  std::uint64_t seed = 0;
  MetricReport report;
};

// Metric values as reals so that averaged counts keep their fractions.
struct MetricStats {
  double hota = 0.0;
  double deta = 0.0;
  double assa = 0.0;
  double mota = 0.0;
  double idf1 = 0.0;
  double idsw = 0.0;
  double fp = 0.0;
  double fn = 0.0;
};

struct SweepSummary {
  MetricStats mean;
  MetricStats std;  // sample standard deviation; zero for a single seed
};

struct SweepResult {
  std::vector<SweepRow> rows;
  SweepSummary summary;
};

struct SweepOptions {
  int n_seeds = 20;
  std::uint64_t base_seed = 0;  // seed_i = base_seed + i
  unsigned threads = 0;         // 0: hardware concurrency
};

/// Runs one tracking pass per seed on a fixed ground truth; only the
/// detector-noise seed changes between runs. Rows are ordered by seed and do
/// not depend on the thread count.
SweepResult run_sweep(const TrackerConfig& tracker,
                      const sim::ScenarioConfig& scenario,
                      const SweepOptions& opts);

// Tracks one rendering of the scenario and scores it against its ground truth.
MetricReport run_once(const TrackerConfig& tracker, const sim::Scene& scene,
                      const sim::ScenarioConfig& scenario, std::uint64_t seed);

SweepSummary summarize(const std::vector<SweepRow>& rows);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_sweep_summary(std::ostream& out, const SweepSummary& summary);

/// HOTA vs IDF1 per seed: an SVG scatter plot when the path ends in ".svg",
/// otherwise CSV "seed,hota,idf1".
void write_sweep_plot(const std::filesystem::path& path,
                      const SweepResult& result);
void write_sweep_svg(std::ostream& out, const SweepResult& result);

}  // namespace umot::eval
