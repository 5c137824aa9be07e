#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/brute_assignment.hpp"
#include "umot/association.hpp"

using namespace umot;

namespace {

UncertainDetection det(BBox box, double score, int class_id = 0,
                       BoxSigma sigma = BoxSigma::uniform(1.0)) {
  UncertainDetection d;
  d.box = box;
  d.mean_box = box;
  d.sigma = sigma;
  d.score = score;
  d.score_mean = score;
  d.class_id = class_id;
  return d;
}

AssociationTrack track(BBox box, int class_id = 0) {
  return {{box, BoxSigma::uniform(1.0)}, {}, class_id};
}

double assignment_cost(const RowMatrix& c, const Assignment& a) {
  double total = 0.0;
  for (const auto& [i, j] : a.matches) {
    total += c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return total;
}

}  // namespace

TEST(Hungarian, EmptyMatrices) {
  const auto a = hungarian(RowMatrix(0, 3));
  EXPECT_TRUE(a.matches.empty());
  EXPECT_EQ(a.unmatched_cols.size(), 3u);
  const auto b = hungarian(RowMatrix(2, 0));
  EXPECT_EQ(b.unmatched_rows.size(), 2u);
}

TEST(Hungarian, KnownSquare) {
  RowMatrix c(3, 3);
  c << 4, 1, 3, 2, 0, 5, 3, 2, 2;
  const auto a = hungarian(c);
  EXPECT_DOUBLE_EQ(assignment_cost(c, a), 5.0);
  ASSERT_EQ(a.matches.size(), 3u);
  EXPECT_EQ(a.matches[0], (IndexPair{0, 1}));
  EXPECT_EQ(a.matches[1], (IndexPair{1, 0}));
  EXPECT_EQ(a.matches[2], (IndexPair{2, 2}));
}

TEST(Hungarian, MaxCostDissolvesPairs) {
  RowMatrix c(2, 2);
  c << 0.1, 5.0, 5.0, 0.9;
  const auto a = hungarian(c, 0.5);
  ASSERT_EQ(a.matches.size(), 1u);
  EXPECT_EQ(a.matches[0], (IndexPair{0, 0}));
  EXPECT_EQ(a.unmatched_rows, (std::vector<std::size_t>{1}));
  EXPECT_EQ(a.unmatched_cols, (std::vector<std::size_t>{1}));
}

TEST(Hungarian, RejectsNonFinite) {
  RowMatrix c(1, 1);
  c << std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(hungarian(c), std::invalid_argument);
}

TEST(HungarianOracle, MatchesBruteForce) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = dim(rng), m = dim(rng);
    RowMatrix c(n, m);
    std::vector<std::vector<double>> v(n, std::vector<double>(m));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        // Integer-valued costs exercise ties.
        c(i, j) = trial % 3 == 0 ? std::floor(u(rng) / 3.0) : u(rng);
        v[i][j] = c(i, j);
      }
    }
    const auto a = hungarian(c);
    ASSERT_EQ(a.matches.size(), static_cast<std::size_t>(std::min(n, m)));
    EXPECT_NEAR(assignment_cost(c, a), oracle::brute_min_assignment(v), 1e-9);
    std::set<std::size_t> rows, cols;
    for (const auto& [i, j] : a.matches) {
      EXPECT_TRUE(rows.insert(i).second);
      EXPECT_TRUE(cols.insert(j).second);
    }
    EXPECT_EQ(rows.size() + a.unmatched_rows.size(), static_cast<std::size_t>(n));
    EXPECT_EQ(cols.size() + a.unmatched_cols.size(), static_cast<std::size_t>(m));
  }
}

TEST(PseudoDepth, DistanceFromBottom) {
  EXPECT_DOUBLE_EQ(pseudo_depth({100, 1000, 20, 40}, 1080), 60.0);
}

TEST(Binning, ScoreBinsHighFirstWithFloor) {
  const std::vector<UncertainDetection> d{det({0, 0, 1, 1}, 0.9),
                                          det({0, 0, 1, 1}, 0.3),
                                          det({0, 0, 1, 1}, 0.05),
                                          det({0, 0, 1, 1}, 0.6)};
  const std::vector<BinningStrategy> s{{RankQuantity::score, {0.6}}};
  const auto bins = bin_detections(d, s, 0.1, 1080);
  ASSERT_EQ(bins.size(), 2u);
  EXPECT_EQ(bins[0], (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(bins[1], (std::vector<std::size_t>{1}));
}

TEST(Binning, NestedStrategiesKeepEmptyBins) {
  // Pseudo-depths: 1080 - bottom.
  const std::vector<UncertainDetection> d{det({0, 1000, 10, 10}, 0.9),
                                          det({0, 500, 10, 10}, 0.9),
                                          det({0, 1000, 10, 10}, 0.3)};
  const std::vector<BinningStrategy> s{{RankQuantity::score, {0.6}},
                                       {RankQuantity::pseudo_depth, {300}}};
  const auto bins = bin_detections(d, s, 0.1, 1080);
  ASSERT_EQ(bins.size(), 4u);
  EXPECT_EQ(bins[0], (std::vector<std::size_t>{0}));
  EXPECT_EQ(bins[1], (std::vector<std::size_t>{1}));
  EXPECT_EQ(bins[2], (std::vector<std::size_t>{2}));
  EXPECT_TRUE(bins[3].empty());
}

TEST(Binning, PartitionProperty) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> s(0.0, 1.0), y(0.0, 1080.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<UncertainDetection> d;
    for (int k = 0; k < 20; ++k) d.push_back(det({0, y(rng), 10, 20}, s(rng)));
    const std::vector<BinningStrategy> strat{
        {RankQuantity::score, {0.3, 0.6}},
        {RankQuantity::pseudo_depth, {300, 600}}};
    const auto bins = bin_detections(d, strat, 0.1, 1080);
    EXPECT_EQ(bins.size(), 9u);
    std::vector<int> seen(d.size(), 0);
    for (const auto& b : bins) {
      for (auto j : b) ++seen[j];
    }
    for (std::size_t j = 0; j < d.size(); ++j) {
      EXPECT_EQ(seen[j], d[j].score >= 0.1 ? 1 : 0);
    }
  }
}

TEST(CascadeConfig, StageThresholdsRepeatLast) {
  CascadeConfig cfg;
  EXPECT_EQ(cfg.stage_threshold(0), 0.2);
  EXPECT_EQ(cfg.stage_threshold(1), 0.5);
  EXPECT_EQ(cfg.stage_threshold(7), 0.5);
  cfg.match_thresholds = {1.5};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Cascade, HighBinMatchesFirst) {
  const std::vector<AssociationTrack> t{track({100, 100, 40, 80})};
  const std::vector<UncertainDetection> d{det({102, 100, 40, 80}, 0.3),
                                          det({104, 100, 40, 80}, 0.9)};
  const auto r = cascade_associate(t, d, {}, CascadeConfig{}, 1080);
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0], (IndexPair{0, 1}));
  EXPECT_EQ(r.unmatched_detections_per_bin[1], (std::vector<std::size_t>{0}));
  EXPECT_TRUE(r.new_track_candidates.empty());
}

TEST(Cascade, StageThresholdRejectsWeakOverlap) {
  // IoU of 40x80 boxes shifted by 20 in x: 20*80 / (2*3200 - 1600) = 1/3.
  const std::vector<AssociationTrack> t{track({100, 100, 40, 80})};
  const std::vector<UncertainDetection> high{det({120, 100, 40, 80}, 0.9)};
  EXPECT_EQ(cascade_associate(t, high, {}, CascadeConfig{}, 1080).matches.size(),
            1u);
  const std::vector<UncertainDetection> low{det({120, 100, 40, 80}, 0.3)};
  const auto r = cascade_associate(t, low, {}, CascadeConfig{}, 1080);
  EXPECT_TRUE(r.matches.empty());
  EXPECT_EQ(r.unmatched_tracks, (std::vector<std::size_t>{0}));
}

TEST(Cascade, LeftoverDetectionsCarryForward) {
  // Detection 0 (high) is unmatched in stage 0 because no track overlaps it
  // enough. It stays available in stage 1.
  const std::vector<AssociationTrack> t{track({500, 500, 40, 80})};
  const std::vector<UncertainDetection> d{det({100, 100, 40, 80}, 0.9),
                                          det({500, 500, 40, 80}, 0.3)};
  const auto r = cascade_associate(t, d, {}, CascadeConfig{}, 1080);
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0], (IndexPair{0, 1}));
  EXPECT_EQ(r.new_track_candidates, (std::vector<std::size_t>{0}));
}

TEST(Cascade, NewTracksOnlyFromFirstBinUnlessConfigured) {
  const std::vector<UncertainDetection> d{det({100, 100, 40, 80}, 0.55),
                                          det({500, 100, 40, 80}, 0.95)};
  CascadeConfig cfg;
  cfg.new_track_score_thresh = 0.5;
  auto r = cascade_associate({}, d, {}, cfg, 1080);
  EXPECT_EQ(r.new_track_candidates, (std::vector<std::size_t>{1}));
  cfg.confirm_from_all_bins = true;
  r = cascade_associate({}, d, {}, cfg, 1080);
  EXPECT_EQ(r.new_track_candidates, (std::vector<std::size_t>{0, 1}));
}

TEST(Cascade, PhaseDisambiguatorRequiresPhases) {
  CascadeConfig cfg;
  cfg.disambiguator = DisambiguatorKind::phase;
  const std::vector<UncertainDetection> d{det({100, 100, 40, 80}, 0.9)};
  EXPECT_THROW(cascade_associate({}, d, {}, cfg, 1080), std::invalid_argument);
}

TEST(Cascade, PhaseDisambiguatorResolvesAmbiguity) {
  // One track overlaps two detections almost equally; the detection whose
  // phase matches the track's should win even though its IoU is lower.
  std::vector<AssociationTrack> t{track({100, 100, 40, 80})};
  t[0].phase = {true, 1.0};
  std::vector<UncertainDetection> d{det({102, 100, 40, 80}, 0.9),
                                    det({101, 100, 40, 80}, 0.9)};
  for (auto& x : d) x.sigma = BoxSigma::uniform(5.0);
  const std::vector<PhaseHypothesis> dp{{true, 1.0}, {true, 4.0}};
  CascadeConfig cfg;
  cfg.error_mode = ErrorMode::additive;
  const auto plain = cascade_associate(t, d, dp, cfg, 1080);
  ASSERT_EQ(plain.matches.size(), 1u);
  EXPECT_EQ(plain.matches[0], (IndexPair{0, 1}));
  cfg.disambiguator = DisambiguatorKind::phase;
  const auto r = cascade_associate(t, d, dp, cfg, 1080);
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0], (IndexPair{0, 0}));
  // Classes outside phase_classes get no phase information.
  t[0].class_id = 3;
  for (auto& x : d) x.class_id = 3;
  EXPECT_EQ(cascade_associate(t, d, dp, cfg, 1080).matches[0], (IndexPair{0, 1}));
}

TEST(CascadeProperty, OneToOneAndComplete) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> c(0.0, 400.0), s(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<AssociationTrack> t;
    std::vector<UncertainDetection> d;
    for (int k = 0; k < 1 + trial % 7; ++k) t.push_back(track({c(rng), c(rng), 60, 120}));
    for (int k = 0; k < 1 + trial % 9; ++k) {
      d.push_back(det({c(rng), c(rng), 60, 120}, s(rng)));
    }
    CascadeConfig cfg;
    cfg.disambiguator = trial % 2 ? DisambiguatorKind::size : DisambiguatorKind::none;
    const auto r = cascade_associate(t, d, {}, cfg, 1080);
    std::set<std::size_t> tr, de;
    for (const auto& [i, j] : r.matches) {
      EXPECT_TRUE(tr.insert(i).second);
      EXPECT_TRUE(de.insert(j).second);
      EXPECT_GE(d[j].score, cfg.score_floor);
    }
    EXPECT_EQ(tr.size() + r.unmatched_tracks.size(), t.size());
    std::size_t unmatched = 0;
    for (const auto& b : r.unmatched_detections_per_bin) unmatched += b.size();
    const auto eligible = std::count_if(d.begin(), d.end(), [&](const auto& x) {
      return x.score >= cfg.score_floor;
    });
    EXPECT_EQ(de.size() + unmatched, static_cast<std::size_t>(eligible));
  }
}
