#include "umot/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace umot {

namespace {

// Shortest-augmenting-path Hungarian with potentials; requires rows <= cols.
// Returns the column assigned to every row.
std::vector<std::size_t> solve_wide(const RowMatrix& a) {
  const auto n = static_cast<std::size_t>(a.rows());
  const auto m = static_cast<std::size_t>(a.cols());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(static_cast<Eigen::Index>(i0 - 1),
                             static_cast<Eigen::Index>(j - 1)) -
                           u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

Assignment hungarian(const RowMatrix& cost, double max_cost) {
  if (!cost.allFinite()) {
    throw std::invalid_argument("hungarian: costs must be finite");
  }
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  std::vector<IndexPair> pairs;
  if (n > 0 && m > 0) {
    if (n <= m) {
      const auto r2c = solve_wide(cost);
      for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(i, r2c[i]);
    } else {
      const RowMatrix t = cost.transpose();
      const auto c2r = solve_wide(t);
      for (std::size_t j = 0; j < m; ++j) pairs.emplace_back(c2r[j], j);
      std::sort(pairs.begin(), pairs.end());
    }
  }

  Assignment out;
  std::vector<char> row_used(n, 0), col_used(m, 0);
  for (const auto& [i, j] : pairs) {
    if (cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) >
        max_cost) {
      continue;
    }
    out.matches.emplace_back(i, j);
    row_used[i] = 1;
    col_used[j] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!row_used[i]) out.unmatched_rows.push_back(i);
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (!col_used[j]) out.unmatched_cols.push_back(j);
  }
  return out;
}

double CascadeConfig::stage_threshold(std::size_t stage) const {
  if (match_thresholds.empty()) return 0.0;
  return match_thresholds[std::min(stage, match_thresholds.size() - 1)];
}

bool CascadeConfig::phase_eligible(int class_id) const {
  return phase_classes.empty() ||
         std::find(phase_classes.begin(), phase_classes.end(), class_id) !=
             phase_classes.end();
}

void CascadeConfig::validate() const {
  for (const auto& s : binning) {
    for (std::size_t k = 1; k < s.edges.size(); ++k) {
      if (!(s.edges[k] > s.edges[k - 1])) {
        throw std::invalid_argument("cascade: bin edges must be increasing");
      }
    }
  }
  for (double t : match_thresholds) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw std::invalid_argument("cascade: match thresholds must lie in [0, 1]");
    }
  }
  if (!(score_floor >= 0.0 && score_floor <= 1.0) ||
      !(new_track_score_thresh >= 0.0 && new_track_score_thresh <= 1.0)) {
    throw std::invalid_argument("cascade: score thresholds must lie in [0, 1]");
  }
}

double pseudo_depth(const BBox& box, double image_height) {
  return image_height - box.bottom();
}

namespace {

std::vector<std::vector<std::size_t>> split(
    const std::vector<std::size_t>& members,
    std::span<const UncertainDetection> dets, const BinningStrategy& s,
    double image_height) {
  const std::size_t nbins = s.edges.size() + 1;
  std::vector<std::vector<std::size_t>> bins(nbins);
  for (auto idx : members) {
    if (s.quantity == RankQuantity::score) {
      const double v = dets[idx].score;
      // Number of edges at or below the score; highest scores come first.
      const auto above = static_cast<std::size_t>(
          std::upper_bound(s.edges.begin(), s.edges.end(), v) -
          s.edges.begin());
      bins[nbins - 1 - above].push_back(idx);
    } else {
      const double v = pseudo_depth(dets[idx].box, image_height);
      const auto below = static_cast<std::size_t>(
          std::upper_bound(s.edges.begin(), s.edges.end(), v) -
          s.edges.begin());
      bins[below].push_back(idx);
    }
  }
  return bins;
}

}  // namespace

std::vector<std::vector<std::size_t>> bin_detections(
    std::span<const UncertainDetection> dets,
    std::span<const BinningStrategy> strategies, double score_floor,
    double image_height) {
  std::vector<std::size_t> all;
  for (std::size_t j = 0; j < dets.size(); ++j) {
    if (dets[j].score >= score_floor) all.push_back(j);
  }
  std::vector<std::vector<std::size_t>> bins{all};
  for (const auto& s : strategies) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& b : bins) {
      for (auto& sub : split(b, dets, s, image_height)) {
        next.push_back(std::move(sub));
      }
    }
    bins = std::move(next);
  }
  return bins;
}

AssociationResult cascade_associate(std::span<const AssociationTrack> tracks,
                                    std::span<const UncertainDetection> dets,
                                    std::span<const PhaseHypothesis> det_phases,
                                    const CascadeConfig& cfg,
                                    double image_height) {
  if (cfg.disambiguator == DisambiguatorKind::phase &&
      det_phases.size() != dets.size()) {
    throw std::invalid_argument(
        "cascade_associate: one phase hypothesis per detection required");
  }
  const auto bins =
      bin_detections(dets, cfg.binning, cfg.score_floor, image_height);

  std::vector<int> bin_of(dets.size(), -1);
  for (std::size_t r = 0; r < bins.size(); ++r) {
    for (auto j : bins[r]) bin_of[j] = static_cast<int>(r);
  }

  AssociationResult result;
  std::vector<std::size_t> open_tracks(tracks.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) open_tracks[i] = i;
  std::vector<std::size_t> carried;

  for (std::size_t r = 0; r < bins.size(); ++r) {
    std::vector<std::size_t> pool = carried;
    pool.insert(pool.end(), bins[r].begin(), bins[r].end());
    std::sort(pool.begin(), pool.end());
    if (open_tracks.empty() || pool.empty()) {
      carried = std::move(pool);
      continue;
    }

    std::vector<UncertainBox> tb, db;
    for (auto i : open_tracks) tb.push_back(tracks[i].box);
    for (auto j : pool) db.push_back({dets[j].box, dets[j].sigma});
    UncertainIoUMatrix m = iou_matrix_with_errors(tb, db, cfg.error_mode);

    if (cfg.disambiguator == DisambiguatorKind::phase) {
      std::vector<PhaseHypothesis> tp, dp;
      for (auto i : open_tracks) {
        tp.push_back(cfg.phase_eligible(tracks[i].class_id) ? tracks[i].phase
                                                            : PhaseHypothesis{});
      }
      for (auto j : pool) {
        dp.push_back(cfg.phase_eligible(dets[j].class_id) ? det_phases[j]
                                                          : PhaseHypothesis{});
      }
      m = apply_disambiguation(m, phase_disambiguator(tp, dp),
                               cfg.ambiguity_floor);
    } else if (cfg.disambiguator == DisambiguatorKind::size) {
      std::vector<BBox> tboxes, dboxes;
      for (const auto& u : tb) tboxes.push_back(u.box);
      for (const auto& u : db) dboxes.push_back(u.box);
      m = apply_disambiguation(m, size_disambiguator(tboxes, dboxes),
                               cfg.ambiguity_floor);
    }

    const double thr = cfg.stage_threshold(r);
    const RowMatrix cost = RowMatrix::Ones(m.rows(), m.cols()) - m.iou;
    const Assignment a = hungarian(cost);

    std::vector<char> track_done(open_tracks.size(), 0);
    std::vector<char> det_done(pool.size(), 0);
    for (const auto& [ti, dj] : a.matches) {
      const double v =
          m.iou(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(dj));
      if (!(v > 0.0) || v < thr) continue;
      result.matches.emplace_back(open_tracks[ti], pool[dj]);
      track_done[ti] = 1;
      det_done[dj] = 1;
    }
    std::vector<std::size_t> still_open;
    for (std::size_t k = 0; k < open_tracks.size(); ++k) {
      if (!track_done[k]) still_open.push_back(open_tracks[k]);
    }
    open_tracks = std::move(still_open);
    carried.clear();
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (!det_done[k]) carried.push_back(pool[k]);
    }
  }

  std::sort(result.matches.begin(), result.matches.end());
  result.unmatched_tracks = open_tracks;
  result.unmatched_detections_per_bin.assign(bins.size(), {});
  for (auto j : carried) {
    result.unmatched_detections_per_bin[static_cast<std::size_t>(bin_of[j])]
        .push_back(j);
  }
  for (std::size_t r = 0; r < bins.size(); ++r) {
    if (r > 0 && !cfg.confirm_from_all_bins) break;
    for (auto j : result.unmatched_detections_per_bin[r]) {
      if (dets[j].score >= cfg.new_track_score_thresh) {
        result.new_track_candidates.push_back(j);
      }
    }
  }
  std::sort(result.new_track_candidates.begin(),
            result.new_track_candidates.end());
  return result;
}

}  // namespace umot
