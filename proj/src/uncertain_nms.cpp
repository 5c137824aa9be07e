#include "umot/uncertain_nms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace umot {

void NmsConfig::validate() const {
  if (!(iou_thresh >= 0.0 && iou_thresh <= 1.0)) {
    throw std::invalid_argument("nms: iou_thresh must lie in [0, 1]");
  }
  if (!(score_thresh >= 0.0 && score_thresh <= 1.0)) {
    throw std::invalid_argument("nms: score_thresh must lie in [0, 1]");
  }
  if (!(sigma_floor > 0.0) || !std::isfinite(sigma_floor)) {
    throw std::invalid_argument("nms: sigma_floor must be positive");
  }
}

namespace {

struct MeanStd {
  double mean;
  double std;
};

// Values are sorted before accumulation so the result does not depend on the
// order of cluster members.
MeanStd sample_stats(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

ClusterStatistics cluster_statistics(
    std::span<const DetectionCandidate> cluster) {
  if (cluster.empty()) {
    throw std::invalid_argument("cluster_statistics: empty cluster");
  }
  auto column = [&](auto get) {
    std::vector<double> v;
    v.reserve(cluster.size());
    for (const auto& c : cluster) v.push_back(get(c));
    return sample_stats(std::move(v));
  };
  const auto x = column([](const DetectionCandidate& c) { return c.box.x; });
  const auto y = column([](const DetectionCandidate& c) { return c.box.y; });
  const auto w = column([](const DetectionCandidate& c) { return c.box.w; });
  const auto h = column([](const DetectionCandidate& c) { return c.box.h; });
  const auto s = column([](const DetectionCandidate& c) { return c.score; });

  ClusterStatistics out;
  out.mean_box = {x.mean, y.mean, w.mean, h.mean};
  out.sigma = {x.std, y.std, w.std, h.std};
  out.score_mean = s.mean;
  out.score_sigma = s.std;
  return out;
}

std::vector<UncertainDetection> suppress_with_statistics(
    std::span<const DetectionCandidate> candidates, const NmsConfig& cfg) {
  cfg.validate();

  std::vector<std::size_t> order;
  order.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].score >= cfg.score_thresh) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].score > candidates[b].score;
  });

  std::vector<char> taken(candidates.size(), 0);
  std::vector<UncertainDetection> out;
  std::vector<DetectionCandidate> cluster;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t k = order[oi];
    if (taken[k]) continue;
    taken[k] = 1;
    const auto& keeper = candidates[k];
    cluster.clear();
    cluster.push_back(keeper);
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const std::size_t j = order[oj];
      if (taken[j] || candidates[j].class_id != keeper.class_id) continue;
      if (iou(keeper.box, candidates[j].box) >= cfg.iou_thresh) {
        taken[j] = 1;
        cluster.push_back(candidates[j]);
      }
    }

    const auto stats = cluster_statistics(cluster);
    UncertainDetection det;
    det.box = cfg.use_cluster_mean ? stats.mean_box : keeper.box;
    det.sigma = {std::max(stats.sigma.x, cfg.sigma_floor),
                 std::max(stats.sigma.y, cfg.sigma_floor),
                 std::max(stats.sigma.w, cfg.sigma_floor),
                 std::max(stats.sigma.h, cfg.sigma_floor)};
    det.score = keeper.score;
    det.score_mean = stats.score_mean;
    det.score_sigma = stats.score_sigma;
    det.class_id = keeper.class_id;
    det.cluster_size = cluster.size();
    det.mean_box = stats.mean_box;
    out.push_back(det);
  }
  return out;
}

std::vector<UncertainDetection> suppress_with_statistics(
    std::span<const DetectionCandidate> candidates, double nms_iou_thresh,
    double score_thresh, double sigma_floor) {
  NmsConfig cfg;
  cfg.iou_thresh = nms_iou_thresh;
  cfg.score_thresh = score_thresh;
  cfg.sigma_floor = sigma_floor;
  return suppress_with_statistics(candidates, cfg);
}

}  // namespace umot
