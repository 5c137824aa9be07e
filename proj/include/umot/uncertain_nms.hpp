#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "umot/geometry.hpp"

namespace umot {

// One pre-NMS detector proposal.
struct DetectionCandidate {
  BBox box;
  double score = 0.0;
  int class_id = 0;
};

// A post-NMS detection together with the spread of the candidate cluster it
// was selected from.
struct UncertainDetection {
  BBox box;             // point estimate (keeper, or cluster mean if enabled)
  BoxSigma sigma;       // per-coordinate sample std, floored
  double score = 0.0;   // keeper score
  double score_mean = 0.0;
  double score_sigma = 0.0;
  int class_id = 0;
  std::size_t cluster_size = 1;
  BBox mean_box;
};

struct NmsConfig {
  double iou_thresh = 0.7;
  double score_thresh = 0.1;
  double sigma_floor = 1.0;
  // Report the cluster mean as the point estimate instead of the keeper.
  bool use_cluster_mean = false;

  void validate() const;
};

struct ClusterStatistics {
  BBox mean_box;
  BoxSigma sigma;  // unbiased (n-1) sample std; zero for n == 1
  double score_mean = 0.0;
  double score_sigma = 0.0;
};

/// Sample mean and unbiased standard deviation of every box coordinate and
/// of the score. Throws std::invalid_argument on an empty cluster.
ClusterStatistics cluster_statistics(
    std::span<const DetectionCandidate> cluster);

/// Greedy per-class NMS. Each kept box absorbs the same-class boxes it
/// suppresses (IoU >= iou_thresh) into its cluster, and the cluster's sample
/// statistics are reported alongside the keeper. Candidates scoring below
/// score_thresh never enter a cluster. Output is ordered by descending keeper
/// score.
std::vector<UncertainDetection> suppress_with_statistics(
    std::span<const DetectionCandidate> candidates, const NmsConfig& cfg);

std::vector<UncertainDetection> suppress_with_statistics(
    std::span<const DetectionCandidate> candidates, double nms_iou_thresh,
    double score_thresh, double sigma_floor);

}  // namespace umot
