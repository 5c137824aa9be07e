#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "umot/disambiguation.hpp"
#include "umot/geometry.hpp"
#include "umot/uncertain_nms.hpp"

namespace umot {

using IndexPair = std::pair<std::size_t, std::size_t>;

struct Assignment {
  std::vector<IndexPair> matches;  // (row, col), sorted by row
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;
};

/// Minimum-total-cost one-to-one assignment of a rectangular matrix
/// (min(rows, cols) pairs). Assigned pairs with cost > max_cost are then
/// dissolved. Throws std::invalid_argument on non-finite costs.
Assignment hungarian(const RowMatrix& cost,
                     double max_cost = std::numeric_limits<double>::infinity());

enum class RankQuantity { score, pseudo_depth };

// score bins are visited from high to low, pseudo-depth bins from near to far.
struct BinningStrategy {
  RankQuantity quantity = RankQuantity::score;
  std::vector<double> edges;  // strictly increasing; empty means one bin
};

enum class DisambiguatorKind { none, phase, size };

struct CascadeConfig {
  std::vector<BinningStrategy> binning{{RankQuantity::score, {0.6}}};
  double score_floor = 0.1;
  // Minimum IoU per stage; stages past the end reuse the last value.
  std::vector<double> match_thresholds{0.2, 0.5};
  DisambiguatorKind disambiguator = DisambiguatorKind::none;
  bool confirm_from_all_bins = false;
  double new_track_score_thresh = 0.7;
  ErrorMode error_mode = ErrorMode::literal;
  double ambiguity_floor = kDefaultAmbiguityFloor;
  // Classes eligible for phase disambiguation; empty means every class.
  std::vector<int> phase_classes{0};

  double stage_threshold(std::size_t stage) const;
  bool phase_eligible(int class_id) const;
  void validate() const;
};

// Distance of the box bottom edge from the image bottom.
double pseudo_depth(const BBox& box, double image_height);

/// Priority-ordered detection bins. Strategies compose by nesting: every bin
/// of the first strategy is subdivided by the second, and so on. Detections
/// scoring below score_floor are left out. Empty bins are kept so bin
/// positions line up with stage thresholds.
std::vector<std::vector<std::size_t>> bin_detections(
    std::span<const UncertainDetection> dets,
    std::span<const BinningStrategy> strategies, double score_floor,
    double image_height);

struct AssociationTrack {
  UncertainBox box;  // predicted box and its uncertainty
  PhaseHypothesis phase;
  int class_id = 0;
};

struct AssociationResult {
  std::vector<IndexPair> matches;  // (track, detection)
  std::vector<std::size_t> unmatched_tracks;
  std::vector<std::vector<std::size_t>> unmatched_detections_per_bin;
  std::vector<std::size_t> new_track_candidates;
};

/// Cascade association. For every bin in priority order, the still-unmatched
/// tracks are matched against that bin's detections plus the detections left
/// over from earlier stages, on cost 1 - IoU after the configured
/// disambiguation; matches below the stage threshold are rejected.
/// `det_phases` may be empty when the phase disambiguator is unused.
AssociationResult cascade_associate(std::span<const AssociationTrack> tracks,
                                    std::span<const UncertainDetection> dets,
                                    std::span<const PhaseHypothesis> det_phases,
                                    const CascadeConfig& cfg,
                                    double image_height);

}  // namespace umot
