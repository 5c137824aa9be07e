#include "umot/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace umot {

void TrackerConfig::validate() const {
  nms.validate();
  kalman.validate();
  cascade.validate();
  phase.validate();
  if (max_age < 1) throw std::invalid_argument("tracker: max_age must be >= 1");
  if (n_init < 1) throw std::invalid_argument("tracker: n_init must be >= 1");
  if (!(fps > 0.0)) throw std::invalid_argument("tracker: fps must be positive");
  if (!(parametric_r_weight > 0.0)) {
    throw std::invalid_argument("tracker: parametric_r_weight must be positive");
  }
}

Tracker::Tracker(TrackerConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

namespace {

KalmanState warp_state(const KalmanState& s, const Homography& hom,
                       CmcMode mode, bool& degenerate) {
  degenerate = false;
  if (mode == CmcMode::homographic) {
    try {
      return apply_homographic(s, hom);
    } catch (const DegenerateHomography&) {
      degenerate = true;
    }
  }
  return apply_affine(s, hom);
}

}  // namespace

void Tracker::compensate(const Homography& hom, int frame_index) {
  bool any_degenerate = false;
  for (auto& tr : tracks_) {
    bool degenerate = false;
    tr.kstate = warp_state(tr.kstate, hom, cfg_.cmc_mode, degenerate);
    any_degenerate = any_degenerate || degenerate;

    KalmanState meas;
    const BBox& b = tr.last_measurement;
    meas.mean << b.x, b.y, b.w, b.h, 0.0, 0.0, 0.0, 0.0;
    meas = warp_state(meas, hom, cfg_.cmc_mode, degenerate);
    tr.last_measurement = meas.box();
  }
  if (any_degenerate) {
    warnings_.push_back("frame " + std::to_string(frame_index) +
                        ": degenerate homography, fell back to affine CMC");
  }
}

std::vector<PhaseHypothesis> Tracker::detection_phases(
    std::span<const UncertainDetection> dets, double t) const {
  std::vector<PhaseHypothesis> out(dets.size());
  for (std::size_t j = 0; j < dets.size(); ++j) {
    double best = cfg_.cascade.ambiguity_floor;
    const Track* source = nullptr;
    for (const auto& tr : tracks_) {
      if (tr.time_since_update != 0) continue;  // not matched last frame
      const double v = iou(tr.last_measurement, dets[j].box);
      if (v > best) {
        best = v;
        source = &tr;
      }
    }
    if (source != nullptr) out[j] = hypothesis(source->phase, t);
  }
  return out;
}

BoxSigma Tracker::observation_sigma(const Track& tr,
                                    const UncertainDetection& det) const {
  if (cfg_.use_measured_r) return det.sigma;
  const double s =
      std::max(cfg_.parametric_r_weight * std::abs(tr.kstate.mean(3)), 1e-6);
  return BoxSigma::uniform(s);
}

FrameOutput Tracker::step(int frame_index,
                          std::span<const DetectionCandidate> candidates,
                          const std::optional<Homography>& homography) {
  if (last_frame_ && frame_index <= *last_frame_) {
    throw std::invalid_argument("tracker: frame index must increase");
  }
  last_frame_ = frame_index;
  const double t = static_cast<double>(frame_index) / cfg_.fps;

  const auto dets = suppress_with_statistics(candidates, cfg_.nms);

  // Correct the previous posteriors into the current camera frame first.
  if (cfg_.cmc_mode != CmcMode::off) {
    if (homography) {
      compensate(*homography, frame_index);
    } else {
      warnings_.push_back("frame " + std::to_string(frame_index) +
                          ": no homography, CMC skipped");
    }
  }

  std::vector<PhaseHypothesis> det_phases;
  if (cfg_.cascade.disambiguator == DisambiguatorKind::phase) {
    det_phases = detection_phases(dets, t);
  }

  std::vector<AssociationTrack> views;
  views.reserve(tracks_.size());
  for (auto& tr : tracks_) {
    tr.kstate = predict(tr.kstate, cfg_.kalman);
    tr.predicted_box = tr.kstate.box();
    views.push_back({{tr.predicted_box, tr.last_sigma},
                     hypothesis(tr.phase, t),
                     tr.class_id});
  }

  const AssociationResult assoc = cascade_associate(
      views, dets, det_phases, cfg_.cascade, cfg_.image_height);

  std::vector<char> matched(tracks_.size(), 0);
  for (const auto& [ti, dj] : assoc.matches) {
    Track& tr = tracks_[ti];
    const UncertainDetection& det = dets[dj];
    matched[ti] = 1;
    tr.phase.observe(det.box.w, det.sigma.w, t);
    tr.kstate =
        update(tr.kstate, det.box, observation_sigma(tr, det), cfg_.kalman);
    tr.last_sigma = det.sigma;
    tr.last_measurement = det.box;
    tr.last_score = det.score;
    tr.time_since_update = 0;
    ++tr.hits;
    if (tr.status == TrackStatus::lost) {
      tr.status = TrackStatus::confirmed;
    } else if (tr.status == TrackStatus::tentative && tr.hits >= cfg_.n_init) {
      tr.status = TrackStatus::confirmed;
    }
  }
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    Track& tr = tracks_[i];
    ++tr.age;
    if (matched[i]) continue;
    ++tr.time_since_update;
    tr.hits = 0;
    switch (tr.status) {
      case TrackStatus::tentative:
        tr.status = TrackStatus::removed;
        break;
      case TrackStatus::confirmed:
        tr.status = TrackStatus::lost;
        break;
      case TrackStatus::lost:
        if (tr.time_since_update > cfg_.max_age) tr.status = TrackStatus::removed;
        break;
      case TrackStatus::removed:
        break;
    }
  }
  std::erase_if(tracks_, [](const Track& tr) {
    return tr.status == TrackStatus::removed;
  });

  for (auto dj : assoc.new_track_candidates) {
    const UncertainDetection& det = dets[dj];
    Track tr;
    tr.id = next_id_++;
    tr.kstate = initiate(det, cfg_.kalman);
    tr.phase = PhaseState(cfg_.phase);
    tr.phase.observe(det.box.w, det.sigma.w, t);
    tr.status =
        cfg_.n_init <= 1 ? TrackStatus::confirmed : TrackStatus::tentative;
    tr.hits = 1;
    tr.last_score = det.score;
    tr.class_id = det.class_id;
    tr.last_sigma = det.sigma;
    tr.last_measurement = det.box;
    tr.predicted_box = det.box;
    tracks_.push_back(std::move(tr));
  }

  FrameOutput out;
  out.frame = frame_index;
  for (const auto& tr : tracks_) {
    if (tr.status != TrackStatus::confirmed || tr.time_since_update != 0) {
      continue;
    }
    out.entries.push_back(
        {tr.id, tr.box(), tr.last_score, tr.class_id, tr.last_sigma});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const FrameEntry& a, const FrameEntry& b) {
              return a.track_id < b.track_id;
            });
  return out;
}

std::vector<FrameOutput> run_sequence(
    const std::vector<std::vector<DetectionCandidate>>& frames,
    const std::vector<std::optional<Homography>>& homographies,
    const TrackerConfig& cfg, int first_frame) {
  if (!homographies.empty() && homographies.size() != frames.size()) {
    throw std::invalid_argument(
        "run_sequence: homography stream is not frame-aligned");
  }
  Tracker tracker(cfg);
  std::vector<FrameOutput> out;
  out.reserve(frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const std::optional<Homography> hom =
        homographies.empty() ? std::nullopt : homographies[k];
    out.push_back(
        tracker.step(first_frame + static_cast<int>(k), frames[k], hom));
  }
  return out;
}

}  // namespace umot
