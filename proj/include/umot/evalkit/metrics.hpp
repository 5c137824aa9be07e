#pragma once

#include <array>
#include <span>

#include "umot/evalkit/mot_format.hpp"

namespace umot::eval {

// All percentages are in [0, 100] except MOTA, which is unbounded below.
struct MetricReport {
  double hota = 0.0;
  double deta = 0.0;
  double assa = 0.0;
  double loca = 0.0;
  double mota = 0.0;
  double idf1 = 0.0;
  int idsw = 0;
  int fp = 0;
  int fn = 0;
  int tp = 0;
  int gt_count = 0;
};

struct ClearResult {
  double mota = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int idsw = 0;
  int gt_count = 0;
};

struct IdentityResult {
  double idf1 = 0.0;
  int idtp = 0;
  int idfp = 0;
  int idfn = 0;
};

inline constexpr int kHotaAlphaCount = 19;

struct HotaResult {
  double hota = 0.0;
  double deta = 0.0;
  double assa = 0.0;
  double loca = 0.0;
  // Per localization threshold alpha = 0.05, 0.10, ..., 0.95 (fractions).
  std::array<double, kHotaAlphaCount> hota_alpha{};
  std::array<double, kHotaAlphaCount> deta_alpha{};
  std::array<double, kHotaAlphaCount> assa_alpha{};
};

double hota_alpha(int k);

/// CLEAR-MOT. Per frame, a ground-truth object keeps its last matched
/// prediction id when that prediction is present with IoU >= thresh; the
/// remaining objects are matched by Hungarian assignment over IoU >= thresh,
/// maximizing the number of matches, then the total IoU. An identity switch
/// is a match whose prediction id differs from the object's previous one.
/// MOTA = 1 - (FN + FP + IDSW) / max(1, GT), in percent.
ClearResult clear_mot(std::span<const MotRecord> gt,
                      std::span<const MotRecord> pred, double thresh = 0.5);

/// IDF1 = 2 IDTP / (|gt| + |pred|) under the identity bipartite matching
/// that maximizes IDTP (frames with IoU >= thresh), in percent.
IdentityResult identity_metrics(std::span<const MotRecord> gt,
                                std::span<const MotRecord> pred,
                                double thresh = 0.5);

/// HOTA, DetA, AssA and LocA in percent, averaged over the 19 alpha values.
/// Each frame uses one Hungarian matching maximizing the global alignment
/// score times IoU; matches below alpha are discarded per alpha.
HotaResult hota(std::span<const MotRecord> gt, std::span<const MotRecord> pred);

MetricReport evaluate(std::span<const MotRecord> gt,
                      std::span<const MotRecord> pred, double thresh = 0.5);

}  // namespace umot::eval
