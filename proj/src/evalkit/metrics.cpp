#include "umot/evalkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "umot/association.hpp"

namespace umot::eval {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Records of one frame, with ids remapped to dense indices.
struct FrameView {
  std::vector<int> gt_ids;
  std::vector<BBox> gt_boxes;
  std::vector<int> pred_ids;
  std::vector<BBox> pred_boxes;
};

struct Sequence {
  std::vector<FrameView> frames;
  int n_gt_ids = 0;
  int n_pred_ids = 0;
};

Sequence index_sequence(std::span<const MotRecord> gt,
                        std::span<const MotRecord> pred) {
  std::map<int, std::size_t> frame_pos;
  for (const auto& r : gt) frame_pos.emplace(r.frame, 0);
  for (const auto& r : pred) frame_pos.emplace(r.frame, 0);
  std::size_t k = 0;
  for (auto& [f, pos] : frame_pos) pos = k++;

  Sequence seq;
  seq.frames.resize(frame_pos.size());
  std::map<int, int> gmap, pmap;
  for (const auto& r : gt) {
    const auto [it, fresh] = gmap.emplace(r.id, static_cast<int>(gmap.size()));
    auto& fv = seq.frames[frame_pos[r.frame]];
    fv.gt_ids.push_back(it->second);
    fv.gt_boxes.push_back(r.box());
  }
  for (const auto& r : pred) {
    const auto [it, fresh] = pmap.emplace(r.id, static_cast<int>(pmap.size()));
    auto& fv = seq.frames[frame_pos[r.frame]];
    fv.pred_ids.push_back(it->second);
    fv.pred_boxes.push_back(r.box());
  }
  seq.n_gt_ids = static_cast<int>(gmap.size());
  seq.n_pred_ids = static_cast<int>(pmap.size());
  return seq;
}

RowMatrix similarity(const FrameView& fv) {
  RowMatrix s(static_cast<Eigen::Index>(fv.gt_boxes.size()),
              static_cast<Eigen::Index>(fv.pred_boxes.size()));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      s(i, j) = iou(fv.gt_boxes[static_cast<std::size_t>(i)],
                    fv.pred_boxes[static_cast<std::size_t>(j)]);
    }
  }
  return s;
}

}  // namespace

double hota_alpha(int k) { return 0.05 * static_cast<double>(k + 1); }

ClearResult clear_mot(std::span<const MotRecord> gt,
                      std::span<const MotRecord> pred, double thresh) {
  const Sequence seq = index_sequence(gt, pred);
  ClearResult out;
  std::vector<int> last(static_cast<std::size_t>(seq.n_gt_ids), -1);
  constexpr double kInvalid = 1e6;

  for (const auto& fv : seq.frames) {
    const RowMatrix sim = similarity(fv);
    const auto ng = fv.gt_ids.size();
    const auto np = fv.pred_ids.size();
    out.gt_count += static_cast<int>(ng);
    std::vector<char> g_done(ng, 0), p_done(np, 0);
    int matches = 0;

    for (std::size_t i = 0; i < ng; ++i) {
      const int prev = last[static_cast<std::size_t>(fv.gt_ids[i])];
      if (prev < 0) continue;
      for (std::size_t j = 0; j < np; ++j) {
        if (fv.pred_ids[j] == prev && !p_done[j] &&
            sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) >=
                thresh) {
          g_done[i] = p_done[j] = 1;
          ++matches;
          break;
        }
      }
    }

    std::vector<std::size_t> rg, rp;
    for (std::size_t i = 0; i < ng; ++i) {
      if (!g_done[i]) rg.push_back(i);
    }
    for (std::size_t j = 0; j < np; ++j) {
      if (!p_done[j]) rp.push_back(j);
    }
    if (!rg.empty() && !rp.empty()) {
      RowMatrix cost(static_cast<Eigen::Index>(rg.size()),
                     static_cast<Eigen::Index>(rp.size()));
      for (std::size_t a = 0; a < rg.size(); ++a) {
        for (std::size_t b = 0; b < rp.size(); ++b) {
          const double v = sim(static_cast<Eigen::Index>(rg[a]),
                               static_cast<Eigen::Index>(rp[b]));
          cost(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
              v >= thresh ? 1.0 - v : kInvalid;
        }
      }
      for (const auto& [a, b] : hungarian(cost, 1.0).matches) {
        const auto i = rg[a];
        const auto j = rp[b];
        int& prev = last[static_cast<std::size_t>(fv.gt_ids[i])];
        if (prev >= 0 && prev != fv.pred_ids[j]) ++out.idsw;
        prev = fv.pred_ids[j];
        ++matches;
      }
    }
    out.tp += matches;
    out.fn += static_cast<int>(ng) - matches;
    out.fp += static_cast<int>(np) - matches;
  }
  out.mota = 100.0 *
             (1.0 - static_cast<double>(out.fn + out.fp + out.idsw) /
                        static_cast<double>(std::max(1, out.gt_count)));
  return out;
}

IdentityResult identity_metrics(std::span<const MotRecord> gt,
                                std::span<const MotRecord> pred,
                                double thresh) {
  const Sequence seq = index_sequence(gt, pred);
  RowMatrix overlap = RowMatrix::Zero(seq.n_gt_ids, seq.n_pred_ids);
  for (const auto& fv : seq.frames) {
    const RowMatrix sim = similarity(fv);
    for (Eigen::Index i = 0; i < sim.rows(); ++i) {
      for (Eigen::Index j = 0; j < sim.cols(); ++j) {
        if (sim(i, j) >= thresh) {
          overlap(fv.gt_ids[static_cast<std::size_t>(i)],
                  fv.pred_ids[static_cast<std::size_t>(j)]) += 1.0;
        }
      }
    }
  }
  IdentityResult out;
  if (overlap.size() > 0) {
    const RowMatrix cost = -overlap;
    for (const auto& [i, j] : hungarian(cost).matches) {
      out.idtp += static_cast<int>(
          overlap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  out.idfn = static_cast<int>(gt.size()) - out.idtp;
  out.idfp = static_cast<int>(pred.size()) - out.idtp;
  const double denom = static_cast<double>(gt.size() + pred.size());
  out.idf1 = denom > 0.0 ? 100.0 * 2.0 * out.idtp / denom : 0.0;
  return out;
}

HotaResult hota(std::span<const MotRecord> gt, std::span<const MotRecord> pred) {
  const Sequence seq = index_sequence(gt, pred);
  const Eigen::Index ng = seq.n_gt_ids;
  const Eigen::Index np = seq.n_pred_ids;

  std::vector<RowMatrix> sims;
  sims.reserve(seq.frames.size());
  RowMatrix potential = RowMatrix::Zero(ng, np);
  Eigen::VectorXd gt_count = Eigen::VectorXd::Zero(ng);
  Eigen::VectorXd pred_count = Eigen::VectorXd::Zero(np);
  for (const auto& fv : seq.frames) {
    sims.push_back(similarity(fv));
    const RowMatrix& s = sims.back();
    const Eigen::VectorXd row_sum = s.rowwise().sum();
    const Eigen::RowVectorXd col_sum = s.colwise().sum();
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.cols(); ++j) {
        const double denom = row_sum(i) + col_sum(j) - s(i, j);
        if (denom > kEps) {
          potential(fv.gt_ids[static_cast<std::size_t>(i)],
                    fv.pred_ids[static_cast<std::size_t>(j)]) += s(i, j) / denom;
        }
      }
    }
    for (int g : fv.gt_ids) gt_count(g) += 1.0;
    for (int p : fv.pred_ids) pred_count(p) += 1.0;
  }
  RowMatrix alignment = RowMatrix::Zero(ng, np);
  for (Eigen::Index i = 0; i < ng; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      alignment(i, j) =
          potential(i, j) / (gt_count(i) + pred_count(j) - potential(i, j));
    }
  }

  std::array<double, kHotaAlphaCount> tp{}, fn{}, fp{}, loc{};
  std::vector<RowMatrix> match_counts(kHotaAlphaCount,
                                      RowMatrix::Zero(ng, np));
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const auto& fv = seq.frames[t];
    const RowMatrix& s = sims[t];
    const auto n_g = static_cast<double>(fv.gt_ids.size());
    const auto n_p = static_cast<double>(fv.pred_ids.size());
    if (fv.gt_ids.empty() || fv.pred_ids.empty()) {
      for (int a = 0; a < kHotaAlphaCount; ++a) {
        fn[a] += n_g;
        fp[a] += n_p;
      }
      continue;
    }
    RowMatrix cost(s.rows(), s.cols());
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.cols(); ++j) {
        cost(i, j) = -alignment(fv.gt_ids[static_cast<std::size_t>(i)],
                                fv.pred_ids[static_cast<std::size_t>(j)]) *
                     s(i, j);
      }
    }
    const auto matches = hungarian(cost).matches;
    for (int a = 0; a < kHotaAlphaCount; ++a) {
      const double alpha = hota_alpha(a);
      double n_match = 0.0;
      for (const auto& [i, j] : matches) {
        const double v =
            s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (v < alpha - kEps) continue;
        n_match += 1.0;
        loc[a] += v;
        match_counts[a](fv.gt_ids[i], fv.pred_ids[j]) += 1.0;
      }
      tp[a] += n_match;
      fn[a] += n_g - n_match;
      fp[a] += n_p - n_match;
    }
  }

  HotaResult out;
  for (int a = 0; a < kHotaAlphaCount; ++a) {
    const RowMatrix& mc = match_counts[a];
    double ass_sum = 0.0;
    for (Eigen::Index i = 0; i < ng; ++i) {
      for (Eigen::Index j = 0; j < np; ++j) {
        if (mc(i, j) == 0.0) continue;
        const double ass =
            mc(i, j) / std::max(1.0, gt_count(i) + pred_count(j) - mc(i, j));
        ass_sum += mc(i, j) * ass;
      }
    }
    const double assa = ass_sum / std::max(1.0, tp[a]);
    const double deta = tp[a] / std::max(1.0, tp[a] + fn[a] + fp[a]);
    out.assa_alpha[a] = assa;
    out.deta_alpha[a] = deta;
    out.hota_alpha[a] = std::sqrt(deta * assa);
    out.hota += out.hota_alpha[a];
    out.deta += deta;
    out.assa += assa;
    out.loca += std::max(1e-10, loc[a]) / std::max(1e-10, tp[a]);
  }
  const double n = static_cast<double>(kHotaAlphaCount);
  out.hota *= 100.0 / n;
  out.deta *= 100.0 / n;
  out.assa *= 100.0 / n;
  out.loca *= 100.0 / n;
  return out;
}

MetricReport evaluate(std::span<const MotRecord> gt,
                      std::span<const MotRecord> pred, double thresh) {
  const ClearResult c = clear_mot(gt, pred, thresh);
  const IdentityResult id = identity_metrics(gt, pred, thresh);
  const HotaResult h = hota(gt, pred);
  MetricReport r;
  r.hota = h.hota;
  r.deta = h.deta;
  r.assa = h.assa;
  r.loca = h.loca;
  r.mota = c.mota;
  r.idf1 = id.idf1;
  r.idsw = c.idsw;
  r.fp = c.fp;
  r.fn = c.fn;
  r.tp = c.tp;
  r.gt_count = c.gt_count;
  return r;
}

}  // namespace umot::eval
