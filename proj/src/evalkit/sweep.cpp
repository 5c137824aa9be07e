#include "umot/evalkit/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "umot/evalkit/mot_format.hpp"

namespace umot::eval {

MetricReport run_once(const TrackerConfig& tracker, const sim::Scene& scene,
                      const sim::ScenarioConfig& scenario, std::uint64_t seed) {
  const auto candidates = sim::render_sequence(scene, scenario, seed);
  std::vector<std::optional<Homography>> homs;
  if (tracker.cmc_mode != CmcMode::off) {
    homs.assign(scene.homographies.begin(), scene.homographies.end());
  }
  const auto frames = run_sequence(candidates, homs, tracker, 1);
  const auto pred = records_from_tracks(frames);
  const auto gt = records_from_scene(scene);
  return evaluate(gt, pred);
}

namespace {

constexpr std::size_t kStatFields = 8;

std::array<double, kStatFields> as_array(const MetricReport& r) {
  return {r.hota, r.deta, r.assa, r.mota, r.idf1, static_cast<double>(r.idsw),
          static_cast<double>(r.fp), static_cast<double>(r.fn)};
}

MetricStats from_array(const std::array<double, kStatFields>& a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
}

}  // namespace

SweepSummary summarize(const std::vector<SweepRow>& rows) {
  SweepSummary s;
  if (rows.empty()) return s;
  const auto n = static_cast<double>(rows.size());
  std::array<double, kStatFields> mean{}, var{};
  for (const auto& row : rows) {
    const auto a = as_array(row.report);
    for (std::size_t k = 0; k < kStatFields; ++k) mean[k] += a[k];
  }
  for (auto& m : mean) m /= n;
  if (rows.size() > 1) {
    for (const auto& row : rows) {
      const auto a = as_array(row.report);
      for (std::size_t k = 0; k < kStatFields; ++k) {
        var[k] += (a[k] - mean[k]) * (a[k] - mean[k]);
      }
    }
    for (auto& v : var) v = std::sqrt(v / (n - 1.0));
  }
  s.mean = from_array(mean);
  s.std = from_array(var);
  return s;
}

SweepResult run_sweep(const TrackerConfig& tracker,
                      const sim::ScenarioConfig& scenario,
                      const SweepOptions& opts) {
  tracker.validate();
  if (opts.n_seeds < 1) throw std::invalid_argument("sweep: n_seeds must be >= 1");
  const sim::Scene scene = sim::generate_scene(scenario);
  const int n = opts.n_seeds;
  SweepResult result;
  result.rows.resize(static_cast<std::size_t>(n));

  unsigned threads = opts.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1)));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (int i = next++; i < n; i = next++) {
      try {
        const std::uint64_t seed = opts.base_seed + static_cast<std::uint64_t>(i);
        result.rows[static_cast<std::size_t>(i)] = {
            seed, run_once(tracker, scene, scenario, seed)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  result.summary = summarize(result.rows);
  return result;
}

namespace {

void write_row(std::ostream& out, const std::string& label,
               const MetricReport& r) {
  out << label << ',' << format_double(r.hota) << ',' << format_double(r.deta)
      << ',' << format_double(r.assa) << ',' << format_double(r.mota) << ','
      << format_double(r.idf1) << ',' << r.idsw << ',' << r.fp << ',' << r.fn
      << '\n';
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "seed,hota,deta,assa,mota,idf1,idsw,fp,fn\n";
  for (const auto& row : result.rows) {
    write_row(out, std::to_string(row.seed), row.report);
  }
}

void write_sweep_summary(std::ostream& out, const SweepSummary& summary) {
  auto line = [&](const char* label, const MetricStats& m) {
    out << label << ',' << format_double(m.hota) << ',' << format_double(m.deta)
        << ',' << format_double(m.assa) << ',' << format_double(m.mota) << ','
        << format_double(m.idf1) << ',' << format_double(m.idsw) << ','
        << format_double(m.fp) << ',' << format_double(m.fn) << '\n';
  };
  out << "stat,hota,deta,assa,mota,idf1,idsw,fp,fn\n";
  line("mean", summary.mean);
  line("std", summary.std);
}

void write_sweep_svg(std::ostream& out, const SweepResult& result) {
  constexpr double kSize = 400.0;
  constexpr double kMargin = 50.0;
  double lo_x = 100.0, hi_x = 0.0, lo_y = 100.0, hi_y = 0.0;
  for (const auto& row : result.rows) {
    lo_x = std::min(lo_x, row.report.hota);
    hi_x = std::max(hi_x, row.report.hota);
    lo_y = std::min(lo_y, row.report.idf1);
    hi_y = std::max(hi_y, row.report.idf1);
  }
  if (result.rows.empty()) {
    lo_x = lo_y = 0.0;
    hi_x = hi_y = 100.0;
  }
  auto pad = [](double& lo, double& hi) {
    const double span = std::max(hi - lo, 1.0);
    lo -= 0.1 * span;
    hi += 0.1 * span;
  };
  pad(lo_x, hi_x);
  pad(lo_y, hi_y);
  auto px = [&](double v) { return kMargin + (v - lo_x) / (hi_x - lo_x) * kSize; };
  auto py = [&](double v) {
    return kMargin + kSize - (v - lo_y) / (hi_y - lo_y) * kSize;
  };

  const double total = kSize + 2.0 * kMargin;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total
      << "\" height=\"" << total << "\">\n";
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << kSize << "\" height=\"" << kSize
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kMargin + kSize / 2 << "\" y=\"" << total - 10
      << "\" text-anchor=\"middle\">HOTA (" << format_double(lo_x) << " to "
      << format_double(hi_x) << ")</text>\n";
  out << "<text x=\"15\" y=\"" << kMargin + kSize / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << kMargin + kSize / 2 << ")\">IDF1 (" << format_double(lo_y) << " to "
      << format_double(hi_y) << ")</text>\n";
  for (const auto& row : result.rows) {
    out << "<circle cx=\"" << format_double(px(row.report.hota)) << "\" cy=\""
        << format_double(py(row.report.idf1))
        << "\" r=\"4\" fill=\"steelblue\"><title>seed " << row.seed
        << "</title></circle>\n";
  }
  out << "</svg>\n";
}

void write_sweep_plot(const std::filesystem::path& path,
                      const SweepResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (path.extension() == ".svg") {
    write_sweep_svg(out, result);
    return;
  }
  out << "seed,hota,idf1\n";
  for (const auto& row : result.rows) {
    out << row.seed << ',' << format_double(row.report.hota) << ','
        << format_double(row.report.idf1) << '\n';
  }
}

}  // namespace umot::eval
