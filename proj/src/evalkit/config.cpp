#include "umot/evalkit/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "umot/evalkit/mot_format.hpp"

namespace umot::eval {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<double> parse_doubles(std::string_view s) {
  std::vector<double> out;
  for (auto t : split(s, ',')) out.push_back(parse_double(t));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k > 0) out += ',';
    out += format_double(v[k]);
  }
  return out;
}

int parse_int(std::string_view s) {
  const double v = parse_double(s);
  const auto i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return i;
}

std::size_t parse_size(std::string_view s) {
  const int i = parse_int(s);
  if (i < 0) throw std::invalid_argument("expected a non-negative integer");
  return static_cast<std::size_t>(i);
}

std::vector<BinningStrategy> parse_binning(std::string_view s) {
  std::vector<BinningStrategy> out;
  if (trim(s) == "none") return out;
  for (auto part : split(s, ';')) {
    const auto colon = part.find(':');
    const auto name = trim(part.substr(0, colon));
    BinningStrategy b;
    if (name == "score") {
      b.quantity = RankQuantity::score;
    } else if (name == "pseudo_depth") {
      b.quantity = RankQuantity::pseudo_depth;
    } else {
      throw std::invalid_argument("unknown binning quantity '" +
                                  std::string(name) + "'");
    }
    if (colon != std::string_view::npos) {
      b.edges = parse_doubles(part.substr(colon + 1));
      if (!std::is_sorted(b.edges.begin(), b.edges.end()) ||
          std::adjacent_find(b.edges.begin(), b.edges.end()) != b.edges.end()) {
        throw std::invalid_argument("bin edges must be strictly increasing");
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::string format_binning(const std::vector<BinningStrategy>& bins) {
  if (bins.empty()) return "none";
  std::string out;
  for (std::size_t k = 0; k < bins.size(); ++k) {
    if (k > 0) out += ';';
    out += bins[k].quantity == RankQuantity::score ? "score" : "pseudo_depth";
    out += ':';
    out += join(bins[k].edges);
  }
  return out;
}

struct Entry {
  std::string key;
  std::function<void(TrackerConfig&, std::string_view)> set;
  std::function<std::string(const TrackerConfig&)> get;
};

#define UMOT_DOUBLE(name, member)                                         \
  Entry {                                                                 \
    name, [](TrackerConfig& c, std::string_view v) {                      \
      c.member = parse_double(v);                                         \
    },                                                                    \
        [](const TrackerConfig& c) { return format_double(c.member); }    \
  }
#define UMOT_BOOL(name, member)                                           \
  Entry {                                                                 \
    name, [](TrackerConfig& c, std::string_view v) {                      \
      c.member = parse_bool(v);                                           \
    },                                                                    \
        [](const TrackerConfig& c) {                                      \
          return std::string(c.member ? "true" : "false");                \
        }                                                                 \
  }
#define UMOT_INT(name, member, parser)                                    \
  Entry {                                                                 \
    name, [](TrackerConfig& c, std::string_view v) {                      \
      c.member = parser(v);                                               \
    },                                                                    \
        [](const TrackerConfig& c) { return std::to_string(c.member); }   \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      UMOT_DOUBLE("nms.iou_thresh", nms.iou_thresh),
      UMOT_DOUBLE("nms.score_thresh", nms.score_thresh),
      UMOT_DOUBLE("nms.sigma_floor", nms.sigma_floor),
      UMOT_BOOL("nms.use_cluster_mean", nms.use_cluster_mean),
      UMOT_DOUBLE("kalman.w_pos", kalman.w_pos),
      UMOT_DOUBLE("kalman.w_vel", kalman.w_vel),
      UMOT_DOUBLE("kalman.dt", kalman.dt),
      Entry{"cascade.binning",
            [](TrackerConfig& c, std::string_view v) {
              c.cascade.binning = parse_binning(v);
            },
            [](const TrackerConfig& c) {
              return format_binning(c.cascade.binning);
            }},
      UMOT_DOUBLE("cascade.score_floor", cascade.score_floor),
      Entry{"cascade.match_thresholds",
            [](TrackerConfig& c, std::string_view v) {
              c.cascade.match_thresholds = parse_doubles(v);
            },
            [](const TrackerConfig& c) {
              return join(c.cascade.match_thresholds);
            }},
      Entry{"cascade.disambiguator",
            [](TrackerConfig& c, std::string_view v) {
              c.cascade.disambiguator = parse_disambiguator(v);
            },
            [](const TrackerConfig& c) {
              return to_string(c.cascade.disambiguator);
            }},
      UMOT_BOOL("cascade.confirm_from_all_bins", cascade.confirm_from_all_bins),
      UMOT_DOUBLE("cascade.new_track_score_thresh",
                  cascade.new_track_score_thresh),
      Entry{"cascade.error_mode",
            [](TrackerConfig& c, std::string_view v) {
              if (v == "literal") {
                c.cascade.error_mode = ErrorMode::literal;
              } else if (v == "additive") {
                c.cascade.error_mode = ErrorMode::additive;
              } else {
                throw std::invalid_argument("error_mode must be literal or additive");
              }
            },
            [](const TrackerConfig& c) {
              return std::string(c.cascade.error_mode == ErrorMode::literal
                                     ? "literal"
                                     : "additive");
            }},
      UMOT_DOUBLE("cascade.ambiguity_floor", cascade.ambiguity_floor),
      Entry{"cascade.phase_classes",
            [](TrackerConfig& c, std::string_view v) {
              c.cascade.phase_classes.clear();
              for (auto t : split(v, ',')) {
                c.cascade.phase_classes.push_back(parse_int(t));
              }
            },
            [](const TrackerConfig& c) {
              std::string out;
              for (std::size_t k = 0; k < c.cascade.phase_classes.size(); ++k) {
                if (k > 0) out += ',';
                out += std::to_string(c.cascade.phase_classes[k]);
              }
              return out;
            }},
      UMOT_INT("phase.capacity", phase.capacity, parse_size),
      UMOT_INT("phase.level_window", phase.level_window, parse_size),
      UMOT_INT("phase.min_samples", phase.min_samples, parse_size),
      UMOT_DOUBLE("phase.smoothing", phase.smoothing),
      UMOT_DOUBLE("phase.stale_periods", phase.stale_periods),
      Entry{"cmc_mode",
            [](TrackerConfig& c, std::string_view v) {
              c.cmc_mode = parse_cmc_mode(v);
            },
            [](const TrackerConfig& c) { return to_string(c.cmc_mode); }},
      UMOT_BOOL("use_measured_r", use_measured_r),
      UMOT_DOUBLE("parametric_r_weight", parametric_r_weight),
      UMOT_INT("max_age", max_age, parse_int),
      UMOT_INT("n_init", n_init, parse_int),
      UMOT_DOUBLE("fps", fps),
      UMOT_DOUBLE("image_height", image_height),
  };
  return table;
}

#undef UMOT_DOUBLE
#undef UMOT_BOOL
#undef UMOT_INT

}  // namespace

bool parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument("not a boolean: '" + std::string(s) + "'");
}

CmcMode parse_cmc_mode(std::string_view s) {
  s = trim(s);
  if (s == "off") return CmcMode::off;
  if (s == "affine") return CmcMode::affine;
  if (s == "homographic") return CmcMode::homographic;
  throw std::invalid_argument("cmc mode must be off, affine or homographic");
}

DisambiguatorKind parse_disambiguator(std::string_view s) {
  s = trim(s);
  if (s == "none") return DisambiguatorKind::none;
  if (s == "phase") return DisambiguatorKind::phase;
  if (s == "size") return DisambiguatorKind::size;
  throw std::invalid_argument("disambiguator must be none, phase or size");
}

std::string to_string(CmcMode m) {
  switch (m) {
    case CmcMode::off:
      return "off";
    case CmcMode::affine:
      return "affine";
    case CmcMode::homographic:
      return "homographic";
  }
  return "off";
}

std::string to_string(DisambiguatorKind k) {
  switch (k) {
    case DisambiguatorKind::none:
      return "none";
    case DisambiguatorKind::phase:
      return "phase";
    case DisambiguatorKind::size:
      return "size";
  }
  return "none";
}

void set_config_value(TrackerConfig& cfg, std::string_view key,
                      std::string_view value) {
  key = trim(key);
  value = trim(value);
  for (const auto& e : entries()) {
    if (e.key == key) {
      e.set(cfg, value);
      return;
    }
  }
  throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
}

TrackerConfig parse_config(std::istream& in, TrackerConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v(line);
    v = trim(v.substr(0, v.find('#')));
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(lineno, "expected 'key = value'");
    }
    try {
      set_config_value(base, v.substr(0, eq), v.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    }
  }
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
  return base;
}

TrackerConfig parse_config_file(const std::filesystem::path& path,
                                TrackerConfig base) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return parse_config(in, std::move(base));
}

void write_config(std::ostream& out, const TrackerConfig& cfg) {
  for (const auto& e : entries()) out << e.key << " = " << e.get(cfg) << '\n';
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& e : entries()) out.push_back(e.key);
  return out;
}

}  // namespace umot::eval
