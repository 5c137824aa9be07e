#include "umot/evalkit/scenario_format.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "umot/evalkit/mot_format.hpp"

namespace umot::eval {

using nlohmann::json;

namespace {

Eigen::Vector2d vec2(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("expected a 2-element array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::array<double, 4> arr4(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw std::invalid_argument("expected a 4-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
          j[3].get<double>()};
}

BoxSigma sigma_of(const json& j) {
  const auto a = arr4(j);
  return {a[0], a[1], a[2], a[3]};
}

json sigma_json(const BoxSigma& s) { return json::array({s.x, s.y, s.w, s.h}); }

sim::CameraModel camera_model(const std::string& s) {
  if (s == "static") return sim::CameraModel::static_camera;
  if (s == "affine_drift") return sim::CameraModel::affine_drift;
  if (s == "projective_drift") return sim::CameraModel::projective_drift;
  throw std::invalid_argument("unknown camera model '" + s + "'");
}

std::string camera_model_name(sim::CameraModel m) {
  switch (m) {
    case sim::CameraModel::static_camera:
      return "static";
    case sim::CameraModel::affine_drift:
      return "affine_drift";
    case sim::CameraModel::projective_drift:
      return "projective_drift";
  }
  return "static";
}

sim::ObjectSpec object_of(const json& j) {
  sim::ObjectSpec o;
  const auto b = arr4(j.at("box"));
  o.initial = {b[0], b[1], b[2], b[3]};
  if (j.contains("velocity")) o.velocity = vec2(j["velocity"]);
  if (j.contains("oscillation")) {
    const auto& osc = j["oscillation"];
    o.osc_amplitude = osc.value("amplitude", 0.0);
    o.osc_omega = osc.value("omega", 0.0);
    o.osc_phase = osc.value("phase", 0.0);
  }
  o.class_id = j.value("class_id", 0);
  if (j.contains("sigma")) o.candidate_sigma = sigma_of(j["sigma"]);
  o.accel_sigma = j.value("accel_sigma", 0.0);
  if (j.contains("hidden")) {
    for (const auto& r : j["hidden"]) {
      if (!r.is_array() || r.size() != 2) {
        throw std::invalid_argument("hidden ranges are [first, last] pairs");
      }
      o.hidden.emplace_back(r[0].get<int>(), r[1].get<int>());
    }
  }
  o.first_frame = j.value("first_frame", 1);
  o.last_frame = j.value("last_frame", 0);
  return o;
}

}  // namespace

sim::ScenarioConfig parse_scenario(std::istream& in) {
  sim::ScenarioConfig cfg;
  try {
    const json j = json::parse(in);
    cfg.image_width = j.value("image_width", cfg.image_width);
    cfg.image_height = j.value("image_height", cfg.image_height);
    cfg.fps = j.value("fps", cfg.fps);
    cfg.duration = j.value("duration", cfg.duration);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("camera")) {
      const auto& c = j["camera"];
      cfg.camera.model = camera_model(c.value("model", std::string("static")));
      if (c.contains("H1")) {
        const auto& m = c["H1"];
        if (!m.is_array() || m.size() != 2) {
          throw std::invalid_argument("H1 must be a 2x2 array");
        }
        const Eigen::Vector2d r0 = vec2(m[0]);
        const Eigen::Vector2d r1 = vec2(m[1]);
        cfg.camera.H1 << r0.x(), r0.y(), r1.x(), r1.y();
      }
      if (c.contains("h2")) cfg.camera.h2 = vec2(c["h2"]);
      if (c.contains("h3_rate")) cfg.camera.h3_rate = vec2(c["h3_rate"]);
    }
    if (j.contains("noise")) {
      const auto& n = j["noise"];
      auto& ns = cfg.noise;
      if (n.contains("sigma")) ns.sigma = sigma_of(n["sigma"]);
      ns.candidates_per_object =
          n.value("candidates_per_object", ns.candidates_per_object);
      ns.miss_probability = n.value("miss_probability", ns.miss_probability);
      ns.clutter_rate = n.value("clutter_rate", ns.clutter_rate);
      if (n.contains("score_band")) {
        const auto v = vec2(n["score_band"]);
        ns.score_low = v.x();
        ns.score_high = v.y();
      }
      if (n.contains("clutter_score_band")) {
        const auto v = vec2(n["clutter_score_band"]);
        ns.clutter_score_low = v.x();
        ns.clutter_score_high = v.y();
      }
      if (n.contains("clutter_size")) {
        const auto v = vec2(n["clutter_size"]);
        ns.clutter_min_size = v.x();
        ns.clutter_max_size = v.y();
      }
      ns.heavy_tailed = n.value("heavy_tailed", ns.heavy_tailed);
    }
    if (j.contains("objects")) {
      for (const auto& o : j["objects"]) cfg.objects.push_back(object_of(o));
    }
    cfg.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(0, std::string("scenario: ") + e.what());
  }
  return cfg;
}

sim::ScenarioConfig parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return parse_scenario(in);
}

void write_scenario(std::ostream& out, const sim::ScenarioConfig& cfg) {
  json j;
  j["image_width"] = cfg.image_width;
  j["image_height"] = cfg.image_height;
  j["fps"] = cfg.fps;
  j["duration"] = cfg.duration;
  j["seed"] = cfg.seed;
  const auto& c = cfg.camera;
  j["camera"] = {{"model", camera_model_name(c.model)},
                 {"H1", {{c.H1(0, 0), c.H1(0, 1)}, {c.H1(1, 0), c.H1(1, 1)}}},
                 {"h2", {c.h2.x(), c.h2.y()}},
                 {"h3_rate", {c.h3_rate.x(), c.h3_rate.y()}}};
  const auto& n = cfg.noise;
  j["noise"] = {{"sigma", sigma_json(n.sigma)},
                {"candidates_per_object", n.candidates_per_object},
                {"miss_probability", n.miss_probability},
                {"clutter_rate", n.clutter_rate},
                {"score_band", {n.score_low, n.score_high}},
                {"clutter_score_band", {n.clutter_score_low, n.clutter_score_high}},
                {"clutter_size", {n.clutter_min_size, n.clutter_max_size}},
                {"heavy_tailed", n.heavy_tailed}};
  j["objects"] = json::array();
  for (const auto& o : cfg.objects) {
    json jo = {{"box", {o.initial.x, o.initial.y, o.initial.w, o.initial.h}},
               {"velocity", {o.velocity.x(), o.velocity.y()}},
               {"oscillation",
                {{"amplitude", o.osc_amplitude},
                 {"omega", o.osc_omega},
                 {"phase", o.osc_phase}}},
               {"class_id", o.class_id},
               {"accel_sigma", o.accel_sigma},
               {"first_frame", o.first_frame},
               {"last_frame", o.last_frame}};
    if (o.candidate_sigma) jo["sigma"] = sigma_json(*o.candidate_sigma);
    jo["hidden"] = json::array();
    for (const auto& [a, b] : o.hidden) jo["hidden"].push_back({a, b});
    j["objects"].push_back(jo);
  }
  out << j.dump(2) << '\n';
}

}  // namespace umot::eval
