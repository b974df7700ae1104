#include "earreact/core/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "earreact/core/errors.hpp"
#include "json.hpp"

namespace earreact {

using nlohmann::json;

namespace {

// Binds each config field to its JSON key once, for reading and writing.
template <typename Visitor>
void visit_vocal(VocalConfig& c, Visitor&& v) {
  v("motion_filter", c.motion_filter);
  v("motion_low_g", c.motion_low_g);
  v("motion_high_g", c.motion_high_g);
  v("sound_filter", c.sound_filter);
  v("sound_threshold_db", c.sound_threshold_db);
  v("db_calibration", c.db_calibration);
  v("resample_hz", c.resample_hz);
  v("preprocess_cutoff_hz", c.preprocess_cutoff_hz);
  v("rank_relaxation", c.rank_relaxation);
  v("margin_threshold", c.margin_threshold);
  v("top_k", c.top_k);
  v("correction", c.correction);
  v("dtw_threshold", c.dtw_threshold);
  v("reference_margin_s", c.reference_margin_s);
  v("pitch_hop_s", c.pitch_hop_s);
  v("pitch_confidence_threshold", c.pitch_confidence_threshold);
  v("pitch_min_hz", c.pitch_min_hz);
  v("pitch_max_hz", c.pitch_max_hz);
  v("smoothing", c.smoothing);
  v("smoothing_window", c.smoothing_window);
  v("singing_classes", c.singing_classes);
  v("whistling_classes", c.whistling_classes);
  v("ambiguous_classes", c.ambiguous_classes);
}

template <typename Visitor>
void visit_motion(MotionConfig& c, Visitor&& v) {
  v("prefilter", c.prefilter);
  v("low_g", c.low_g);
  v("high_g", c.high_g);
  v("lpf_cutoff_hz", c.lpf_cutoff_hz);
  v("window_s", c.window_s);
  v("sample_rate_hz", c.sample_rate_hz);
  v("decision_threshold", c.decision_threshold);
}

template <typename Visitor>
void visit_heuristic(HeuristicMotionConfig& c, Visitor&& v) {
  v("bias", c.bias);
  v("periodicity_weight", c.periodicity_weight);
  v("band_weight", c.band_weight);
  v("band_low_hz", c.band_low_hz);
  v("band_high_hz", c.band_high_hz);
}

struct Reader {
  const json& obj;
  std::string section;
  std::size_t used = 0;

  template <typename T>
  void operator()(const char* key, T& field) {
    if (!obj.contains(key)) return;
    ++used;
    try {
      field = obj.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("config " + section + "." + key + ": " + e.what());
    }
  }
};

struct Writer {
  json& obj;
  template <typename T>
  void operator()(const char* key, const T& field) {
    obj[key] = field;
  }
};

void read_section(const json& root, const char* name, auto&& visit_fn, auto& target,
                  std::size_t extra_keys = 0) {
  if (!root.contains(name)) return;
  const json& obj = root.at(name);
  if (!obj.is_object()) throw ConfigError(std::string("config section ") + name + " must be an object");
  Reader r{obj, name};
  visit_fn(target, r);
  if (r.used + extra_keys != obj.size()) {
    throw ConfigError(std::string("config section ") + name + " has unknown keys");
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ConfigError(std::string("config value ") + name + " is not finite");
}

void require_range(double low, double high, const char* name) {
  require_finite(low, name);
  require_finite(high, name);
  if (!(low < high)) throw ConfigError(std::string("config range ") + name + " requires low < high");
}

}  // namespace

void PipelineConfig::validate() const {
  VocalConfig v = vocal;
  visit_vocal(v, [](const char* key, const auto& field) {
    if constexpr (std::is_same_v<std::decay_t<decltype(field)>, double>) require_finite(field, key);
  });
  MotionConfig m = motion;
  visit_motion(m, [](const char* key, const auto& field) {
    if constexpr (std::is_same_v<std::decay_t<decltype(field)>, double>) require_finite(field, key);
  });
  visit_heuristic(m.heuristic, [](const char* key, const auto& field) { require_finite(field, key); });

  require_range(vocal.motion_low_g, vocal.motion_high_g, "vocal.motion");
  require_range(motion.low_g, motion.high_g, "motion.movement");
  require_range(motion.heuristic.band_low_hz, motion.heuristic.band_high_hz, "motion.heuristic.band");
  require_range(vocal.pitch_min_hz, vocal.pitch_max_hz, "vocal.pitch");
  if (vocal.resample_hz <= 0 || vocal.preprocess_cutoff_hz <= 0 ||
      vocal.preprocess_cutoff_hz >= vocal.resample_hz / 2) {
    throw ConfigError("vocal.preprocess_cutoff_hz must lie in (0, resample_hz / 2)");
  }
  if (vocal.resample_hz != 16000.0) {
    throw ConfigError("vocal.resample_hz must be 16000 (log-mel front end is fixed to 16 kHz)");
  }
  if (vocal.top_k < 1) throw ConfigError("vocal.top_k must be >= 1");
  if (vocal.smoothing_window < 1 || vocal.smoothing_window > 6) {
    throw ConfigError("vocal.smoothing_window must be in 1..6");
  }
  if (vocal.pitch_hop_s <= 0 || vocal.reference_margin_s < 0 || vocal.dtw_threshold < 0) {
    throw ConfigError("vocal pitch hop, reference margin and DTW threshold must be non-negative");
  }
  if (motion.lpf_cutoff_hz <= 0 || motion.lpf_cutoff_hz >= motion.sample_rate_hz / 2) {
    throw ConfigError("motion.lpf_cutoff_hz must lie in (0, sample_rate_hz / 2)");
  }
  if (motion.window_s != 7.0 || motion.sample_rate_hz != 70.0) {
    throw ConfigError("motion.window_s must be 7 and motion.sample_rate_hz 70 (70x18 motion units)");
  }
  if (motion.decision_threshold <= 0 || motion.decision_threshold >= 1) {
    throw ConfigError("motion.decision_threshold must lie in (0, 1)");
  }
}

PipelineConfig config_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : root.items()) {
    if (key != "vocal" && key != "motion") throw ConfigError("unknown config section '" + key + "'");
  }

  PipelineConfig cfg;
  read_section(root, "vocal", [](VocalConfig& c, Reader& r) { visit_vocal(c, r); }, cfg.vocal);
  const bool has_heuristic = root.contains("motion") && root["motion"].contains("heuristic");
  read_section(root, "motion", [](MotionConfig& c, Reader& r) { visit_motion(c, r); }, cfg.motion,
               has_heuristic ? 1 : 0);
  if (has_heuristic) {
    read_section(root.at("motion"), "heuristic",
                 [](HeuristicMotionConfig& c, Reader& r) { visit_heuristic(c, r); },
                 cfg.motion.heuristic);
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const PipelineConfig& config) {
  PipelineConfig c = config;
  json root;
  json vocal = json::object();
  json motion = json::object();
  json heuristic = json::object();
  visit_vocal(c.vocal, Writer{vocal});
  visit_motion(c.motion, Writer{motion});
  visit_heuristic(c.motion.heuristic, Writer{heuristic});
  motion["heuristic"] = heuristic;
  root["vocal"] = vocal;
  root["motion"] = motion;
  return root.dump(2) + "\n";
}

}  // namespace earreact
