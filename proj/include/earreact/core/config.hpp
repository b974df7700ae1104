#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace earreact {

/// Thresholds of the vocal detector. Defaults are the published operating
/// point; each stage can be switched off for ablations.
struct VocalConfig {
  bool motion_filter = true;
  double motion_low_g = 0.0104;
  double motion_high_g = 0.12;

  bool sound_filter = true;
  double sound_threshold_db = 49.0;
  /// dB = 20 log10(rms) + db_calibration; full scale maps to 94 dB.
  double db_calibration = 94.0;

  double resample_hz = 16000.0;
  double preprocess_cutoff_hz = 2000.0;

  bool rank_relaxation = true;
  double margin_threshold = 0.9;
  int top_k = 5;

  /// When off, ambiguous maps to singing_humming and uncertain to its candidate.
  bool correction = true;
  double dtw_threshold = 130.0;
  double reference_margin_s = 0.5;
  double pitch_hop_s = 0.1;
  double pitch_confidence_threshold = 0.5;
  double pitch_min_hz = 80.0;
  double pitch_max_hz = 1000.0;

  bool smoothing = true;
  int smoothing_window = 6;

  /// Classifier class names, matched case-insensitively.
  std::vector<std::string> singing_classes{"humming", "singing"};
  std::vector<std::string> whistling_classes{"whistling", "whistle"};
  std::vector<std::string> ambiguous_classes{"speech", "music"};
};

struct HeuristicMotionConfig {
  double bias = -6.0;
  double periodicity_weight = 8.0;
  double band_weight = 2.0;
  double band_low_hz = 0.25;
  double band_high_hz = 4.0;
};

struct MotionConfig {
  bool prefilter = true;
  double low_g = 0.0092;
  double high_g = 0.114;
  double lpf_cutoff_hz = 5.0;
  /// Classification window. The motion-unit layout fixes it at 7 s of 70 Hz data.
  double window_s = 7.0;
  double sample_rate_hz = 70.0;
  /// head_motion iff P(head_motion) > decision_threshold.
  double decision_threshold = 0.5;
  HeuristicMotionConfig heuristic;
};

struct PipelineConfig {
  VocalConfig vocal;
  MotionConfig motion;

  /// Throws ConfigError on non-finite values, inverted ranges, or
  /// unsupported window/rate combinations.
  void validate() const;
};

/// Parses a JSON document; missing keys keep their defaults, unknown keys are
/// rejected. Throws ConfigError.
PipelineConfig config_from_json(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const PipelineConfig& config);

}  // namespace earreact
