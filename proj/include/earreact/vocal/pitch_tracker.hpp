#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace earreact::vocal {

struct PitchEstimate {
  double t = 0.0;  // session seconds
  double f0_hz = 0.0;
  double confidence = 0.0;
};

/// Audio of one segment handed to a pitch tracker.
struct PitchQuery {
  double t_start = 0.0;
  double t_end = 0.0;
  std::span<const float> audio;
  double rate_hz = 16000.0;
};

/// Produces one estimate per hop over [t_start, t_end). Implementations throw
/// on failure; callers treat that as fail-closed.
class PitchTracker {
 public:
  virtual ~PitchTracker() = default;
  virtual std::vector<PitchEstimate> track(const PitchQuery& query) const = 0;
};

/// Replays a pitch.csv (`t,f0,confidence`, 0.1 s steps).
class PitchPlayback : public PitchTracker {
 public:
  explicit PitchPlayback(std::vector<PitchEstimate> estimates, double hop_s = 0.1);
  static PitchPlayback load(const std::filesystem::path& path);

  /// Throws ParameterError if any hop in the query span has no estimate.
  std::vector<PitchEstimate> track(const PitchQuery& query) const override;

 private:
  std::vector<PitchEstimate> estimates_;  // indexed by round(t / hop)
  std::vector<bool> present_;
  double hop_s_;
};

std::vector<PitchEstimate> read_pitch_csv(std::istream& in);
void write_pitch_csv(std::ostream& out, std::span<const PitchEstimate> estimates);

/// Normalized-autocorrelation tracker. Each hop-long frame is searched over
/// lags for min_hz..max_hz; the f0 is the first local peak reaching 90% of the
/// frame's best peak, refined by parabolic interpolation, and the confidence
/// is that peak's normalized correlation.
class AutocorrelationPitchTracker : public PitchTracker {
 public:
  AutocorrelationPitchTracker(double min_hz = 80.0, double max_hz = 1000.0, double hop_s = 0.1);

  std::vector<PitchEstimate> track(const PitchQuery& query) const override;

  /// Single-frame estimate; t is left at 0.
  PitchEstimate estimate(std::span<const float> frame, double rate_hz) const;

 private:
  double min_hz_;
  double max_hz_;
  double hop_s_;
};

}  // namespace earreact::vocal
