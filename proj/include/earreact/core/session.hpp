#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace earreact {

inline constexpr double kNominalImuRateHz = 70.0;
inline constexpr double kImuRateToleranceHz = 5.0;
inline constexpr double kAudioRateHz = 44100.0;

/// One IMU sample: accelerometer in g, gyroscope in deg/s.
struct ImuSample {
  double t = 0.0;
  std::array<double, 3> accel{};
  std::array<double, 3> gyro{};
};

/// One listening session. Timestamps are seconds from session start; the
/// first audio sample is at t = 0.
struct Session {
  std::string id;
  std::string subject_id;
  std::string song_id;
  std::string place_tag;
  double start_offset_in_song = 0.0;

  std::vector<ImuSample> imu;
  /// Mono PCM in [-1, 1]. Empty when precomputed classifier scores and pitch
  /// tracks stand in for raw audio.
  std::vector<float> audio;
  double audio_rate_hz = kAudioRateHz;

  bool has_audio() const { return !audio.empty(); }

  /// End of IMU coverage: last timestamp plus one median sample period.
  double imu_end() const;
  double audio_duration() const;
  /// min(audio, IMU) coverage when both streams exist, otherwise whichever
  /// stream is present.
  double duration() const;

  /// Throws AlignmentError if timestamps are not strictly increasing, the IMU
  /// rate is outside 70 ± 5 Hz, or the audio and IMU spans differ by > 1 s.
  void validate() const;
};

/// A one-second window of a session. Slices view the owning Session, which
/// must outlive the segment.
struct SensorSegment {
  std::size_t index = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  std::span<const ImuSample> imu;
  std::span<const float> audio;
};

/// Tiles the session into floor(duration) one-second segments. IMU samples
/// with t in [t_start, t_end) belong to a segment; the trailing partial second
/// is dropped.
std::vector<SensorSegment> segment_session(const Session& session);

/// Accelerometer vectors of an IMU slice.
std::vector<std::array<double, 3>> accel_of(std::span<const ImuSample> imu);

/// Resamples gyro channels onto the uniform grid t = k / rate_hz,
/// k = 0..n-1, by linear interpolation (edges held).
std::array<std::vector<double>, 3> uniform_gyro(const Session& session,
                                                double rate_hz,
                                                std::size_t n);

}  // namespace earreact
