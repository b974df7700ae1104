#include "earreact/core/session.hpp"

#include <algorithm>
#include <cmath>

#include "earreact/core/errors.hpp"

namespace earreact {

namespace {

double median_period(const std::vector<ImuSample>& imu) {
  if (imu.size() < 2) return 1.0 / kNominalImuRateHz;
  std::vector<double> dt;
  dt.reserve(imu.size() - 1);
  for (std::size_t i = 1; i < imu.size(); ++i) dt.push_back(imu[i].t - imu[i - 1].t);
  auto mid = dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2);
  std::nth_element(dt.begin(), mid, dt.end());
  return *mid;
}

}  // namespace

double Session::imu_end() const {
  if (imu.empty()) return 0.0;
  return imu.back().t + median_period(imu);
}

double Session::audio_duration() const {
  return static_cast<double>(audio.size()) / audio_rate_hz;
}

double Session::duration() const {
  if (has_audio() && !imu.empty()) return std::min(audio_duration(), imu_end());
  if (has_audio()) return audio_duration();
  return imu_end();
}

void Session::validate() const {
  for (std::size_t i = 1; i < imu.size(); ++i) {
    if (!(imu[i].t > imu[i - 1].t)) {
      throw AlignmentError("IMU timestamps not strictly increasing at sample " +
                           std::to_string(i));
    }
  }
  if (imu.size() >= 2) {
    const double rate =
        static_cast<double>(imu.size() - 1) / (imu.back().t - imu.front().t);
    if (std::abs(rate - kNominalImuRateHz) > kImuRateToleranceHz) {
      throw AlignmentError("IMU rate " + std::to_string(rate) +
                           " Hz outside 70 +/- 5 Hz");
    }
  }
  if (has_audio() && !imu.empty() && std::abs(audio_duration() - imu_end()) > 1.0) {
    throw AlignmentError("audio span " + std::to_string(audio_duration()) +
                         " s and IMU span " + std::to_string(imu_end()) +
                         " s differ by more than 1 s");
  }
}

std::vector<SensorSegment> segment_session(const Session& session) {
  session.validate();
  const auto count = static_cast<std::size_t>(std::floor(session.duration() + 1e-9));
  std::vector<SensorSegment> segments;
  segments.reserve(count);

  const auto samples_per_second = static_cast<std::size_t>(std::llround(session.audio_rate_hz));
  auto imu_it = session.imu.begin();
  for (std::size_t k = 0; k < count; ++k) {
    SensorSegment seg;
    seg.index = k;
    seg.t_start = static_cast<double>(k);
    seg.t_end = static_cast<double>(k + 1);

    imu_it = std::lower_bound(imu_it, session.imu.end(), seg.t_start,
                              [](const ImuSample& s, double t) { return s.t < t; });
    auto imu_end = std::lower_bound(imu_it, session.imu.end(), seg.t_end,
                                    [](const ImuSample& s, double t) { return s.t < t; });
    seg.imu = std::span<const ImuSample>(imu_it, imu_end);

    if (session.has_audio()) {
      const std::size_t begin = k * samples_per_second;
      const std::size_t end = std::min(begin + samples_per_second, session.audio.size());
      seg.audio = std::span<const float>(session.audio).subspan(begin, end - begin);
    }
    segments.push_back(seg);
  }
  return segments;
}

std::vector<std::array<double, 3>> accel_of(std::span<const ImuSample> imu) {
  std::vector<std::array<double, 3>> out;
  out.reserve(imu.size());
  for (const auto& s : imu) out.push_back(s.accel);
  return out;
}

std::array<std::vector<double>, 3> uniform_gyro(const Session& session,
                                                double rate_hz, std::size_t n) {
  std::array<std::vector<double>, 3> out;
  for (auto& axis : out) axis.assign(n, 0.0);
  const auto& imu = session.imu;
  if (imu.empty()) return out;

  std::size_t j = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / rate_hz;
    while (j + 1 < imu.size() && imu[j + 1].t <= t) ++j;
    for (std::size_t a = 0; a < 3; ++a) {
      if (t <= imu.front().t) {
        out[a][k] = imu.front().gyro[a];
      } else if (j + 1 >= imu.size()) {
        out[a][k] = imu.back().gyro[a];
      } else {
        const double w = (t - imu[j].t) / (imu[j + 1].t - imu[j].t);
        out[a][k] = (1.0 - w) * imu[j].gyro[a] + w * imu[j + 1].gyro[a];
      }
    }
  }
  return out;
}

}  // namespace earreact
