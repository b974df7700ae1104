#include "earreact/vocal/pitch_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "earreact/core/errors.hpp"
#include "earreact/core/text.hpp"

namespace earreact::vocal {

PitchPlayback::PitchPlayback(std::vector<PitchEstimate> estimates, double hop_s) : hop_s_(hop_s) {
  if (!(hop_s > 0)) throw ParameterError("pitch hop must be positive");
  for (const auto& e : estimates) {
    const long long k = std::llround(e.t / hop_s_);
    if (k < 0) continue;
    const auto idx = static_cast<std::size_t>(k);
    if (idx >= estimates_.size()) {
      estimates_.resize(idx + 1);
      present_.resize(idx + 1, false);
    }
    estimates_[idx] = e;
    present_[idx] = true;
  }
}

PitchPlayback PitchPlayback::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return PitchPlayback(read_pitch_csv(in));
}

std::vector<PitchEstimate> PitchPlayback::track(const PitchQuery& q) const {
  const auto first = static_cast<long long>(std::ceil(q.t_start / hop_s_ - 1e-6));
  const auto last = static_cast<long long>(std::ceil(q.t_end / hop_s_ - 1e-6));
  std::vector<PitchEstimate> out;
  for (long long k = std::max(0LL, first); k < last; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    if (idx >= present_.size() || !present_[idx]) {
      throw ParameterError("pitch playback has no estimate at t = " +
                           format_number(static_cast<double>(k) * hop_s_));
    }
    out.push_back(estimates_[idx]);
  }
  return out;
}

std::vector<PitchEstimate> read_pitch_csv(std::istream& in) {
  std::vector<PitchEstimate> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    const std::string where = "pitch.csv line " + std::to_string(line_no) + ": ";
    if (!header_seen) {
      if (row != "t,f0,confidence") throw ParseError(where + "expected header t,f0,confidence");
      header_seen = true;
      continue;
    }
    const auto f = split(row, ',');
    if (f.size() != 3) throw ParseError(where + "expected 3 fields");
    try {
      out.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2])});
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
  }
  if (!header_seen) throw ParseError("pitch.csv is empty");
  return out;
}

void write_pitch_csv(std::ostream& out, std::span<const PitchEstimate> estimates) {
  out << "t,f0,confidence\n";
  for (const auto& e : estimates) {
    out << format_number(e.t) << ',' << format_number(e.f0_hz) << ','
        << format_number(e.confidence) << '\n';
  }
}

AutocorrelationPitchTracker::AutocorrelationPitchTracker(double min_hz, double max_hz, double hop_s)
    : min_hz_(min_hz), max_hz_(max_hz), hop_s_(hop_s) {
  if (!(min_hz > 0) || !(max_hz > min_hz) || !(hop_s > 0)) {
    throw ParameterError("pitch tracker needs 0 < min_hz < max_hz and a positive hop");
  }
}

PitchEstimate AutocorrelationPitchTracker::estimate(std::span<const float> frame,
                                                    double rate_hz) const {
  PitchEstimate est;
  const auto min_lag = static_cast<std::size_t>(std::floor(rate_hz / max_hz_));
  const auto max_lag = static_cast<std::size_t>(std::ceil(rate_hz / min_hz_));
  if (min_lag < 1 || frame.size() < 2 * max_lag) {
    throw ParameterError("pitch frame too short for the lag range");
  }
  frame = frame.first(std::min(frame.size(), 3 * max_lag));

  // r[lag] for lag in [min_lag - 1, max_lag + 1] so interior peaks can be refined.
  const std::size_t lo = min_lag - 1;
  const std::size_t hi = max_lag + 1;
  std::vector<double> r(hi - lo + 1, 0.0);
  for (std::size_t lag = lo; lag <= hi; ++lag) {
    const std::size_t n = frame.size() - lag;
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = frame[i];
      const double y = frame[i + lag];
      xy += x * y;
      xx += x * x;
      yy += y * y;
    }
    r[lag - lo] = (xx > 0 && yy > 0) ? xy / std::sqrt(xx * yy) : 0.0;
  }

  auto at = [&](std::size_t lag) { return r[lag - lo]; };
  double best = 0.0;
  for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
    if (at(lag) > at(lag - 1) && at(lag) >= at(lag + 1)) best = std::max(best, at(lag));
  }
  if (best <= 0.0) return est;

  for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
    const double c = at(lag);
    if (c > at(lag - 1) && c >= at(lag + 1) && c >= 0.9 * best) {
      const double a = at(lag - 1);
      const double b = at(lag + 1);
      const double denom = a - 2.0 * c + b;
      const double shift = denom != 0.0 ? 0.5 * (a - b) / denom : 0.0;
      est.f0_hz = rate_hz / (static_cast<double>(lag) + shift);
      est.confidence = std::clamp(c, 0.0, 1.0);
      break;
    }
  }
  return est;
}

std::vector<PitchEstimate> AutocorrelationPitchTracker::track(const PitchQuery& q) const {
  const auto hop = static_cast<std::size_t>(std::llround(hop_s_ * q.rate_hz));
  const auto frames = static_cast<std::size_t>(std::llround((q.t_end - q.t_start) / hop_s_));
  if (hop == 0 || q.audio.size() < frames * hop) {
    throw ParameterError("pitch query audio shorter than its time span");
  }
  std::vector<PitchEstimate> out;
  out.reserve(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    PitchEstimate e = estimate(q.audio.subspan(f * hop, hop), q.rate_hz);
    e.t = q.t_start + static_cast<double>(f) * hop_s_;
    out.push_back(e);
  }
  return out;
}

}  // namespace earreact::vocal
