#include "earreact/core/session_io.hpp"

#include <fstream>
#include <sstream>

#include "earreact/core/errors.hpp"
#include "earreact/core/text.hpp"
#include "earreact/core/wav.hpp"
#include "json.hpp"

namespace earreact {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<ImuSample> read_imu_csv(std::istream& in) {
  std::vector<ImuSample> imu;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      if (row != "t,ax,ay,az,gx,gy,gz") {
        throw ParseError("imu.csv line 1: expected header t,ax,ay,az,gx,gy,gz");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(row, ',');
    if (f.size() != 7) {
      throw ParseError("imu.csv line " + std::to_string(line_no) + ": expected 7 fields");
    }
    try {
      ImuSample s;
      s.t = parse_double(f[0]);
      for (std::size_t a = 0; a < 3; ++a) {
        s.accel[a] = parse_double(f[1 + a]);
        s.gyro[a] = parse_double(f[4 + a]);
      }
      imu.push_back(s);
    } catch (const ParseError& e) {
      throw ParseError("imu.csv line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw ParseError("imu.csv is empty");
  return imu;
}

void write_imu_csv(std::ostream& out, const std::vector<ImuSample>& imu) {
  out << "t,ax,ay,az,gx,gy,gz\n";
  for (const auto& s : imu) {
    out << format_number(s.t);
    for (double v : s.accel) out << ',' << format_number(v);
    for (double v : s.gyro) out << ',' << format_number(v);
    out << '\n';
  }
}

Session load_session(const fs::path& dir) {
  Session session;
  {
    std::ifstream in(dir / "meta.json");
    if (!in) throw ParseError("cannot open " + (dir / "meta.json").string());
    try {
      const json meta = json::parse(in);
      session.id = meta.at("id").get<std::string>();
      session.subject_id = meta.at("subject_id").get<std::string>();
      session.song_id = meta.at("song_id").get<std::string>();
      session.place_tag = meta.value("place_tag", std::string{});
      session.start_offset_in_song = meta.value("start_offset_in_song", 0.0);
    } catch (const json::exception& e) {
      throw ParseError((dir / "meta.json").string() + ": " + e.what());
    }
  }
  {
    std::ifstream in(dir / "imu.csv");
    if (!in) throw ParseError("cannot open " + (dir / "imu.csv").string());
    session.imu = read_imu_csv(in);
  }
  if (fs::exists(dir / "audio.wav")) {
    WavAudio wav = read_wav(dir / "audio.wav");
    session.audio = std::move(wav.samples);
    session.audio_rate_hz = wav.rate_hz;
  }
  return session;
}

void write_session(const fs::path& dir, const Session& session) {
  fs::create_directories(dir);
  json meta;
  meta["id"] = session.id;
  meta["subject_id"] = session.subject_id;
  meta["song_id"] = session.song_id;
  meta["place_tag"] = session.place_tag;
  meta["start_offset_in_song"] = session.start_offset_in_song;
  std::ofstream(dir / "meta.json") << meta.dump(2) << '\n';

  std::ofstream imu_out(dir / "imu.csv");
  write_imu_csv(imu_out, session.imu);
  if (session.has_audio()) write_wav(dir / "audio.wav", session.audio, session.audio_rate_hz);
}

}  // namespace earreact
