#include "earreact/musicinfo/note_track.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "earreact/core/text.hpp"

namespace earreact::musicinfo {

namespace fs = std::filesystem;

NoteTrack read_note_track(std::istream& in, std::string song_id) {
  NoteTrack track;
  track.song_id = std::move(song_id);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    const std::string where = "note track line " + std::to_string(line_no) + ": ";
    if (!header_seen) {
      if (row != "t,chroma") throw ParseError(where + "expected header t,chroma");
      header_seen = true;
      continue;
    }
    const auto f = split(row, ',');
    if (f.size() != 2) throw ParseError(where + "expected 2 fields");
    double t = 0.0;
    try {
      t = parse_double(f[0]);
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
    const double expected = static_cast<double>(track.symbols.size()) * kNoteHopSeconds;
    if (std::abs(t - expected) > 1e-6) {
      throw ParseError(where + "expected t = " + format_number(expected) + " (0.1 s hop)");
    }
    if (f[1] == "U") {
      track.symbols.push_back(dsp::Chroma::unvoiced());
      continue;
    }
    double v = 0.0;
    try {
      v = parse_double(f[1]);
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
    if (v != std::floor(v) || v < 0 || v > 11) {
      throw ParseError(where + "chroma must be 0..11 or U, got " + f[1]);
    }
    track.symbols.push_back(dsp::Chroma::pitch_class(static_cast<int>(v)));
  }
  if (!header_seen) throw ParseError("note track line 1: empty file");
  if (track.symbols.empty()) throw ParseError("note track has no symbols");
  return track;
}

NoteTrack load_note_track(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return read_note_track(in, path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_note_track(std::ostream& out, const NoteTrack& track) {
  out << "t,chroma\n";
  for (std::size_t i = 0; i < track.symbols.size(); ++i) {
    out << i / 10 << '.' << i % 10 << ',' << track.symbols[i].to_string() << '\n';
  }
}

dsp::ChromaSeq note_window(const NoteTrack& track, double t0, double t1, double margin) {
  if (!(t0 < t1)) throw ParameterError("note window requires t0 < t1");
  if (margin < 0) throw ParameterError("note window margin must be non-negative");
  const double begin = std::max(0.0, t0 - margin);
  const double end = std::min(track.duration(), t1 + margin);
  // Snap to the 0.1 s grid, tolerating floating-point noise in t / hop.
  const auto first = static_cast<long long>(std::floor(begin / kNoteHopSeconds + 1e-6));
  const auto last = static_cast<long long>(std::ceil(end / kNoteHopSeconds - 1e-6));
  if (t0 >= track.duration() || t1 <= 0.0 || first >= last) {
    throw EmptyWindowError("window [" + format_number(t0) + ", " + format_number(t1) +
                           ") lies outside note track " + track.song_id);
  }
  return dsp::ChromaSeq(track.symbols.begin() + first, track.symbols.begin() + last);
}

void MusicInfoStore::add(NoteTrack track) {
  auto id = track.song_id;
  tracks_.insert_or_assign(std::move(id), std::move(track));
}

MusicInfoStore MusicInfoStore::load_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("note track directory not found: " + dir.string());
  MusicInfoStore store;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) store.add(load_note_track(f));
  return store;
}

const NoteTrack* MusicInfoStore::find(const std::string& song_id) const {
  const auto it = tracks_.find(song_id);
  return it == tracks_.end() ? nullptr : &it->second;
}

const NoteTrack& MusicInfoStore::at(const std::string& song_id) const {
  if (const auto* t = find(song_id)) return *t;
  throw ConfigError("no note track for song '" + song_id + "'");
}

}  // namespace earreact::musicinfo
