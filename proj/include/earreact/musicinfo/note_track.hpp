#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "earreact/core/errors.hpp"
#include "earreact/dsp/chroma.hpp"

namespace earreact::musicinfo {

inline constexpr double kNoteHopSeconds = 0.1;

/// The requested window does not overlap the note track.
class EmptyWindowError : public Error {
 public:
  using Error::Error;
};

/// Pitch-class sequence of a song's vocal line, one symbol per 0.1 s.
struct NoteTrack {
  std::string song_id;
  dsp::ChromaSeq symbols;

  double duration() const { return static_cast<double>(symbols.size()) * kNoteHopSeconds; }
};

/// CSV with header `t,chroma`; row i has t = i * 0.1 and chroma 0..11 or U.
/// Throws ParseError naming the offending line.
NoteTrack read_note_track(std::istream& in, std::string song_id);
NoteTrack load_note_track(const std::filesystem::path& path);
/// Canonical form: t printed with one decimal.
void write_note_track(std::ostream& out, const NoteTrack& track);

/// Symbols covering [max(0, t0 - margin), min(end, t1 + margin)).
/// Throws ParameterError unless t0 < t1, EmptyWindowError when the window
/// misses the track.
dsp::ChromaSeq note_window(const NoteTrack& track, double t0, double t1, double margin = 0.5);

/// Read-only song_id -> NoteTrack map.
class MusicInfoStore {
 public:
  MusicInfoStore() = default;

  void add(NoteTrack track);
  /// Loads every `<song_id>.csv` in dir.
  static MusicInfoStore load_directory(const std::filesystem::path& dir);

  const NoteTrack* find(const std::string& song_id) const;
  /// Throws ConfigError when the song is unknown.
  const NoteTrack& at(const std::string& song_id) const;
  std::size_t size() const { return tracks_.size(); }

 private:
  std::map<std::string, NoteTrack> tracks_;
};

}  // namespace earreact::musicinfo
