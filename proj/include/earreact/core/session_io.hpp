#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "earreact/core/session.hpp"

namespace earreact {

// Session directory layout:
//   meta.json   {id, subject_id, song_id, place_tag, start_offset_in_song}
//   imu.csv     header t,ax,ay,az,gx,gy,gz
//   audio.wav   mono 16-bit PCM (optional)
//   labels.csv  ground truth t_start,t_end,label (optional)
// Vocal playback inputs (scores.jsonl, pitch.csv) are read by the vocal module.

std::vector<ImuSample> read_imu_csv(std::istream& in);
void write_imu_csv(std::ostream& out, const std::vector<ImuSample>& imu);

/// Loads meta.json, imu.csv and audio.wav (if present). Throws ParseError.
Session load_session(const std::filesystem::path& dir);

/// Writes meta.json, imu.csv and, when the session has audio, audio.wav.
void write_session(const std::filesystem::path& dir, const Session& session);

}  // namespace earreact
