#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "earreact/core/errors.hpp"
#include "earreact/musicinfo/note_track.hpp"

using namespace earreact;
using namespace earreact::musicinfo;

namespace {

std::string csv_of(std::size_t rows) {
  std::ostringstream os;
  os << "t,chroma\n";
  for (std::size_t i = 0; i < rows; ++i) {
    os << i / 10 << '.' << i % 10 << ',';
    if (i % 13 == 0) {
      os << "U\n";
    } else {
      os << i % 12 << '\n';
    }
  }
  return os.str();
}

NoteTrack track_of(std::size_t rows) {
  std::istringstream in(csv_of(rows));
  return read_note_track(in, "song");
}

}  // namespace

TEST_CASE("reading a note track") {
  const auto t = track_of(1800);
  CHECK(t.symbols.size() == 1800);
  CHECK(t.duration() == doctest::Approx(180.0));
  CHECK_FALSE(t.symbols[0].voiced());
  CHECK(t.symbols[5].value() == 5);
}

TEST_CASE("malformed note tracks name the line") {
  auto fails_at = [](const std::string& text, const std::string& line) {
    std::istringstream in(text);
    try {
      read_note_track(in, "x");
    } catch (const ParseError& e) {
      return std::string(e.what()).find(line) != std::string::npos;
    }
    return false;
  };
  CHECK(fails_at("t,chroma\n0.0,1\n0.1,12\n", "3"));
  CHECK(fails_at("t,chroma\n0.0,1\n0.2,3\n", "3"));
  CHECK(fails_at("t,chroma\n0.0,x\n", "2"));
  CHECK(fails_at("t,chroma\n0.0\n", "2"));
  std::istringstream empty("");
  CHECK_THROWS_AS(read_note_track(empty, "x"), ParseError);
  std::istringstream header_only("t,chroma\n");
  CHECK_THROWS_AS(read_note_track(header_only, "x"), ParseError);
}

TEST_CASE("note_window examples") {
  const auto t = track_of(300);
  const auto w = note_window(t, 10.0, 11.0);
  REQUIRE(w.size() == 20);
  CHECK(w.front() == t.symbols[95]);
  CHECK(w.back() == t.symbols[114]);
  CHECK(note_window(t, 0.0, 1.0).size() == 15);
  CHECK(note_window(t, 29.0, 30.0).size() == 15);
  CHECK_THROWS_AS(note_window(t, 31.0, 32.0), EmptyWindowError);
  CHECK_THROWS_AS(note_window(t, 2.0, 2.0), ParameterError);
}

TEST_CASE("aligned windows without margin") {
  const auto t = track_of(600);
  for (int a = 0; a < 55; a += 3) {
    for (int len = 1; len <= 5; ++len) {
      const double t0 = a * 1.0, t1 = t0 + len;
      CHECK(note_window(t, t0, t1, 0.0).size() == static_cast<std::size_t>(len * 10));
    }
  }
  CHECK(note_window(t, 1.3, 2.1, 0.0).size() == 8);
}

TEST_CASE("serialization is canonical") {
  const std::string text = csv_of(257);
  std::istringstream in(text);
  const auto t = read_note_track(in, "s");
  std::ostringstream out;
  write_note_track(out, t);
  CHECK(out.str() == text);
}

TEST_CASE("store lookup") {
  const auto dir = std::filesystem::temp_directory_path() / "earreact_notes_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "alpha.csv") << csv_of(50);
    std::ofstream(dir / "beta.csv") << csv_of(70);
  }
  const auto store = MusicInfoStore::load_directory(dir);
  CHECK(store.size() == 2);
  CHECK(store.at("beta").symbols.size() == 70);
  CHECK(store.at("alpha").song_id == "alpha");
  CHECK(store.find("gamma") == nullptr);
  CHECK_THROWS_AS(store.at("gamma"), ConfigError);
  std::filesystem::remove_all(dir);
}
