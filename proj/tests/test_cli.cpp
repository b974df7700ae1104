#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "earreact/core/events.hpp"
#include "earreact/engage/tree.hpp"
#include "earreact/vocal/hmm.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string err;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "earreact_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

// Runs the installed binary; `env` is prepended to the shell command.
CliResult cli(const std::string& args, const std::string& env = "") {
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd = env + " " + EARREACT_CLI_PATH + " " + args + " > /dev/null 2> " + err.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::string p(const fs::path& path) { return path.string(); }

const char* kSessionSpec = R"({
  "session_id": "demo", "subject_id": "u0", "song_id": "tune", "duration_s": 30,
  "place": "lounge", "start_offset_in_song": 4.0,
  "script": [{"t_start": 3, "t_end": 11, "label": "singing_humming"},
             {"t_start": 16, "t_end": 28, "label": "head_motion"}]
})";

const char* kConfig = R"({"vocal": {"dtw_threshold": 40, "smoothing": false}})";

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(cli("").code == 1);
  const auto missing = cli("detect --pipeline vocal --out x.jsonl");
  CHECK(missing.code == 1);
  CHECK(missing.err.find("--session") != std::string::npos);
  CHECK(cli("detect --session a --corpus b --out x").code == 1);
  CHECK(cli("eval --pred a --truth b --report c --bogus").code == 1);
  CHECK(cli("frobnicate").code == 1);
  CHECK(cli("detect --pipeline sideways --session a --out b").code == 1);
  CHECK(cli("train-tree --task mood --data a --out b").code == 1);
}

TEST_CASE("simulate, detect and eval a session") {
  const auto dir = work_dir() / "single";
  write(work_dir() / "spec.json", kSessionSpec);
  write(work_dir() / "config.json", kConfig);
  REQUIRE(cli("simulate --spec " + p(work_dir() / "spec.json") + " --seed 7 --out " + p(dir)).code == 0);
  CHECK(fs::exists(dir / "imu.csv"));
  CHECK(fs::exists(dir / "audio.wav"));
  CHECK(fs::exists(dir / "labels.csv"));
  CHECK(fs::exists(dir / "notes" / "tune.csv"));

  const auto events = work_dir() / "events.jsonl";
  const auto r = cli("detect --pipeline vocal --session " + p(dir) + " --config " +
                     p(work_dir() / "config.json") + " --out " + p(events) + " --stats " +
                     p(work_dir() / "stats.json"));
  REQUIRE(r.code == 0);
  const auto ev = earreact::read_events_jsonl(events);
  CHECK_FALSE(ev.empty());
  for (const auto& e : ev) CHECK(earreact::is_vocal_label(e.event.label));

  const auto report = work_dir() / "report.json";
  REQUIRE(cli("eval --pred " + p(events) + " --truth " + p(dir / "labels.csv") + " --report " +
              p(report) + " --stats " + p(work_dir() / "stats.json")).code == 0);
  const auto j = nlohmann::json::parse(slurp(report));
  CHECK(j.contains("macro_f1"));
  CHECK(j["macro_f1"].get<double>() > 0.8);

  const auto both = work_dir() / "both.jsonl";
  REQUIRE(cli("detect --session " + p(dir) + " --config " + p(work_dir() / "config.json") +
              " --out " + p(both)).code == 0);
  bool head = false;
  for (const auto& e : earreact::read_events_jsonl(both)) {
    head |= e.event.label == earreact::ReactionLabel::kHeadMotion;
  }
  CHECK(head);
}

TEST_CASE("data and config errors exit with 2") {
  write(work_dir() / "bad_config.json", R"({"vocal": {"dtw_treshold": 40}})");
  const auto dir = work_dir() / "single";
  if (!fs::exists(dir)) {
    write(work_dir() / "spec.json", kSessionSpec);
    REQUIRE(cli("simulate --spec " + p(work_dir() / "spec.json") + " --out " + p(dir)).code == 0);
  }
  const auto out = p(work_dir() / "e.jsonl");
  CHECK(cli("detect --session " + p(dir) + " --config " + p(work_dir() / "bad_config.json") +
            " --out " + out).code == 2);
  CHECK(cli("detect --session " + p(work_dir() / "nowhere") + " --out " + out).code == 2);
  CHECK(cli("detect --pipeline vocal --session " + p(dir) + " --out " + out,
            "EARREACT_CONFIG=" + p(work_dir() / "bad_config.json")).code == 2);
  // Default config enables smoothing, which needs an HMM.
  CHECK(cli("detect --pipeline vocal --session " + p(dir) + " --out " + out).code == 2);
  write(work_dir() / "garbage.jsonl", "{not json}\n");
  CHECK(cli("eval --pred " + p(work_dir() / "garbage.jsonl") + " --truth " + p(dir / "labels.csv") +
            " --report " + p(work_dir() / "r.json")).code == 2);
}

TEST_CASE("corpus training and detection") {
  const auto corpus = work_dir() / "corpus";
  write(work_dir() / "corpus_spec.json",
        R"({"corpus": {"subjects": 2, "sessions_per_subject": 2, "songs": 2, "duration_s": 30,
                       "with_audio": false}, "seed": 3})");
  REQUIRE(cli("simulate --spec " + p(work_dir() / "corpus_spec.json") + " --out " + p(corpus)).code == 0);
  CHECK(fs::exists(corpus / "u00_s0" / "scores.jsonl"));

  write(work_dir() / "config.json", kConfig);
  const auto hmm = work_dir() / "hmm.json";
  REQUIRE(cli("train-hmm --data " + p(corpus) + " --config " + p(work_dir() / "config.json") +
              " --out " + p(hmm)).code == 0);
  CHECK_NOTHROW(earreact::vocal::load_hmm(hmm).validate());

  const auto out = work_dir() / "pred";
  REQUIRE(cli("detect --pipeline vocal --corpus " + p(corpus) + " --hmm " + p(hmm) + " --out " +
              p(out) + " --workers 2").code == 0);
  CHECK(fs::exists(out / "u01_s1.events.jsonl"));
  const auto report = work_dir() / "corpus_report.json";
  REQUIRE(cli("eval --pred " + p(out) + " --truth " + p(corpus) + " --report " + p(report)).code == 0);
  const auto j = nlohmann::json::parse(slurp(report));
  CHECK(j.contains("fold_mean_macro_f1"));
}

TEST_CASE("trees and recommendation") {
  write(work_dir() / "eng_spec.json", R"({"engagement": {"subjects": 4, "per_subject": 10}, "seed": 1})");
  const auto eng = work_dir() / "eng";
  REQUIRE(cli("simulate --spec " + p(work_dir() / "eng_spec.json") + " --out " + p(eng)).code == 0);
  const auto tree = work_dir() / "rating_tree.json";
  REQUIRE(cli("train-tree --task rating --data " + p(eng / "samples.jsonl") + " --out " + p(tree) +
              " --max-depth 3").code == 0);
  std::string task;
  const auto t = earreact::engage::load_tree(tree, &task);
  CHECK(task == "rating");
  CHECK(t.depth() <= 3);

  const auto pool = work_dir() / "pool";
  fs::create_directories(pool);
  write(pool / "a.jsonl", R"({"label":"singing_humming","t_start":0,"t_end":4})" "\n"
                          R"({"label":"non_reaction","t_start":4,"t_end":10})" "\n");
  write(pool / "b.jsonl", R"({"label":"head_motion","t_start":0,"t_end":10})" "\n");
  const auto ranking = work_dir() / "ranking.json";
  REQUIRE(cli("recommend --pattern " + p(pool / "a.jsonl") + " --pool " + p(pool) + " --top 2 --out " +
              p(ranking)).code == 0);
  const auto j = nlohmann::json::parse(slurp(ranking));
  REQUIRE(j.size() == 2);
  CHECK(j[0]["song_id"] == "a");
  CHECK(j[0]["distance"].get<double>() == 0.0);
}
