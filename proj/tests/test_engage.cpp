#include <algorithm>
#include <random>

#include "doctest.h"
#include "earreact/core/errors.hpp"
#include "earreact/engage/features.hpp"
#include "earreact/engage/recommend.hpp"
#include "earreact/engage/tree.hpp"

using namespace earreact;
using namespace earreact::engage;

namespace {

constexpr auto N = ReactionLabel::kNonReaction;
constexpr auto S = ReactionLabel::kSingingHumming;
constexpr auto W = ReactionLabel::kWhistling;
constexpr auto H = ReactionLabel::kHeadMotion;

double accuracy(const DecisionTree& t, const std::vector<TrainingSample>& data) {
  int ok = 0;
  for (const auto& s : data) ok += t.predict(s.features) == s.target;
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

DecisionTree leaf(int value) {
  DecisionTree::Node n;
  n.value = value;
  return DecisionTree({n}, 3, 0);
}

}  // namespace

TEST_CASE("reaction feature examples") {
  const std::vector<ReactionEvent> sing{{S, 10, 40}};
  const auto f = reaction_features(sing, {}, 60.0);
  CHECK(f.singing_duration == doctest::Approx(0.5));
  CHECK(f.vocal_non_reaction_duration == doctest::Approx(0.5));
  CHECK(f.singing_count == doctest::Approx(1.0));
  CHECK(f.vocal_non_reaction_count == doctest::Approx(2.0));

  const auto none = reaction_features({}, {}, 60.0);
  CHECK(none.singing_duration == 0.0);
  CHECK(none.head_motion_duration == 0.0);
  CHECK(none.vocal_non_reaction_duration == 1.0);
  CHECK(none.motion_non_reaction_duration == 1.0);

  const std::vector<ReactionEvent> nods{{H, 0, 10}, {H, 50, 60}, {H, 100, 110}};
  const auto m = reaction_features({}, nods, 120.0);
  CHECK(m.head_motion_duration == doctest::Approx(0.25));
  CHECK(m.head_motion_count == doctest::Approx(1.5));
  CHECK(m.motion_non_reaction_duration == doctest::Approx(0.75));
}

TEST_CASE("reaction feature errors") {
  const std::vector<ReactionEvent> outside{{S, 50, 70}};
  CHECK_THROWS_AS(reaction_features(outside, {}, 60.0), ParameterError);
  const std::vector<ReactionEvent> overlap{{S, 0, 10}, {W, 5, 12}};
  CHECK_THROWS_AS(reaction_features(overlap, {}, 60.0), ParameterError);
  CHECK_THROWS_AS(reaction_features({}, {}, 0.0), ParameterError);
}

TEST_CASE("timeline durations sum to one and scale with the session") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const double dur = 60.0 + static_cast<double>(rng() % 120);
    std::vector<ReactionEvent> vocal, motion;
    double t = 0.0;
    while (true) {
      t += 1.0 + static_cast<double>(rng() % 10);
      const double len = 1.0 + static_cast<double>(rng() % 8);
      if (t + len > dur) break;
      vocal.push_back({rng() % 2 ? S : W, t, t + len});
      t += len;
    }
    t = 0.0;
    while (true) {
      t += static_cast<double>(rng() % 12);
      const double len = 1.0 + static_cast<double>(rng() % 15);
      if (t + len > dur) break;
      motion.push_back({H, t, t + len});
      t += len;
    }
    const auto f = reaction_features(vocal, motion, dur);
    CHECK(f.vocal_non_reaction_duration + f.singing_duration + f.whistling_duration ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f.motion_non_reaction_duration + f.head_motion_duration == doctest::Approx(1.0).epsilon(1e-9));

    auto scale = [](std::vector<ReactionEvent> ev) {
      for (auto& e : ev) {
        e.t_start *= 2;
        e.t_end *= 2;
      }
      return ev;
    };
    const auto g = reaction_features(scale(vocal), scale(motion), 2 * dur);
    CHECK(g.singing_duration == doctest::Approx(f.singing_duration));
    CHECK(g.whistling_duration == doctest::Approx(f.whistling_duration));
    CHECK(g.head_motion_duration == doctest::Approx(f.head_motion_duration));
    CHECK(g.vocal_non_reaction_duration == doctest::Approx(f.vocal_non_reaction_duration));
  }
}

TEST_CASE("reaction index sequence") {
  const std::vector<ReactionLabel> v1{S, N}, m1{H, H};
  CHECK(reaction_index_sequence(v1, m1) == std::vector<int>{1, 3});
  const std::vector<ReactionLabel> v2(4, N), m2(4, N);
  CHECK(reaction_index_sequence(v2, m2) == std::vector<int>(4, 0));
  const std::vector<ReactionLabel> v3{W}, m3{N};
  CHECK(reaction_index_sequence(v3, m3) == std::vector<int>{2});
  CHECK_THROWS_AS(reaction_index_sequence(v1, m3), ParameterError);
}

TEST_CASE("tree on separable and constant data") {
  std::vector<TrainingSample> sep;
  for (int i = 0; i < 10; ++i) sep.push_back({{static_cast<double>(i)}, i < 4 ? 0 : 1});
  const auto t = train_tree(sep);
  CHECK(t.depth() == 1);
  CHECK(accuracy(t, sep) == 1.0);
  CHECK(t.nodes()[0].threshold == doctest::Approx(3.5));

  std::vector<TrainingSample> flat;
  for (int i = 0; i < 7; ++i) flat.push_back({{1.0, 2.0}, i < 3 ? 2 : 5});
  const auto f = train_tree(flat);
  CHECK(f.depth() == 0);
  CHECK(f.predict(std::vector<double>{0.0, 0.0}) == 5);

  std::vector<TrainingSample> tie{{{1.0}, 3}, {{1.0}, 1}};
  CHECK(train_tree(tie).predict(std::vector<double>{1.0}) == 1);
}

TEST_CASE("tree learns XOR at depth 2") {
  std::vector<TrainingSample> xr;
  for (int rep = 0; rep < 2; ++rep) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) xr.push_back({{static_cast<double>(a), static_cast<double>(b)}, a ^ b});
    }
  }
  const auto t = train_tree(xr, 2, 2);
  CHECK(accuracy(t, xr) == 1.0);
  CHECK(t.depth() == 2);
}

TEST_CASE("tree depth bound and leaf routing") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int depth = 0; depth <= 5; ++depth) {
    std::vector<TrainingSample> data;
    for (int i = 0; i < 80; ++i) {
      TrainingSample s{{u(rng), u(rng), u(rng)}, static_cast<int>(rng() % 5) + 1};
      data.push_back(s);
    }
    const auto t = train_tree(data, depth, 2);
    CHECK(t.depth() <= depth);
    std::vector<int> hits(t.nodes().size(), 0);
    for (const auto& s : data) {
      const auto li = t.leaf_index(s.features);
      REQUIRE(li < t.nodes().size());
      CHECK(t.nodes()[li].leaf);
      CHECK(t.nodes()[li].value == t.predict(s.features));
      ++hits[li];
    }
    for (std::size_t i = 0; i < hits.size(); ++i) {
      if (t.nodes()[i].leaf) CHECK(hits[i] >= 1);
    }
  }
}

TEST_CASE("tree errors and serialization") {
  CHECK_THROWS_AS(train_tree(std::span<const TrainingSample>{}), ParameterError);
  std::vector<TrainingSample> ragged{{{1.0, 2.0}, 0}, {{1.0}, 1}};
  CHECK_THROWS_AS(train_tree(ragged), ParameterError);

  std::mt19937_64 rng(8);
  std::vector<TrainingSample> data;
  for (int i = 0; i < 40; ++i) {
    const double x = static_cast<double>(rng() % 100) / 10.0;
    data.push_back({{x, static_cast<double>(rng() % 7)}, x < 3 ? 1 : (x < 6 ? 3 : 5)});
  }
  const auto t = train_tree(data);
  std::string task;
  const auto back = tree_from_json(tree_to_json(t, "rating"), &task);
  CHECK(task == "rating");
  CHECK(tree_to_json(back, "rating") == tree_to_json(t, "rating"));
  for (const auto& s : data) CHECK(back.predict(s.features) == t.predict(s.features));
  CHECK_THROWS_AS(t.predict(std::vector<double>{1.0}), ParameterError);
  CHECK_THROWS_AS(tree_from_json(R"({"root":{"feature":0}})"), ParseError);
}

TEST_CASE("rating and familiarity predictions") {
  const std::vector<double> x{0.3, 0.1, 0.9};
  CHECK(predict_rating(x, leaf(4)) == 4);
  CHECK(predict_rating(x, leaf(9)) == 5);
  CHECK(predict_rating(x, leaf(-2)) == 1);
  CHECK(predict_familiarity(x, leaf(1)) == Familiarity::kKnown);
  CHECK(predict_familiarity(x, leaf(0)) == Familiarity::kUnknown);

  std::vector<TrainingSample> fam;
  for (int i = 0; i < 9; ++i) fam.push_back({{}, i < 6 ? 1 : 0});
  const auto t = train_tree(fam);
  CHECK(predict_familiarity(std::vector<double>{}, t) == Familiarity::kKnown);
}

TEST_CASE("recommend examples") {
  const std::vector<int> p{1, 1, 0};
  const std::vector<PoolEntry> pool{{"B", {0, 0, 0}}, {"A", {1, 1, 0}}};
  const auto r = recommend(p, pool, 5);
  REQUIRE(r.size() == 2);
  CHECK(r[0].song_id == "A");
  CHECK(r[0].distance == 0.0);
  CHECK(r[1].song_id == "B");
  CHECK(r[1].distance == 2.0);

  const std::vector<PoolEntry> one{{"only", {3, 3}}};
  CHECK(recommend(p, one, 5).front().song_id == "only");
  CHECK(recommend(p, pool, 1).size() == 1);
  CHECK_THROWS_AS(recommend(std::vector<int>{}, pool, 1), ParameterError);
  CHECK_THROWS_AS(recommend(p, std::vector<PoolEntry>{}, 1), ParameterError);
}

TEST_CASE("recommend ordering ignores pool order") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int> pattern(5 + rng() % 10);
    for (auto& x : pattern) x = static_cast<int>(rng() % 4);
    std::vector<PoolEntry> pool;
    for (int k = 0; k < 12; ++k) {
      PoolEntry e{"song" + std::to_string(k), std::vector<int>(3 + rng() % 6)};
      for (auto& x : e.pattern) x = static_cast<int>(rng() % 2);
      pool.push_back(e);
    }
    const auto a = recommend(pattern, pool, pool.size());
    std::shuffle(pool.begin(), pool.end(), rng);
    const auto b = recommend(pattern, pool, pool.size());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].song_id == b[i].song_id);
      CHECK(a[i].distance == b[i].distance);
      if (i > 0) CHECK(a[i - 1].distance <= a[i].distance);
    }
  }
}
