#include "tweetlink/linker.h"

#include <gtest/gtest.h>

#include "oracles.h"
#include "test_util.h"
#include "tweetlink/corpus.h"
#include "tweetlink/evalx.h"
#include "tweetlink/random.h"

namespace tweetlink {
namespace {

TEST(Cosine, Examples) {
  EXPECT_EQ(Cosine(Vector{1, 0}, Vector{1, 0}), 1.0);
  EXPECT_EQ(Cosine(Vector{1, 0}, Vector{0, 1}), 0.0);
  EXPECT_EQ(Cosine(Vector{0, 0}, Vector{1, 1}), 0.0);
  EXPECT_ERROR_CODE(Cosine(Vector{1, 0}, Vector{1, 0, 0}), kDimMismatch);
}

TEST(ScoreMatrix, Examples) {
  const VectorMap single = {{"x", {0.3, 0.4}}};
  EXPECT_EQ(ScoreMatrix({"x"}, single, {"x"}, single).values(0, 0), 1.0);

  const VectorMap basis = {{"e1", {1, 0}}, {"e2", {0, 1}}};
  const SimilarityMatrix m = ScoreMatrix({"e1", "e2"}, basis, {"e1", "e2"}, basis);
  EXPECT_EQ(m.values(0, 0), 1.0);
  EXPECT_EQ(m.values(0, 1), 0.0);
  EXPECT_EQ(m.values(1, 0), 0.0);
  EXPECT_EQ(m.values(1, 1), 1.0);

  EXPECT_ERROR_CODE(ScoreMatrix({"e1"}, basis, {"e3"}, basis), kMissingEmbedding);
}

TEST(ScoreMatrix, EntriesBounded) {
  Rng rng(4);
  VectorMap t, a;
  std::vector<std::string> tids, aids;
  for (int i = 0; i < 20; ++i) {
    Vector v(6), w(6);
    for (auto& x : v) x = UniformRange(rng, -1e3, 1e3);
    for (auto& x : w) x = UniformRange(rng, -1e-3, 1e-3);
    tids.push_back("t" + std::to_string(i));
    aids.push_back("a" + std::to_string(i));
    t[tids.back()] = v;
    a[aids.back()] = w;
  }
  t["same"] = a["a0"];
  tids.push_back("same");
  const auto m = ScoreMatrix(tids, t, aids, a);
  for (double v : m.values.data()) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
}

SimilarityMatrix Sim(std::vector<std::vector<double>> rows) {
  SimilarityMatrix s;
  s.values = Matrix(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s.tweet_ids.push_back("t" + std::to_string(i));
    for (std::size_t j = 0; j < rows[i].size(); ++j) s.values(i, j) = rows[i][j];
  }
  for (std::size_t j = 0; j < rows[0].size(); ++j) s.article_ids.push_back("a" + std::to_string(j));
  return s;
}

TEST(Classify, Examples) {
  const auto c = Classify(Sim({{0.9, 0.1}}), 0.5);
  EXPECT_EQ(c.values(0, 0), 1);
  EXPECT_EQ(c.values(0, 1), -1);
  EXPECT_EQ(Classify(Sim({{0.25}}), 0.25).values(0, 0), 1);
  const auto none = Classify(Sim({{1.0, -1.0}}), 1.5);
  EXPECT_EQ(none.values(0, 0), -1);
  EXPECT_EQ(none.values(0, 1), -1);
}

TEST(Classify, MonotoneInThreshold) {
  Rng rng(6);
  std::vector<std::vector<double>> rows(5, std::vector<double>(5));
  for (auto& r : rows) {
    for (auto& x : r) x = UniformRange(rng, -1, 1);
  }
  const auto sim = Sim(rows);
  for (double lo = -1.0; lo < 1.0; lo += 0.1) {
    const auto a = Classify(sim, lo);
    const auto b = Classify(sim, lo + 0.05);
    for (std::size_t i = 0; i < a.values.data().size(); ++i) {
      if (a.values.data()[i] == -1) EXPECT_EQ(b.values.data()[i], -1);
    }
  }
}

TEST(Calibrate, WorkedExample) {
  const Vector scores = {0.9, 0.8, 0.2, 0.1};
  const std::vector<int> labels = {1, 1, -1, -1};
  const Calibration c = CalibrateThreshold(scores, labels);
  EXPECT_DOUBLE_EQ(c.threshold, 0.5);
  EXPECT_EQ(c.f1, 1.0);
}

TEST(Calibrate, NoLabeledCells) {
  GroundTruthMatrix gt{{"t0"}, {"a0"}, Grid<int>(1, 1, 0)};
  EXPECT_ERROR_CODE(CalibrateThreshold(Sim({{0.3}}), gt), kNoLabeledCells);
}

TEST(Calibrate, OptimalAndSelfConsistent) {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + UniformIndex(rng, 40);
    Vector scores(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse grid so ties are common.
      scores[i] = std::round(UniformRange(rng, -1, 1) * 8) / 8;
      labels[i] = UniformUnit(rng) < 0.4 ? 1 : -1;
    }
    labels[0] = 1;
    const Calibration c = CalibrateThreshold(scores, labels);
    const std::vector<std::vector<double>> s = {std::vector<double>(scores.begin(), scores.end())};
    const std::vector<std::vector<int>> l = {labels};
    EXPECT_EQ(c.f1, oracle::F1(oracle::Confusion(s, l, c.threshold)));
    for (double t : CandidateThresholds(scores)) {
      EXPECT_GE(c.f1, oracle::F1(oracle::Confusion(s, l, t)));
    }
  }
}

TEST(Calibrate, DecisionsInvariantToTweetScaling) {
  Rng rng(12);
  VectorMap t, a;
  std::vector<std::string> tids, aids;
  for (int i = 0; i < 8; ++i) {
    tids.push_back("t" + std::to_string(i));
    aids.push_back("a" + std::to_string(i));
    Vector v(4), w(4);
    for (auto& x : v) x = UniformRange(rng, -1, 1);
    for (auto& x : w) x = UniformRange(rng, -1, 1);
    t[tids.back()] = v;
    a[aids.back()] = w;
  }
  std::vector<LinkedPair> pairs;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      if (UniformUnit(rng) < 0.5) {
        pairs.push_back({tids[i], aids[j], UniformUnit(rng) < 0.5 ? PairLabel::kMatch
                                                                  : PairLabel::kNoMatch});
      }
    }
  }
  pairs.insert(pairs.begin(), LinkedPair{tids[0], aids[0], PairLabel::kMatch});
  std::vector<LinkedPair> deduped;
  for (const auto& p : pairs) {
    bool seen = false;
    for (const auto& q : deduped) seen |= q.tweet_id == p.tweet_id && q.article_id == p.article_id;
    if (!seen) deduped.push_back(p);
  }
  const auto gt = BuildGroundTruth(deduped, tids, aids);
  const auto sim = ScoreMatrix(tids, t, aids, a);
  VectorMap scaled = t;
  for (auto& [id, v] : scaled) {
    for (auto& x : v) x *= 7.5;
  }
  const auto sim2 = ScoreMatrix(tids, scaled, aids, a);
  const auto d1 = Classify(sim, CalibrateThreshold(sim, gt).threshold);
  const auto d2 = Classify(sim2, CalibrateThreshold(sim2, gt).threshold);
  EXPECT_EQ(d1.values, d2.values);
}

TEST(MatrixCsv, RoundTrip) {
  const auto sim = Sim({{0.1, -0.25}, {1.0 / 3.0, 0.0}});
  const std::string csv = MatrixToCsv(sim);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "tweet_id,a0,a1");
  const auto back = MatrixFromCsv(csv);
  EXPECT_EQ(back.tweet_ids, sim.tweet_ids);
  EXPECT_EQ(back.article_ids, sim.article_ids);
  EXPECT_EQ(back.values, sim.values);
}

TEST(MatrixCsv, RaggedRowRejected) {
  EXPECT_ANY_THROW(MatrixFromCsv("tweet_id,a0,a1\nt0,0.1\n"));
}

}  // namespace
}  // namespace tweetlink
