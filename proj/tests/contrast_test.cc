#include "tweetlink/contrast.h"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "oracles.h"
#include "test_util.h"
#include "tweetlink/linker.h"
#include "tweetlink/random.h"

namespace tweetlink {
namespace {

TEST(CosineEmbeddingLoss, AnalyticCases) {
  EXPECT_EQ(CosineEmbeddingLoss(Vector{1, 0}, Vector{1, 0}, 1), 0.0);
  EXPECT_EQ(CosineEmbeddingLoss(Vector{1, 0}, Vector{0, 1}, -1), 0.0);
  EXPECT_EQ(CosineEmbeddingLoss(Vector{1, 0}, Vector{1, 0}, -1), 1.0);
}

TEST(CosineEmbeddingLoss, ScaleInvariant) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    Vector a(5), b(5);
    for (auto& x : a) x = UniformRange(rng, -1, 1);
    for (auto& x : b) x = UniformRange(rng, -1, 1);
    const double s = UniformRange(rng, 0.1, 10);
    Vector scaled = a;
    for (auto& x : scaled) x *= s;
    for (int y : {1, -1}) {
      EXPECT_NEAR(CosineEmbeddingLoss(a, b, y, 0.1), CosineEmbeddingLoss(scaled, b, y, 0.1), 1e-12);
    }
  }
}

TEST(CosineEmbeddingLoss, GradientZeroAtMinimum) {
  const LossGradient g = CosineEmbeddingLossGradient(Vector{0.3, -2}, Vector{0.3, -2}, 1);
  for (double v : g.d_e1) EXPECT_NEAR(v, 0.0, 1e-15);
  for (double v : g.d_e2) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(CosineEmbeddingLoss, InactiveHingeHasZeroGradient) {
  const LossGradient g = CosineEmbeddingLossGradient(Vector{1, 0.2}, Vector{-1, 0.1}, -1);
  for (double v : g.d_e1) EXPECT_EQ(v, 0.0);
  for (double v : g.d_e2) EXPECT_EQ(v, 0.0);
}

TEST(CosineEmbeddingLoss, GradientMatchesFiniteDifferences) {
  Rng rng(21);
  int checked = 0;
  while (checked < 100) {
    const std::size_t d = 2 + UniformIndex(rng, 6);
    Vector a(d), b(d);
    for (auto& x : a) x = UniformRange(rng, -1, 1);
    for (auto& x : b) x = UniformRange(rng, -1, 1);
    const int y = UniformUnit(rng) < 0.5 ? 1 : -1;
    const double margin = y == -1 ? UniformRange(rng, -0.5, 0.5) : 0.0;
    // Skip inputs sitting on the hinge kink where the derivative is undefined.
    if (y == -1 && std::abs(Cosine(a, b) - margin) < 1e-3) continue;
    const LossGradient g = CosineEmbeddingLossGradient(a, b, y, margin);
    const auto fa = oracle::CentralDiff(
        [&](const Vector& x) { return CosineEmbeddingLoss(x, b, y, margin); }, a, 1e-6);
    const auto fb = oracle::CentralDiff(
        [&](const Vector& x) { return CosineEmbeddingLoss(a, x, y, margin); }, b, 1e-6);
    for (std::size_t i = 0; i < d; ++i) {
      EXPECT_NEAR(g.d_e1[i], fa[i], 1e-5 * std::max(1.0, std::abs(fa[i])));
      EXPECT_NEAR(g.d_e2[i], fb[i], 1e-5 * std::max(1.0, std::abs(fb[i])));
    }
    ++checked;
  }
}

TEST(SampleNegatives, Basic) {
  const std::vector<IdPair> pos = {{"t1", "a1"}, {"t2", "a2"}, {"t3", "a3"}};
  const std::vector<std::string> articles = {"a1", "a2", "a3", "a4"};
  const auto neg = SampleNegatives(pos, articles, 1.0, 4);
  ASSERT_EQ(neg.size(), 3u);
  const std::set<IdPair> positives(pos.begin(), pos.end());
  for (const auto& p : neg) EXPECT_EQ(positives.count(p), 0u);
  EXPECT_EQ(SampleNegatives(pos, articles, 1.0, 4), neg);
}

TEST(SampleNegatives, NoneAvailable) {
  EXPECT_ERROR_CODE(SampleNegatives({{"t1", "a1"}, {"t2", "a1"}}, {"a1"}, 1.0, 1),
                    kNoNegativesAvailable);
}

TEST(DualEncoder, EncodeShapesAndChunkMeans) {
  const DualEncoder enc = InitialEncoder(4, 6, {.joint_dim = 3});
  const Vector chunk = {0.1, 0.2, 0.0, -0.3, 1.0, 0.5};
  const Vector single = enc.Encode(EncoderSide::kArticle, chunk);
  EXPECT_EQ(single.size(), 3u);
  const std::vector<Vector> one = {chunk};
  const std::vector<Vector> two = {chunk, chunk};
  EXPECT_EQ(enc.Encode(EncoderSide::kArticle, one, LongTextStrategy::kMeanChunks), single);
  const Vector twice = enc.Encode(EncoderSide::kArticle, two, LongTextStrategy::kMeanChunks);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(twice[i], single[i], 1e-15);
  EXPECT_EQ(enc.Encode(EncoderSide::kTweet, Vector(4, 1.0)).size(), 3u);
  EXPECT_ERROR_CODE(enc.Encode(EncoderSide::kTweet, Vector(5, 1.0)), kDimMismatch);
  EXPECT_ERROR_CODE(enc.Encode(EncoderSide::kArticle, std::vector<Vector>{},
                               LongTextStrategy::kMeanChunks),
                    kEmptyChunkList);
}

// Two topics, each with a distinct one-hot direction plus noise.
FeatureStore ToyStore(std::vector<IdPair>& positives) {
  FeatureStore store;
  Rng rng(2);
  for (int a = 0; a < 6; ++a) {
    const std::string aid = "a" + std::to_string(a);
    Vector base(4, 0.0);
    base[a % 2] = 1.0;
    store.articles[aid] = {base, base};
    for (int t = 0; t < 3; ++t) {
      Vector tv(3, 0.0);
      tv[a % 2] = 1.0;
      tv[2] = UniformRange(rng, -0.2, 0.2);
      const std::string tid = "t" + std::to_string(a) + std::to_string(t);
      store.tweets[tid] = tv;
      positives.emplace_back(tid, aid);
    }
  }
  return store;
}

TEST(Train, ZeroEpochsReturnsInitialization) {
  std::vector<IdPair> pos;
  const FeatureStore store = ToyStore(pos);
  TrainConfig cfg{.epochs = 0, .joint_dim = 5};
  const TrainResult r = Train(pos, store, cfg, LongTextStrategy::kMeanChunks);
  EXPECT_EQ(r.encoder, InitialEncoder(3, 4, cfg));
  EXPECT_TRUE(r.loss_trace.empty());
}

TEST(Train, Reproducible) {
  std::vector<IdPair> pos;
  const FeatureStore store = ToyStore(pos);
  const TrainConfig cfg{.epochs = 20, .batch_size = 5, .seed = 3, .joint_dim = 5};
  const TrainResult a = Train(pos, store, cfg, LongTextStrategy::kMeanChunks);
  const TrainResult b = Train(pos, store, cfg, LongTextStrategy::kMeanChunks);
  EXPECT_EQ(a.encoder, b.encoder);
  EXPECT_EQ(a.loss_trace, b.loss_trace);
  EXPECT_NE(a.encoder, InitialEncoder(3, 4, cfg));
}

TEST(Train, LossDecreasesOnToyData) {
  std::vector<IdPair> pos;
  const FeatureStore store = ToyStore(pos);
  const TrainConfig cfg{.lr = 0.5, .epochs = 60, .joint_dim = 8};
  const TrainResult r = Train(pos, store, cfg, LongTextStrategy::kTruncate);
  ASSERT_EQ(r.loss_trace.size(), 60u);
  EXPECT_LT(r.loss_trace.back(), r.loss_trace.front());
}

TEST(Train, AugmentAddsOnePositivePerSegment) {
  std::vector<IdPair> pos;
  FeatureStore store = ToyStore(pos);
  store.articles["a0"] = {Vector(4, 1.0), Vector(4, 0.5), Vector(4, 0.25)};
  const std::vector<IdPair> one = {{"t00", "a0"}};
  const auto examples = BuildTrainingExamples(one, {}, store, LongTextStrategy::kAugment);
  ASSERT_EQ(examples.size(), 3u);
  for (int s = 0; s < 3; ++s) {
    EXPECT_EQ(examples[s].segment, s);
    EXPECT_EQ(examples[s].label, 1);
  }
  EXPECT_EQ(BuildTrainingExamples(one, {}, store, LongTextStrategy::kMeanChunks).size(), 1u);
}

TEST(TrainConfig, Validation) {
  EXPECT_ERROR_CODE(TrainConfig::FromJson({{"lr", -1.0}}), kConfigInvalid);
  EXPECT_ERROR_CODE(TrainConfig::FromJson({{"nonlinearity", "relu"}}), kConfigInvalid);
  const TrainConfig cfg = TrainConfig::FromJson({{"epochs", 7}, {"nonlinearity", "none"}});
  EXPECT_EQ(cfg.epochs, 7);
  EXPECT_EQ(cfg.nonlinearity, Nonlinearity::kNone);
}

TEST(Encoder, JsonRoundTrip) {
  const TrainConfig cfg{.joint_dim = 4};
  const DualEncoder enc = InitialEncoder(3, 5, cfg);
  EXPECT_EQ(EncoderFromJson(EncoderToJson(enc, cfg)), enc);
}

}  // namespace
}  // namespace tweetlink
