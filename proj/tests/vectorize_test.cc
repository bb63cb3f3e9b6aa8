#include "tweetlink/vectorize.h"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.h"
#include "test_util.h"
#include "tweetlink/corpus.h"
#include "tweetlink/random.h"
#include "tweetlink/textprep.h"

namespace tweetlink {
namespace {

TEST(Tfidf, HandCorpus) {
  const TfidfModel m = TfidfModel::Fit({{"a", "b"}, {"a", "c"}});
  ASSERT_EQ(m.vocab().terms(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_NEAR(m.idf()[0], 1.0, 1e-12);
  EXPECT_NEAR(m.idf()[1], std::log(1.5) + 1.0, 1e-12);
  EXPECT_NEAR(m.idf()[2], std::log(1.5) + 1.0, 1e-12);
  const Vector v = m.TransformDense({"a", "b"});
  EXPECT_NEAR(v[0], 0.5797, 1e-4);
  EXPECT_NEAR(v[1], 0.8148, 1e-4);
  EXPECT_EQ(v[2], 0.0);
}

TEST(Tfidf, SingleDocIdfIsOne) {
  const TfidfModel m = TfidfModel::Fit({{"a"}});
  EXPECT_DOUBLE_EQ(m.idf()[0], 1.0);
}

TEST(Tfidf, EmptyCorpus) { EXPECT_ERROR_CODE(TfidfModel::Fit({}), kEmptyCorpus); }

TEST(Tfidf, UnseenTokensGiveZeroVector) {
  const TfidfModel m = TfidfModel::Fit({{"a", "b"}});
  EXPECT_TRUE(m.Transform({"zzz", "q"}).entries.empty());
  EXPECT_EQ(m.Transform({"zzz"}).Norm(), 0.0);
}

TEST(Tfidf, MatchesOracleAndUnitNormOnRandomCorpora) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TokenSeq> docs(1 + UniformIndex(rng, 8));
    for (auto& d : docs) {
      const std::size_t len = 1 + UniformIndex(rng, 12);
      for (std::size_t i = 0; i < len; ++i) d.push_back(SynthWord(static_cast<int>(UniformIndex(rng, 15))));
    }
    const TfidfModel m = TfidfModel::Fit(docs);
    const auto idf = oracle::Idf(docs);
    for (const auto& d : docs) {
      const SparseVector v = m.Transform(d);
      EXPECT_NEAR(v.Norm(), 1.0, 1e-9);
      const auto expected = oracle::Tfidf(idf, d);
      ASSERT_EQ(v.entries.size(), expected.size());
      for (const auto& [index, weight] : v.entries) {
        EXPECT_NEAR(weight, expected.at(m.vocab().Term(index)), 1e-12);
      }
    }
  }
}

TEST(Tfidf, JsonRoundTrip) {
  const TfidfModel m = TfidfModel::Fit({{"a", "b"}, {"a", "c"}});
  const TfidfModel back = TfidfModel::FromJson(m.ToJson());
  EXPECT_EQ(back.vocab().terms(), m.vocab().terms());
  EXPECT_EQ(back.idf(), m.idf());
}

// Tokenized synthetic articles and their generating topics.
struct TopicCorpus {
  std::vector<TokenSeq> docs;
  std::vector<int> topics;
};

TopicCorpus FixtureDocs(std::uint64_t seed) {
  const SynthCorpus c = Synthesize({.seed = seed, .n_topics = 2, .n_articles = 20});
  TopicCorpus out;
  for (const auto& d : c.documents) {
    if (d.kind != DocKind::kArticle) continue;
    out.docs.push_back(TokenizeLemmatize(Clean(d.text), {}));
    out.topics.push_back(std::stoi(d.id.substr(3)) % 2);
  }
  return out;
}

// Fraction of each learned topic's mass on its dominant generative topic,
// minimized over learned topics.
double Purity(const LdaModel& model, const std::vector<TokenSeq>& docs,
              const std::vector<int>& topics) {
  std::map<std::string, int> word_topic;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& w : docs[d]) word_topic[w] = topics[d];
  }
  double worst = 1.0;
  for (int k = 0; k < model.num_topics(); ++k) {
    double mass[2] = {0, 0};
    for (std::size_t v = 0; v < model.vocab().size(); ++v) {
      mass[word_topic.at(model.vocab().Term(v))] += model.phi()(k, v);
    }
    worst = std::min(worst, std::max(mass[0], mass[1]));
  }
  return worst;
}

LdaParams TestParams(std::uint64_t seed) {
  return {.num_topics = 2, .alpha = 0.1, .beta = 0.01, .iters = 200, .seed = seed};
}

TEST(Lda, RowsSumToOne) {
  const TopicCorpus c = FixtureDocs(1);
  const LdaModel m = LdaModel::Fit(c.docs, TestParams(1));
  for (std::size_t k = 0; k < m.phi().rows(); ++k) {
    const auto row = m.phi().row(k);
    EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-9);
  }
  for (const auto& d : c.docs) {
    const Vector theta = m.Infer(d, 50, 3);
    EXPECT_NEAR(std::accumulate(theta.begin(), theta.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(Lda, RecoversDisjointTopics) {
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TopicCorpus c = FixtureDocs(seed);
    good += Purity(LdaModel::Fit(c.docs, TestParams(seed)), c.docs, c.topics) >= 0.9;
  }
  EXPECT_GE(good, 4);
}

TEST(Lda, InferConcentratesOnGeneratingTopic) {
  const TopicCorpus c = FixtureDocs(2);
  const LdaModel m = LdaModel::Fit(c.docs, TestParams(2));
  const Vector a = m.Infer(c.docs[0], 100, 1);
  const Vector b = m.Infer(c.docs[1], 100, 1);
  EXPECT_GT(std::max(a[0], a[1]), 0.9);
  EXPECT_GT(std::max(b[0], b[1]), 0.9);
  // Different generating topics land on different learned topics.
  EXPECT_NE(a[0] > a[1], b[0] > b[1]);
}

TEST(Lda, SingleTopic) {
  const TopicCorpus c = FixtureDocs(1);
  const LdaModel m = LdaModel::Fit(c.docs, {.num_topics = 1, .iters = 20});
  EXPECT_EQ(m.Infer(c.docs[0], 10, 1), Vector{1.0});
  // The single topic is the smoothed corpus unigram distribution.
  std::map<std::string, double> counts;
  double total = 0;
  for (const auto& d : c.docs) {
    for (const auto& w : d) {
      counts[w] += 1;
      total += 1;
    }
  }
  const double v = static_cast<double>(m.vocab().size());
  for (std::size_t i = 0; i < m.vocab().size(); ++i) {
    EXPECT_NEAR(m.phi()(0, i), (counts[m.vocab().Term(i)] + 0.01) / (total + 0.01 * v), 1e-12);
  }
}

TEST(Lda, OutOfVocabularyDocIsUniform) {
  const LdaModel m = LdaModel::Fit({{"a", "b"}, {"c"}}, {.num_topics = 4, .iters = 5});
  EXPECT_EQ(m.Infer({"zzz"}, 10, 1), Vector(4, 0.25));
  EXPECT_EQ(m.Infer({}, 10, 1), Vector(4, 0.25));
}

TEST(Lda, DeterministicPerSeed) {
  const TopicCorpus c = FixtureDocs(3);
  const LdaModel a = LdaModel::Fit(c.docs, TestParams(7));
  const LdaModel b = LdaModel::Fit(c.docs, TestParams(7));
  EXPECT_EQ(a.phi(), b.phi());
  EXPECT_EQ(a.log_likelihood_trace(), b.log_likelihood_trace());
  EXPECT_EQ(a.log_likelihood_trace().size(), 200u);
}

TEST(Lda, Errors) {
  EXPECT_ERROR_CODE(LdaModel::Fit({{"a"}}, {.num_topics = 0}), kDegenerateK);
  EXPECT_ERROR_CODE(LdaModel::Fit({}, {.num_topics = 2}), kEmptyCorpus);
}

TEST(Lda, JsonRoundTrip) {
  const TopicCorpus c = FixtureDocs(4);
  const LdaModel m = LdaModel::Fit(c.docs, {.num_topics = 2, .iters = 10});
  const LdaModel back = LdaModel::FromJson(m.ToJson());
  EXPECT_EQ(back.phi(), m.phi());
  EXPECT_EQ(back.Infer(c.docs[0], 20, 4), m.Infer(c.docs[0], 20, 4));
}

TEST(Embeddings, ParseAndLookup) {
  const EmbeddingTable t = EmbeddingTable::Parse(
      "{\"id\":\"x\",\"vector\":[1,2,3]}\n{\"id\":\"y\",\"vector\":[0,0,1]}\n");
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.dim(), 3u);
  EXPECT_EQ(t.at("y"), (Vector{0, 0, 1}));
  EXPECT_ERROR_CODE(t.at("nope"), kMissingEmbedding);
}

TEST(Embeddings, DimMismatch) {
  EXPECT_ERROR_CODE(EmbeddingTable::Parse("{\"id\":\"x\",\"vector\":[1,2,3]}\n"
                                          "{\"id\":\"y\",\"vector\":[1,2,3,4]}\n"),
                    kDimMismatch);
}

}  // namespace
}  // namespace tweetlink
