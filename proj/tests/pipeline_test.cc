#include "tweetlink/pipeline.h"

#include <cstdlib>
#include <set>

#include <gtest/gtest.h>

#include "test_util.h"
#include "tweetlink/io.h"

namespace tweetlink {
namespace {

namespace fs = std::filesystem;

// Writes the synthetic fixture and returns a config pointing at it.
nlohmann::json FixtureConfig(const fs::path& dir, SynthConfig synth = {}) {
  const SynthCorpus corpus = Synthesize(synth);
  WriteFile(dir / "documents.jsonl", SerializeDocuments(corpus.documents));
  WriteFile(dir / "pairs.jsonl", SerializePairs(corpus.pairs));
  return {{"paths",
           {{"documents", (dir / "documents.jsonl").string()},
            {"pairs", (dir / "pairs.jsonl").string()}}}};
}

TEST(RunConfig, DefaultsAndErrors) {
  const RunConfig cfg = RunConfig::FromJson(nlohmann::json::object());
  EXPECT_EQ(cfg.model, ModelKind::kTfidf);
  EXPECT_FALSE(cfg.threshold.has_value());
  EXPECT_ERROR_CODE(RunConfig::FromJson({{"model", "bert"}}), kConfigInvalid);
  EXPECT_ERROR_CODE(RunConfig::FromJson({{"split", {{"train_fraction", 1.0}}}}), kConfigInvalid);
  EXPECT_ERROR_CODE(RunConfig::FromJson({{"train", {{"epochs", -1}}}}), kConfigInvalid);
  EXPECT_ERROR_CODE(RunConfig::FromJson({{"seed", "abc"}}), kConfigInvalid);
}

TEST(RunPipeline, MissingDocumentsIsConfigInvalid) {
  const RunConfig cfg = RunConfig::FromJson({{"paths", {{"documents", "/no/such/file"}}}});
  EXPECT_ERROR_CODE(RunPipeline(cfg), kConfigInvalid);
}

TEST(RunPipeline, TfidfReportHasAllMetrics) {
  const auto dir = ScratchDir();
  const RunConfig cfg = RunConfig::FromJson(FixtureConfig(dir));
  const PipelineResult r = RunPipeline(cfg, dir / "out");
  EXPECT_TRUE(r.calibrated);
  const auto report = nlohmann::json::parse(ReadFile(dir / "out" / "report.json"));
  for (const char* key : {"ap", "accuracy", "precision", "recall", "f1", "n", "threshold"}) {
    EXPECT_TRUE(report.contains(key)) << key;
  }
  EXPECT_GT(report["ap"].get<double>(), 0.8);
  EXPECT_TRUE(fs::exists(dir / "out" / "matrix.csv"));
}

TEST(RunPipeline, SuppliedThresholdIsEchoed) {
  const auto dir = ScratchDir();
  auto j = FixtureConfig(dir);
  j["threshold"] = 0.125;
  const PipelineResult r = RunPipeline(RunConfig::FromJson(j), dir);
  EXPECT_FALSE(r.calibrated);
  EXPECT_EQ(r.threshold, 0.125);
  const auto report = nlohmann::json::parse(ReadFile(dir / "report.json"));
  EXPECT_EQ(report["threshold"].get<double>(), 0.125);
  EXPECT_FALSE(report["calibrated"].get<bool>());
}

TEST(SplitByArticle, DisjointAndTweetsFollowArticles) {
  const auto dir = ScratchDir();
  const RunConfig cfg = RunConfig::FromJson(FixtureConfig(dir));
  const Corpus corpus = LoadCorpus(cfg);
  const DataSplit split = SplitByArticle(corpus, 0.5, 3);
  EXPECT_NO_THROW(CheckSplitDisjoint(split));
  EXPECT_EQ(split.train_articles.size(), 25u);
  EXPECT_EQ(split.train_tweets.size() + split.val_tweets.size(), corpus.tweets.size());
  const std::set<std::string> train_articles(split.train_articles.begin(),
                                             split.train_articles.end());
  const std::set<std::string> train_tweets(split.train_tweets.begin(), split.train_tweets.end());
  // A tweet's own article is its first pair, so it lands on that article's side.
  std::set<std::string> placed;
  for (const auto& p : corpus.pairs) {
    if (!placed.insert(p.tweet_id).second) continue;
    EXPECT_EQ(train_tweets.count(p.tweet_id), train_articles.count(p.article_id)) << p.tweet_id;
  }
  DataSplit bad = split;
  bad.val_tweets.push_back(split.train_tweets.front());
  EXPECT_ERROR_CODE(CheckSplitDisjoint(bad), kInvalidArgument);
}

TEST(ScoreCorpus, DualTrainsOnlyOnTrainingSide) {
  const auto dir = ScratchDir();
  auto j = FixtureConfig(dir, {.n_articles = 12, .tweets_per_article = 3});
  j["model"] = "dual";
  j["train"] = {{"epochs", 5}, {"joint_dim", 8}};
  const RunConfig cfg = RunConfig::FromJson(j);
  const Corpus corpus = LoadCorpus(cfg);
  const ScoredRun run = ScoreCorpus(cfg, corpus);
  ASSERT_TRUE(run.training.has_value());
  EXPECT_EQ(run.training->loss_trace.size(), 5u);
  const DataSplit split = SplitByArticle(corpus, cfg.train_fraction, cfg.seed);
  EXPECT_EQ(run.sim.tweet_ids, split.val_tweets);
  EXPECT_EQ(run.sim.article_ids, split.val_articles);
}

TEST(SweepSize, OneEqualsRootsAndFullEqualsCascades) {
  const auto dir = ScratchDir();
  auto j = FixtureConfig(dir);
  j["evaluate_on"] = "all";
  const RunConfig cfg = RunConfig::FromJson(j);
  const Corpus corpus = LoadCorpus(cfg);
  const ScoredRun run = ScoreCorpus(cfg, corpus);
  const auto cascades = BuildCascades(corpus.tweets);
  const SweepResult sweep = SweepSize(run.sim, run.gt, cascades, {1, 2, 100}, AggregationFn::kMean);
  ASSERT_EQ(sweep.size(), 3u);

  // n = 1: roots alone.
  std::vector<double> scores;
  std::vector<int> labels;
  std::map<std::string, std::size_t> row;
  for (std::size_t i = 0; i < run.sim.tweet_ids.size(); ++i) row[run.sim.tweet_ids[i]] = i;
  for (const auto& c : cascades) {
    const std::size_t r = row.at(c.root_id());
    for (std::size_t a = 0; a < run.sim.article_ids.size(); ++a) {
      if (run.gt.values(r, a) == 0) continue;
      scores.push_back(run.sim.values(r, a));
      labels.push_back(run.gt.values(r, a));
    }
  }
  EXPECT_NEAR(sweep[0].average_precision, AveragePrecision(scores, labels), 1e-12);

  const SweepResult full = SweepSize(run.sim, run.gt, cascades, {4}, AggregationFn::kMean);
  EXPECT_EQ(sweep[2].average_precision, full[0].average_precision);
  EXPECT_EQ(RenderReport(SweepTable(sweep), ReportFormat::kCsv).substr(0, 15), "n,ap,n_cascades");
  EXPECT_ERROR_CODE(SweepSize(run.sim, run.gt, cascades, {2, 1}, AggregationFn::kMean),
                    kConfigInvalid);
}

TEST(SweepHyperparams, PicksSeparatingConfigAndFirstOnTies) {
  const auto dir = ScratchDir();
  auto j = FixtureConfig(dir);
  j["grid"] = {{{"cleaning", {{"min_word_len", 3}}}},
               {{"cleaning", {{"min_word_len", 3}}}}};
  const HyperparamSearch same = SweepHyperparams(RunConfig::FromJson(j));
  ASSERT_EQ(same.trials.size(), 2u);
  EXPECT_EQ(same.best_index, 0u);

  j["grid"] = {{{"model", "lda"}, {"lda", {{"num_topics", 1}, {"iters", 5}}}},
               {{"model", "tfidf"}}};
  const HyperparamSearch search = SweepHyperparams(RunConfig::FromJson(j));
  EXPECT_EQ(search.best_index, 1u);
  EXPECT_EQ(search.best.model, ModelKind::kTfidf);
  EXPECT_GT(search.trials[1].average_precision, search.trials[0].average_precision);

  j["grid"] = nlohmann::json::array();
  EXPECT_ERROR_CODE(SweepHyperparams(RunConfig::FromJson(j)), kEmptyGrid);
}

TEST(Report, JsonAndCsv) {
  ReportTable t;
  ReportRow r;
  r.Add("x", 0.5).Add("n", std::int64_t{3}).Add("name", std::string("a,b"));
  t.rows.push_back(r);
  EXPECT_EQ(RenderReport(t, ReportFormat::kJson), "{\"x\": 0.500000, \"n\": 3, \"name\": \"a,b\"}\n");
  EXPECT_EQ(RenderReport(t, ReportFormat::kCsv), "x,n,name\n0.500000,3,\"a,b\"\n");
  t.rows.push_back(r);
  EXPECT_EQ(RenderReport(t, ReportFormat::kJson)[0], '[');
  EXPECT_ERROR_CODE(RenderReport(ReportTable{}, ReportFormat::kCsv), kEmptyInput);
}

}  // namespace
}  // namespace tweetlink
