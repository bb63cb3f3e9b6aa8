#ifndef TWEETLINK_PIPELINE_H_
#define TWEETLINK_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tweetlink/cascade.h"
#include "tweetlink/contrast.h"
#include "tweetlink/corpus.h"
#include "tweetlink/evalx.h"
#include "tweetlink/linker.h"
#include "tweetlink/report.h"
#include "tweetlink/textprep.h"
#include "tweetlink/vectorize.h"

namespace tweetlink {

// tfidf / lda / external score raw vectors; dual trains an encoder on top of
// `features`.
enum class ModelKind { kTfidf, kLda, kExternal, kDual };
enum class FeatureKind { kTfidf, kLda, kExternal };
enum class ArticleText { kAuto, kSummary, kFull };
enum class EvalScope { kValidation, kAll };

struct RunPaths {
  std::filesystem::path documents;
  std::filesystem::path pairs;
  std::filesystem::path annotations;
  std::filesystem::path embeddings;
  std::filesystem::path lemmas;
  std::filesystem::path keywords;
};

struct RunConfig {
  ModelKind model = ModelKind::kTfidf;
  FeatureKind features = FeatureKind::kTfidf;
  LongTextStrategy strategy = LongTextStrategy::kTruncate;
  AggregationFn aggregation = AggregationFn::kMean;
  RunPaths paths;
  std::uint64_t seed = 1;
  std::optional<double> threshold;

  ArticleText article_text = ArticleText::kAuto;
  std::size_t summary_max_chars = 2000;
  CleaningConfig cleaning;
  ChunkingConfig chunking;
  LdaParams lda;
  int lda_infer_iters = 50;
  TrainConfig train;
  double train_fraction = 0.5;
  EvalScope evaluate_on = EvalScope::kValidation;
  double consensus_threshold = 0.5;
  std::vector<std::size_t> sizes;

  // Hyperparameter search: each grid point is a JSON merge patch over this
  // config; random_budget extra points are drawn from search_space, which
  // maps "section.key" paths to candidate values.
  std::vector<nlohmann::json> grid;
  int random_budget = 0;
  nlohmann::json search_space = nlohmann::json::object();

  // The document this config was parsed from, for merging grid points.
  nlohmann::json source = nlohmann::json::object();

  // Throws kConfigInvalid on unknown enum values or out-of-range settings.
  static RunConfig FromJson(const nlohmann::json& j);
  static RunConfig Load(const std::filesystem::path& path);
};

std::string_view ToString(ModelKind m);
std::string_view ToString(FeatureKind f);

struct Corpus {
  std::vector<Document> tweets;
  std::vector<Document> articles;
  std::vector<LinkedPair> pairs;
  LemmaMap lemmas;
};

// Reads every input named in the config. Tweets are keyword-filtered when a
// keyword list is given; annotations, when present, replace the pairs by
// their consensus labels. Throws kConfigInvalid for a missing documents file.
Corpus LoadCorpus(const RunConfig& cfg);

struct DataSplit {
  std::vector<std::string> train_tweets;
  std::vector<std::string> train_articles;
  std::vector<std::string> val_tweets;
  std::vector<std::string> val_articles;
};

// Articles are shuffled with the seed and the first train_fraction go to
// training. A tweet follows the article of its first match pair (else its
// first pair); unpaired tweets are validation. Both sides keep corpus order.
DataSplit SplitByArticle(const Corpus& corpus, double train_fraction, std::uint64_t seed);

// Throws kInvalidArgument if any tweet or article appears on both sides.
void CheckSplitDisjoint(const DataSplit& split);

struct ScoredRun {
  SimilarityMatrix sim;
  GroundTruthMatrix gt;
  std::optional<TrainResult> training;
};

// Vectorizes, trains when the model requires it, and scores the evaluation
// tweets against the evaluation articles.
ScoredRun ScoreCorpus(const RunConfig& cfg, const Corpus& corpus);

struct PipelineResult {
  SimilarityMatrix sim;
  GroundTruthMatrix gt;
  MetricsReport metrics;
  double threshold = 0.0;
  bool calibrated = false;
  std::optional<TrainResult> training;
};

// prep -> vectorize/encode -> score -> calibrate (unless a threshold is set)
// -> classify -> masked metrics. Writes matrix.csv and report.json when
// out_dir is given.
PipelineResult RunPipeline(const RunConfig& cfg,
                           const std::optional<std::filesystem::path>& out_dir = {});

ReportTable MetricsTable(const MetricsReport& metrics, double threshold, bool calibrated);

struct SweepRow {
  std::size_t n = 0;
  double average_precision = 0.0;
  std::size_t n_cascades = 0;
};

using SweepResult = std::vector<SweepRow>;

// For each size: cut every cascade, aggregate its members' similarity rows,
// and compute masked AP over cascade x article cells labelled by the root.
// Cascades whose root is not scored are skipped; sizes must be strictly
// increasing and positive.
SweepResult SweepSize(const SimilarityMatrix& sim, const GroundTruthMatrix& gt,
                      const std::vector<Cascade>& cascades,
                      const std::vector<std::size_t>& sizes, AggregationFn fn);

ReportTable SweepTable(const SweepResult& sweep);

struct HyperparamTrial {
  nlohmann::json patch;
  double average_precision = 0.0;
};

struct HyperparamSearch {
  std::vector<HyperparamTrial> trials;
  std::size_t best_index = 0;
  RunConfig best;
};

// Grid points (then random_budget sampled points) are each scored on the
// validation split; highest AP wins, earliest on ties. Throws kEmptyGrid.
HyperparamSearch SweepHyperparams(const RunConfig& cfg);

ReportTable SearchTable(const HyperparamSearch& search);

}  // namespace tweetlink

#endif  // TWEETLINK_PIPELINE_H_
