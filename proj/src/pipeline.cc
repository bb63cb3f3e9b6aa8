#include "tweetlink/pipeline.h"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "tweetlink/error.h"
#include "tweetlink/io.h"
#include "tweetlink/random.h"

namespace tweetlink {
namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kConfigInvalid, what);
}

ModelKind ParseModel(const std::string& s) {
  if (s == "tfidf") return ModelKind::kTfidf;
  if (s == "lda") return ModelKind::kLda;
  if (s == "external") return ModelKind::kExternal;
  if (s == "dual") return ModelKind::kDual;
  Invalid("model '" + s + "'");
}

FeatureKind ParseFeatures(const std::string& s) {
  if (s == "tfidf") return FeatureKind::kTfidf;
  if (s == "lda") return FeatureKind::kLda;
  if (s == "external") return FeatureKind::kExternal;
  Invalid("features '" + s + "'");
}

ArticleText ParseArticleText(const std::string& s) {
  if (s == "auto") return ArticleText::kAuto;
  if (s == "summary") return ArticleText::kSummary;
  if (s == "full") return ArticleText::kFull;
  Invalid("article_text '" + s + "'");
}

template <typename T>
T Get(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    Invalid(std::string("bad value for '") + key + "'");
  }
}

const json& Section(const json& j, const char* key) {
  static const json kEmpty = json::object();
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return kEmpty;
  if (!it->is_object()) Invalid(std::string("'") + key + "' must be an object");
  return *it;
}

TokenSeq Prepare(const std::string& text, const RunConfig& cfg, const LemmaMap& lemmas) {
  return TokenizeLemmatize(Clean(text, cfg.cleaning), lemmas);
}

bool UseSummary(const RunConfig& cfg, ModelKind model) {
  if (cfg.article_text == ArticleText::kSummary) return true;
  if (cfg.article_text == ArticleText::kFull) return false;
  return model == ModelKind::kTfidf;
}

using Featurizer = std::function<Vector(const TokenSeq&)>;

std::vector<Vector> ArticleSegments(const TokenSeq& tokens, const RunConfig& cfg,
                                    const Featurizer& featurize) {
  if (tokens.empty()) return {featurize(tokens)};
  std::vector<Vector> segments;
  switch (cfg.strategy) {
    case LongTextStrategy::kTruncate:
      segments.push_back(featurize(Truncate(tokens, cfg.chunking.truncate_limit)));
      break;
    case LongTextStrategy::kMeanChunks:
      for (const auto& chunk : Chunk(tokens, cfg.chunking)) {
        segments.push_back(featurize(chunk));
      }
      break;
    case LongTextStrategy::kAugment: {
      const AugmentSplit split = SplitForAugmentation(tokens, cfg.chunking);
      segments.push_back(featurize(split.header));
      for (const auto& part : split.parts) segments.push_back(featurize(part));
      break;
    }
  }
  return segments;
}

std::uint64_t DocSeed(std::uint64_t seed, std::size_t position) {
  return seed * 0x100000001B3ULL + position;
}

// Pairs restricted to the given tweet and article sets.
std::vector<LinkedPair> PairsWithin(const std::vector<LinkedPair>& pairs,
                                    const std::vector<std::string>& tweets,
                                    const std::vector<std::string>& articles) {
  std::unordered_set<std::string> t(tweets.begin(), tweets.end());
  std::unordered_set<std::string> a(articles.begin(), articles.end());
  std::vector<LinkedPair> out;
  for (const auto& p : pairs) {
    if (t.count(p.tweet_id) && a.count(p.article_id)) out.push_back(p);
  }
  return out;
}

void SetPath(json& target, const std::string& dotted, const json& value) {
  json* node = &target;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot - start);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace

std::string_view ToString(ModelKind m) {
  switch (m) {
    case ModelKind::kTfidf: return "tfidf";
    case ModelKind::kLda: return "lda";
    case ModelKind::kExternal: return "external";
    case ModelKind::kDual: return "dual";
  }
  return "tfidf";
}

std::string_view ToString(FeatureKind f) {
  switch (f) {
    case FeatureKind::kTfidf: return "tfidf";
    case FeatureKind::kLda: return "lda";
    case FeatureKind::kExternal: return "external";
  }
  return "tfidf";
}

RunConfig RunConfig::FromJson(const json& j) {
  if (!j.is_object()) Invalid("config must be a JSON object");
  RunConfig cfg;
  cfg.source = j;
  cfg.model = ParseModel(Get<std::string>(j, "model", "tfidf"));
  cfg.features = ParseFeatures(Get<std::string>(j, "features", "tfidf"));
  cfg.strategy = ParseStrategy(Get<std::string>(j, "strategy", "truncate"));
  cfg.aggregation = ParseAggregation(Get<std::string>(j, "aggregation", "mean"));
  cfg.seed = Get<std::uint64_t>(j, "seed", 1);
  if (j.contains("threshold") && !j["threshold"].is_null()) {
    cfg.threshold = Get<double>(j, "threshold", 0.0);
  }

  const json& paths = Section(j, "paths");
  cfg.paths.documents = Get<std::string>(paths, "documents", "");
  cfg.paths.pairs = Get<std::string>(paths, "pairs", "");
  cfg.paths.annotations = Get<std::string>(paths, "annotations", "");
  cfg.paths.embeddings = Get<std::string>(paths, "embeddings", "");
  cfg.paths.lemmas = Get<std::string>(paths, "lemmas", "");
  cfg.paths.keywords = Get<std::string>(paths, "keywords", "");

  cfg.article_text = ParseArticleText(Get<std::string>(j, "article_text", "auto"));
  cfg.summary_max_chars = Get<std::size_t>(j, "summary_max_chars", cfg.summary_max_chars);

  const json& cleaning = Section(j, "cleaning");
  cfg.cleaning.min_word_len = Get<int>(cleaning, "min_word_len", 3);
  const auto emoji = Get<std::string>(cleaning, "emoji_mode", "drop");
  if (emoji == "drop") {
    cfg.cleaning.emoji_mode = EmojiMode::kDrop;
  } else if (emoji == "alias") {
    cfg.cleaning.emoji_mode = EmojiMode::kAlias;
  } else {
    Invalid("emoji_mode '" + emoji + "'");
  }
  cfg.cleaning.strip_hashes = Get<bool>(cleaning, "strip_hashes", true);
  if (cfg.cleaning.min_word_len < 1) Invalid("min_word_len must be >= 1");

  const json& chunking = Section(j, "chunking");
  cfg.chunking.truncate_limit = Get<std::size_t>(chunking, "truncate_limit", 512);
  if (cfg.chunking.truncate_limit < 3) Invalid("truncate_limit must be >= 3");
  cfg.chunking.content_len =
      Get<std::size_t>(chunking, "content_len", cfg.chunking.truncate_limit - 2);
  cfg.chunking.header_len = Get<std::size_t>(chunking, "header_len", 256);
  cfg.chunking.part_len = Get<std::size_t>(chunking, "part_len", 256);
  if (cfg.chunking.content_len < 1 || cfg.chunking.header_len < 1 ||
      cfg.chunking.part_len < 1) {
    Invalid("chunk lengths must be >= 1");
  }

  const json& lda = Section(j, "lda");
  cfg.lda.num_topics = Get<int>(lda, "num_topics", 10);
  if (lda.contains("alpha") && !lda["alpha"].is_null()) {
    cfg.lda.alpha = Get<double>(lda, "alpha", 0.0);
  }
  cfg.lda.beta = Get<double>(lda, "beta", 0.01);
  cfg.lda.iters = Get<int>(lda, "iters", 200);
  cfg.lda.seed = cfg.seed;
  cfg.lda_infer_iters = Get<int>(lda, "infer_iters", 50);
  if (cfg.lda.num_topics < 1) throw Error(ErrorCode::kDegenerateK, "num_topics");
  if (cfg.lda.iters < 1 || cfg.lda_infer_iters < 1) Invalid("lda iters must be >= 1");

  try {
    cfg.train = TrainConfig::FromJson(Section(j, "train"));
  } catch (const json::exception& e) {
    Invalid(std::string("train: ") + e.what());
  }
  if (!Section(j, "train").contains("seed")) cfg.train.seed = cfg.seed;

  const json& split = Section(j, "split");
  cfg.train_fraction = Get<double>(split, "train_fraction", 0.5);
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    Invalid("train_fraction must be in (0, 1)");
  }
  const auto scope = Get<std::string>(j, "evaluate_on", "validation");
  if (scope == "validation") {
    cfg.evaluate_on = EvalScope::kValidation;
  } else if (scope == "all") {
    cfg.evaluate_on = EvalScope::kAll;
  } else {
    Invalid("evaluate_on '" + scope + "'");
  }
  cfg.consensus_threshold = Get<double>(j, "consensus_threshold", 0.5);
  cfg.sizes = Get<std::vector<std::size_t>>(j, "sizes", {});

  if (j.contains("grid")) {
    if (!j["grid"].is_array()) Invalid("grid must be an array");
    for (const auto& point : j["grid"]) {
      if (!point.is_object()) Invalid("grid points must be objects");
      cfg.grid.push_back(point);
    }
  }
  cfg.random_budget = Get<int>(j, "random_budget", 0);
  if (cfg.random_budget < 0) Invalid("random_budget must be >= 0");
  cfg.search_space = Section(j, "search_space");
  for (const auto& [key, values] : cfg.search_space.items()) {
    if (!values.is_array() || values.empty()) {
      Invalid("search_space." + key + " must be a nonempty array");
    }
  }
  return cfg;
}

RunConfig RunConfig::Load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error&) {
    Invalid("cannot read config " + path.string());
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) Invalid("config is not valid JSON: " + path.string());
  return FromJson(j);
}

Corpus LoadCorpus(const RunConfig& cfg) {
  if (cfg.paths.documents.empty() || !std::filesystem::exists(cfg.paths.documents)) {
    Invalid("documents file not found: " + cfg.paths.documents.string());
  }
  Corpus corpus;
  std::vector<Document> docs = LoadDocuments(cfg.paths.documents);
  std::unordered_set<std::string> all_ids;
  for (auto& doc : docs) {
    all_ids.insert(doc.id);
    (doc.kind == DocKind::kTweet ? corpus.tweets : corpus.articles).push_back(std::move(doc));
  }
  if (!cfg.paths.keywords.empty()) {
    corpus.tweets = KeywordFilter(corpus.tweets, LoadKeywords(cfg.paths.keywords));
  }
  if (!cfg.paths.lemmas.empty()) corpus.lemmas = LoadLemmas(cfg.paths.lemmas);

  std::vector<LinkedPair> pairs;
  if (!cfg.paths.annotations.empty()) {
    pairs = ConsensusPairs(
        ConsensusScore(LoadAnnotations(cfg.paths.annotations), cfg.consensus_threshold));
  } else if (!cfg.paths.pairs.empty()) {
    pairs = LoadPairs(cfg.paths.pairs);
  } else {
    Invalid("either paths.pairs or paths.annotations is required");
  }
  std::unordered_set<std::string> kept;
  for (const auto& t : corpus.tweets) kept.insert(t.id);
  for (auto& p : pairs) {
    if (!all_ids.count(p.tweet_id)) throw Error(ErrorCode::kUnknownId, p.tweet_id);
    if (!all_ids.count(p.article_id)) throw Error(ErrorCode::kUnknownId, p.article_id);
    if (kept.count(p.tweet_id)) corpus.pairs.push_back(std::move(p));
  }
  return corpus;
}

DataSplit SplitByArticle(const Corpus& corpus, double train_fraction, std::uint64_t seed) {
  std::vector<std::string> ids;
  for (const auto& a : corpus.articles) ids.push_back(a.id);
  std::sort(ids.begin(), ids.end());
  Rng rng(seed ^ 0x5DEECE66DULL);
  Shuffle(ids, rng);
  auto n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(ids.size()) + 0.5));
  if (ids.size() >= 2) n_train = std::clamp<std::size_t>(n_train, 1, ids.size() - 1);
  std::unordered_set<std::string> train_articles(ids.begin(),
                                                 ids.begin() + static_cast<std::ptrdiff_t>(
                                                                   std::min(n_train, ids.size())));

  std::unordered_map<std::string, std::string> home;  // tweet -> article
  for (const auto& p : corpus.pairs) {
    if (p.label == PairLabel::kMatch && !home.count(p.tweet_id)) home[p.tweet_id] = p.article_id;
  }
  for (const auto& p : corpus.pairs) home.try_emplace(p.tweet_id, p.article_id);

  DataSplit split;
  for (const auto& a : corpus.articles) {
    (train_articles.count(a.id) ? split.train_articles : split.val_articles).push_back(a.id);
  }
  for (const auto& t : corpus.tweets) {
    auto it = home.find(t.id);
    const bool train = it != home.end() && train_articles.count(it->second);
    (train ? split.train_tweets : split.val_tweets).push_back(t.id);
  }
  return split;
}

void CheckSplitDisjoint(const DataSplit& split) {
  auto check = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::unordered_set<std::string> seen(a.begin(), a.end());
    for (const auto& id : b) {
      if (seen.count(id)) {
        throw Error(ErrorCode::kInvalidArgument, id + " is in both train and validation");
      }
    }
  };
  check(split.train_tweets, split.val_tweets);
  check(split.train_articles, split.val_articles);
}

ScoredRun ScoreCorpus(const RunConfig& cfg, const Corpus& corpus) {
  if (corpus.tweets.empty() || corpus.articles.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "need tweets and articles");
  }
  std::unordered_map<std::string, const Document*> by_id;
  std::vector<std::string> all_tweets;
  std::vector<std::string> all_articles;
  for (const auto& t : corpus.tweets) {
    by_id[t.id] = &t;
    all_tweets.push_back(t.id);
  }
  for (const auto& a : corpus.articles) {
    by_id[a.id] = &a;
    all_articles.push_back(a.id);
  }

  const DataSplit split = SplitByArticle(corpus, cfg.train_fraction, cfg.seed);
  CheckSplitDisjoint(split);
  const bool use_split = cfg.model == ModelKind::kDual || cfg.evaluate_on == EvalScope::kValidation;
  const auto& eval_tweets = use_split ? split.val_tweets : all_tweets;
  const auto& eval_articles = use_split ? split.val_articles : all_articles;
  if (eval_tweets.empty() || eval_articles.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "evaluation split has no tweets or articles");
  }

  const bool summary = UseSummary(cfg, cfg.model);
  std::unordered_map<std::string, TokenSeq> tokens;
  std::vector<std::string> order;  // corpus order, tweets then articles
  for (const auto& t : corpus.tweets) {
    tokens[t.id] = Prepare(t.text, cfg, corpus.lemmas);
    order.push_back(t.id);
  }
  for (const auto& a : corpus.articles) {
    tokens[a.id] = Prepare(summary ? ExtractSummary(a, cfg.summary_max_chars) : a.text, cfg,
                           corpus.lemmas);
    order.push_back(a.id);
  }

  ScoredRun run;
  VectorMap tweet_vecs;
  VectorMap article_vecs;

  // Builds a featurizer fitted on the given documents.
  auto make_featurizer = [&](FeatureKind kind,
                             const std::vector<std::string>& fit_ids) -> Featurizer {
    std::vector<TokenSeq> docs;
    for (const auto& id : fit_ids) docs.push_back(tokens.at(id));
    switch (kind) {
      case FeatureKind::kTfidf: {
        auto model = std::make_shared<TfidfModel>(TfidfModel::Fit(docs));
        return [model](const TokenSeq& doc) { return model->TransformDense(doc); };
      }
      case FeatureKind::kLda: {
        LdaParams params = cfg.lda;
        params.seed = cfg.seed;
        auto model = std::make_shared<LdaModel>(LdaModel::Fit(docs, params));
        auto counter = std::make_shared<std::uint64_t>(0);
        const int iters = cfg.lda_infer_iters;
        const std::uint64_t seed = cfg.seed;
        // Inference seeds advance per call; calls happen in a fixed order.
        return [model, counter, iters, seed](const TokenSeq& doc) {
          return model->Infer(doc, iters, DocSeed(seed, (*counter)++));
        };
      }
      case FeatureKind::kExternal:
        break;
    }
    Invalid("external features have no featurizer");
  };

  if (cfg.model == ModelKind::kTfidf || cfg.model == ModelKind::kLda) {
    const FeatureKind kind =
        cfg.model == ModelKind::kTfidf ? FeatureKind::kTfidf : FeatureKind::kLda;
    Featurizer featurize = make_featurizer(kind, order);
    for (const auto& id : eval_tweets) tweet_vecs[id] = featurize(tokens.at(id));
    for (const auto& id : eval_articles) article_vecs[id] = featurize(tokens.at(id));
  } else if (cfg.model == ModelKind::kExternal) {
    if (cfg.paths.embeddings.empty()) Invalid("paths.embeddings is required");
    const EmbeddingTable table = EmbeddingTable::Load(cfg.paths.embeddings);
    for (const auto& id : eval_tweets) tweet_vecs[id] = table.at(id);
    for (const auto& id : eval_articles) article_vecs[id] = table.at(id);
  } else {
    FeatureStore train_store;
    FeatureStore val_store;
    if (cfg.features == FeatureKind::kExternal) {
      if (cfg.paths.embeddings.empty()) Invalid("paths.embeddings is required");
      const EmbeddingTable table = EmbeddingTable::Load(cfg.paths.embeddings);
      for (const auto& id : split.train_tweets) train_store.tweets[id] = table.at(id);
      for (const auto& id : split.train_articles) train_store.articles[id] = {table.at(id)};
      for (const auto& id : eval_tweets) val_store.tweets[id] = table.at(id);
      for (const auto& id : eval_articles) val_store.articles[id] = {table.at(id)};
    } else {
      std::vector<std::string> fit_ids = split.train_tweets;
      fit_ids.insert(fit_ids.end(), split.train_articles.begin(), split.train_articles.end());
      Featurizer featurize = make_featurizer(cfg.features, fit_ids);
      auto tweet_features = [&](const std::string& id) {
        return featurize(Truncate(tokens.at(id), cfg.chunking.truncate_limit));
      };
      for (const auto& id : split.train_tweets) train_store.tweets[id] = tweet_features(id);
      for (const auto& id : split.train_articles) {
        train_store.articles[id] = ArticleSegments(tokens.at(id), cfg, featurize);
      }
      for (const auto& id : eval_tweets) val_store.tweets[id] = tweet_features(id);
      for (const auto& id : eval_articles) {
        val_store.articles[id] = ArticleSegments(tokens.at(id), cfg, featurize);
      }
    }

    std::vector<IdPair> positives;
    std::set<IdPair> seen;
    for (const auto& p : PairsWithin(corpus.pairs, split.train_tweets, split.train_articles)) {
      if (p.label == PairLabel::kMatch && seen.emplace(p.tweet_id, p.article_id).second) {
        positives.emplace_back(p.tweet_id, p.article_id);
      }
    }
    // Training must never see an evaluation document.
    for (const auto& [t, a] : positives) {
      if (val_store.tweets.count(t) || val_store.articles.count(a)) {
        throw Error(ErrorCode::kInvalidArgument, "training pair leaks into validation");
      }
    }
    if (positives.empty()) throw Error(ErrorCode::kNoPositives, "no training positives");
    run.training = Train(positives, train_store, cfg.train, cfg.strategy);
    EncodedCorpus encoded = EncodeAll(run.training->encoder, val_store, cfg.strategy);
    tweet_vecs = std::move(encoded.tweets);
    article_vecs = std::move(encoded.articles);
  }

  run.sim = ScoreMatrix(eval_tweets, tweet_vecs, eval_articles, article_vecs);
  run.gt = BuildGroundTruth(PairsWithin(corpus.pairs, eval_tweets, eval_articles),
                            eval_tweets, eval_articles);
  return run;
}

ReportTable MetricsTable(const MetricsReport& metrics, double threshold, bool calibrated) {
  ReportRow row;
  row.Add("ap", metrics.average_precision.value_or(0.0))
      .Add("accuracy", metrics.accuracy)
      .Add("precision", metrics.precision)
      .Add("recall", metrics.recall)
      .Add("f1", metrics.f1)
      .Add("n", static_cast<std::int64_t>(metrics.n_evaluated))
      .Add("threshold", threshold)
      .Add("calibrated", calibrated);
  return ReportTable{{row}};
}

PipelineResult RunPipeline(const RunConfig& cfg,
                           const std::optional<std::filesystem::path>& out_dir) {
  const Corpus corpus = LoadCorpus(cfg);
  ScoredRun scored = ScoreCorpus(cfg, corpus);
  PipelineResult result;
  if (cfg.threshold) {
    result.threshold = *cfg.threshold;
  } else {
    result.threshold = CalibrateThreshold(scored.sim, scored.gt).threshold;
    result.calibrated = true;
  }
  const ClassificationMatrix decisions = Classify(scored.sim, result.threshold);
  result.metrics = EvaluateMasked(scored.sim.values, decisions.values, scored.gt);
  result.sim = std::move(scored.sim);
  result.gt = std::move(scored.gt);
  result.training = std::move(scored.training);
  if (out_dir) {
    WriteMatrixCsv(*out_dir / "matrix.csv", result.sim);
    EmitReport(*out_dir / "report.json",
               MetricsTable(result.metrics, result.threshold, result.calibrated),
               ReportFormat::kJson);
  }
  return result;
}

SweepResult SweepSize(const SimilarityMatrix& sim, const GroundTruthMatrix& gt,
                      const std::vector<Cascade>& cascades,
                      const std::vector<std::size_t>& sizes, AggregationFn fn) {
  if (sizes.empty()) Invalid("no cascade sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1 || (i > 0 && sizes[i] <= sizes[i - 1])) {
      Invalid("cascade sizes must be positive and strictly increasing");
    }
  }
  if (sim.tweet_ids != gt.tweet_ids || sim.article_ids != gt.article_ids) {
    throw Error(ErrorCode::kShapeMismatch, "similarity and ground truth axes differ");
  }
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < sim.tweet_ids.size(); ++i) row_of[sim.tweet_ids[i]] = i;

  std::vector<const Cascade*> scored;
  for (const auto& c : cascades) {
    if (row_of.count(c.root_id())) scored.push_back(&c);
  }
  const std::size_t n_articles = sim.article_ids.size();

  SweepResult result;
  for (std::size_t n : sizes) {
    GroundTruthMatrix cascade_gt;
    cascade_gt.article_ids = sim.article_ids;
    cascade_gt.values = Grid<int>(scored.size(), n_articles, 0);
    Matrix cascade_scores(scored.size(), n_articles);
    std::size_t evaluated = 0;
    for (std::size_t c = 0; c < scored.size(); ++c) {
      const Cascade cut = Cut(*scored[c], n);
      std::vector<Vector> rows;
      for (const auto& m : cut.members()) {
        auto it = row_of.find(m.tweet_id);
        if (it == row_of.end()) continue;
        auto r = sim.values.row(it->second);
        rows.emplace_back(r.begin(), r.end());
      }
      const Vector agg = Aggregate(rows, fn);
      std::copy(agg.begin(), agg.end(), cascade_scores.row(c).begin());
      auto root_gt = gt.values.row(row_of.at(cut.root_id()));
      std::copy(root_gt.begin(), root_gt.end(), cascade_gt.values.row(c).begin());
      cascade_gt.tweet_ids.push_back(cut.root_id());
      if (std::any_of(root_gt.begin(), root_gt.end(), [](int v) { return v != 0; })) {
        ++evaluated;
      }
    }
    const MaskedCells cells = MaskedPairs(cascade_scores, cascade_gt);
    if (cells.values.empty()) throw Error(ErrorCode::kNoLabeledCells, "cascade sweep");
    result.push_back({n, AveragePrecision(cells.values, cells.labels), evaluated});
  }
  return result;
}

ReportTable SweepTable(const SweepResult& sweep) {
  ReportTable table;
  for (const auto& row : sweep) {
    ReportRow r;
    r.Add("n", static_cast<std::int64_t>(row.n))
        .Add("ap", row.average_precision)
        .Add("n_cascades", static_cast<std::int64_t>(row.n_cascades));
    table.rows.push_back(std::move(r));
  }
  return table;
}

HyperparamSearch SweepHyperparams(const RunConfig& cfg) {
  std::vector<json> points = cfg.grid;
  if (cfg.random_budget > 0) {
    if (cfg.search_space.empty()) Invalid("random_budget needs a search_space");
    Rng rng(cfg.seed ^ 0xA5A5A5A5ULL);
    for (int b = 0; b < cfg.random_budget; ++b) {
      json patch = json::object();
      for (const auto& [key, values] : cfg.search_space.items()) {
        SetPath(patch, key, values[UniformIndex(rng, values.size())]);
      }
      points.push_back(std::move(patch));
    }
  }
  if (points.empty()) throw Error(ErrorCode::kEmptyGrid, "no grid points");

  HyperparamSearch search;
  bool have_best = false;
  for (const auto& patch : points) {
    json merged = cfg.source;
    merged.erase("grid");
    merged.erase("random_budget");
    merged.erase("search_space");
    merged.merge_patch(patch);
    merged["evaluate_on"] = "validation";
    RunConfig trial_cfg = RunConfig::FromJson(merged);
    const Corpus corpus = LoadCorpus(trial_cfg);
    const ScoredRun scored = ScoreCorpus(trial_cfg, corpus);
    const MaskedCells cells = MaskedPairs(scored.sim.values, scored.gt);
    if (cells.values.empty()) throw Error(ErrorCode::kNoLabeledCells, "validation");
    const double ap = AveragePrecision(cells.values, cells.labels);
    search.trials.push_back({patch, ap});
    if (!have_best || ap > search.trials[search.best_index].average_precision) {
      search.best_index = search.trials.size() - 1;
      search.best = std::move(trial_cfg);
      have_best = true;
    }
  }
  return search;
}

ReportTable SearchTable(const HyperparamSearch& search) {
  ReportTable table;
  for (std::size_t i = 0; i < search.trials.size(); ++i) {
    ReportRow r;
    r.Add("index", static_cast<std::int64_t>(i))
        .Add("ap", search.trials[i].average_precision)
        .Add("best", i == search.best_index)
        .Add("params", search.trials[i].patch.dump());
    table.rows.push_back(std::move(r));
  }
  return table;
}

}  // namespace tweetlink
