// tweetlink command line: every subcommand reads a JSON run config and
// writes its artifacts under --out-dir.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tweetlink/error.h"
#include "tweetlink/io.h"
#include "tweetlink/pipeline.h"

namespace fs = std::filesystem;
using namespace tweetlink;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

RunConfig LoadConfig(const Globals& g) {
  nlohmann::json j = nlohmann::json::object();
  if (!g.config.empty()) j = RunConfig::Load(g.config).source;
  if (g.seed) j["seed"] = *g.seed;
  return RunConfig::FromJson(j);
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoPositives:
    case ErrorCode::kNoLabeledCells:
      return 1;
    default:
      return 2;
  }
}

void WriteJson(const fs::path& path, const nlohmann::ordered_json& j) {
  WriteFile(path, j.dump(2) + "\n");
}

GroundTruthMatrix GroundTruthFor(const SimilarityMatrix& sim, const Corpus& corpus) {
  std::set<std::string> tweets(sim.tweet_ids.begin(), sim.tweet_ids.end());
  std::set<std::string> articles(sim.article_ids.begin(), sim.article_ids.end());
  std::vector<LinkedPair> pairs;
  for (const auto& p : corpus.pairs) {
    if (tweets.count(p.tweet_id) && articles.count(p.article_id)) pairs.push_back(p);
  }
  return BuildGroundTruth(pairs, sim.tweet_ids, sim.article_ids);
}

void Ingest(const Globals& g, bool synthetic, SynthConfig synth) {
  const fs::path out = g.out_dir;
  if (synthetic) {
    if (g.seed) synth.seed = *g.seed;
    const SynthCorpus corpus = Synthesize(synth);
    WriteFile(out / "documents.jsonl", SerializeDocuments(corpus.documents));
    WriteFile(out / "pairs.jsonl", SerializePairs(corpus.pairs));
    return;
  }
  const RunConfig cfg = LoadConfig(g);
  const Corpus corpus = LoadCorpus(cfg);
  std::vector<Document> docs = corpus.articles;
  docs.insert(docs.end(), corpus.tweets.begin(), corpus.tweets.end());
  WriteFile(out / "documents.jsonl", SerializeDocuments(docs));
  WriteFile(out / "pairs.jsonl", SerializePairs(corpus.pairs));
}

void Prep(const Globals& g) {
  const RunConfig cfg = LoadConfig(g);
  const Corpus corpus = LoadCorpus(cfg);
  std::string out;
  auto emit = [&](const Document& doc, const std::string& text) {
    nlohmann::ordered_json j;
    j["id"] = doc.id;
    j["kind"] = std::string(ToString(doc.kind));
    j["tokens"] = TokenizeLemmatize(Clean(text, cfg.cleaning), corpus.lemmas);
    out += j.dump() + "\n";
  };
  for (const auto& t : corpus.tweets) emit(t, t.text);
  for (const auto& a : corpus.articles) {
    emit(a, cfg.article_text == ArticleText::kSummary ? ExtractSummary(a, cfg.summary_max_chars)
                                                       : a.text);
  }
  WriteFile(fs::path(g.out_dir) / "tokens.jsonl", out);
}

void Fit(const Globals& g, const std::string& kind) {
  const RunConfig cfg = LoadConfig(g);
  const Corpus corpus = LoadCorpus(cfg);
  std::vector<TokenSeq> docs;
  for (const auto& t : corpus.tweets) {
    docs.push_back(TokenizeLemmatize(Clean(t.text, cfg.cleaning), corpus.lemmas));
  }
  const bool summary = cfg.article_text == ArticleText::kSummary ||
                       (cfg.article_text == ArticleText::kAuto && kind == "tfidf");
  for (const auto& a : corpus.articles) {
    const std::string text = summary ? ExtractSummary(a, cfg.summary_max_chars) : a.text;
    docs.push_back(TokenizeLemmatize(Clean(text, cfg.cleaning), corpus.lemmas));
  }
  nlohmann::json model;
  if (kind == "tfidf") {
    model = TfidfModel::Fit(docs).ToJson();
  } else if (kind == "lda") {
    LdaParams params = cfg.lda;
    params.seed = cfg.seed;
    model = LdaModel::Fit(docs, params).ToJson();
  } else {
    throw Error(ErrorCode::kConfigInvalid, "fit --model must be tfidf or lda");
  }
  WriteFile(fs::path(g.out_dir) / "model.json", model.dump() + "\n");
}

void TrainCmd(const Globals& g) {
  RunConfig cfg = LoadConfig(g);
  cfg.model = ModelKind::kDual;
  const ScoredRun run = ScoreCorpus(cfg, LoadCorpus(cfg));
  const fs::path out = g.out_dir;
  WriteJson(out / "encoder.json", EncoderToJson(run.training->encoder, cfg.train));
  ReportTable trace;
  for (std::size_t e = 0; e < run.training->loss_trace.size(); ++e) {
    ReportRow row;
    row.Add("epoch", static_cast<std::int64_t>(e + 1)).Add("loss", run.training->loss_trace[e]);
    trace.rows.push_back(std::move(row));
  }
  EmitReport(out / "loss_trace.csv", trace, ReportFormat::kCsv);
}

void Score(const Globals& g) {
  const RunConfig cfg = LoadConfig(g);
  const ScoredRun run = ScoreCorpus(cfg, LoadCorpus(cfg));
  WriteMatrixCsv(fs::path(g.out_dir) / "matrix.csv", run.sim);
}

SimilarityMatrix MatrixOrScore(const RunConfig& cfg, const Corpus& corpus,
                               const std::string& matrix) {
  if (!matrix.empty()) return ReadMatrixCsv(matrix);
  return ScoreCorpus(cfg, corpus).sim;
}

void CalibrateCmd(const Globals& g, const std::string& matrix) {
  const RunConfig cfg = LoadConfig(g);
  const Corpus corpus = LoadCorpus(cfg);
  const SimilarityMatrix sim = MatrixOrScore(cfg, corpus, matrix);
  const Calibration cal = CalibrateThreshold(sim, GroundTruthFor(sim, corpus));
  nlohmann::ordered_json j;
  j["threshold"] = cal.threshold;
  j["f1"] = cal.f1;
  WriteJson(fs::path(g.out_dir) / "threshold.json", j);
}

void Eval(const Globals& g, const std::string& matrix, std::optional<double> threshold) {
  const RunConfig cfg = LoadConfig(g);
  const Corpus corpus = LoadCorpus(cfg);
  const SimilarityMatrix sim = MatrixOrScore(cfg, corpus, matrix);
  const GroundTruthMatrix gt = GroundTruthFor(sim, corpus);
  if (!threshold) threshold = cfg.threshold;
  const bool calibrated = !threshold.has_value();
  const double theta = threshold ? *threshold : CalibrateThreshold(sim, gt).threshold;
  const MetricsReport metrics =
      EvaluateMasked(sim.values, Classify(sim, theta).values, gt);
  EmitReport(fs::path(g.out_dir) / "report.json", MetricsTable(metrics, theta, calibrated),
             ReportFormat::kJson);
}

void CascadesCmd(const Globals& g) {
  const RunConfig cfg = LoadConfig(g);
  const Corpus corpus = LoadCorpus(cfg);
  WriteFile(fs::path(g.out_dir) / "cascades.jsonl", CascadesToJsonl(BuildCascades(corpus.tweets)));
}

void SweepSizeCmd(const Globals& g, const std::string& matrix, std::vector<std::size_t> sizes) {
  const RunConfig cfg = LoadConfig(g);
  const Corpus corpus = LoadCorpus(cfg);
  if (sizes.empty()) sizes = cfg.sizes;
  if (sizes.empty()) sizes = {1, 2, 3, 4, 5};
  const SimilarityMatrix sim = MatrixOrScore(cfg, corpus, matrix);
  const SweepResult sweep =
      SweepSize(sim, GroundTruthFor(sim, corpus), BuildCascades(corpus.tweets), sizes,
                cfg.aggregation);
  EmitReport(fs::path(g.out_dir) / "sweep_size.csv", SweepTable(sweep), ReportFormat::kCsv);
}

void SweepHpCmd(const Globals& g) {
  const RunConfig cfg = LoadConfig(g);
  const HyperparamSearch search = SweepHyperparams(cfg);
  const fs::path out = g.out_dir;
  EmitReport(out / "sweep_hp.csv", SearchTable(search), ReportFormat::kCsv);
  WriteFile(out / "best_config.json", search.best.source.dump(2) + "\n");
}

void Report(const Globals& g, const std::string& format) {
  const ReportFormat fmt = ParseReportFormat(format);
  const RunConfig cfg = LoadConfig(g);
  const PipelineResult result = RunPipeline(cfg, fs::path(g.out_dir));
  std::cout << RenderReport(MetricsTable(result.metrics, result.threshold, result.calibrated),
                            fmt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link tweets to the news articles they discuss"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON run config");
  app.add_option("--seed", g.seed, "Override the config seed");
  app.add_option("--out-dir", g.out_dir, "Directory for outputs");

  bool synthetic = false;
  SynthConfig synth;
  auto* ingest = app.add_subcommand("ingest", "Normalize documents and pairs");
  ingest->add_flag("--synthetic", synthetic, "Generate the synthetic fixture");
  ingest->add_option("--n-articles", synth.n_articles);
  ingest->add_option("--n-topics", synth.n_topics);
  ingest->add_option("--tweets-per-article", synth.tweets_per_article);

  auto* prep = app.add_subcommand("prep", "Clean and tokenize every document");
  std::string fit_kind = "tfidf";
  auto* fit = app.add_subcommand("fit", "Fit a TF-IDF or LDA model");
  fit->add_option("--model", fit_kind)->check(CLI::IsMember({"tfidf", "lda"}));
  auto* train = app.add_subcommand("train", "Train the dual encoder");
  auto* score = app.add_subcommand("score", "Write the similarity matrix");

  std::string matrix;
  auto* calibrate = app.add_subcommand("calibrate", "Pick the F1-optimal threshold");
  calibrate->add_option("--matrix", matrix, "Similarity matrix CSV");
  std::optional<double> threshold;
  auto* eval = app.add_subcommand("eval", "Masked metrics for a matrix");
  eval->add_option("--matrix", matrix, "Similarity matrix CSV");
  eval->add_option("--threshold", threshold);
  auto* cascades = app.add_subcommand("cascades", "Reconstruct reply/quote cascades");
  std::vector<std::size_t> sizes;
  auto* sweep_size = app.add_subcommand("sweep-size", "AP against cascade size");
  sweep_size->add_option("--matrix", matrix, "Similarity matrix CSV");
  sweep_size->add_option("--sizes", sizes)->delimiter(',');
  auto* sweep_hp = app.add_subcommand("sweep-hp", "Hyperparameter search");
  std::string format = "json";
  auto* report = app.add_subcommand("report", "Run the full pipeline");
  report->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*ingest) Ingest(g, synthetic, synth);
    if (*prep) Prep(g);
    if (*fit) Fit(g, fit_kind);
    if (*train) TrainCmd(g);
    if (*score) Score(g);
    if (*calibrate) CalibrateCmd(g, matrix);
    if (*eval) Eval(g, matrix, threshold);
    if (*cascades) CascadesCmd(g);
    if (*sweep_size) SweepSizeCmd(g, matrix, sizes);
    if (*sweep_hp) SweepHpCmd(g);
    if (*report) Report(g, format);
  } catch (const Error& e) {
    std::cerr << "tweetlink: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "tweetlink: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
