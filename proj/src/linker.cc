#include "tweetlink/linker.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "tweetlink/error.h"
#include "tweetlink/evalx.h"
#include "tweetlink/io.h"

namespace tweetlink {

double Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kDimMismatch,
                std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  const double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, -1.0, 1.0);
}

SimilarityMatrix ScoreMatrix(const std::vector<std::string>& tweet_ids,
                             const VectorMap& tweet_vecs,
                             const std::vector<std::string>& article_ids,
                             const VectorMap& article_vecs) {
  if (tweet_ids.empty() || article_ids.empty()) {
    throw Error(ErrorCode::kEmptyInput, "score matrix needs tweets and articles");
  }
  auto lookup = [](const VectorMap& map, const std::string& id) -> const Vector& {
    auto it = map.find(id);
    if (it == map.end()) throw Error(ErrorCode::kMissingEmbedding, id);
    return it->second;
  };
  std::vector<const Vector*> articles;
  for (const auto& id : article_ids) articles.push_back(&lookup(article_vecs, id));

  SimilarityMatrix sim{tweet_ids, article_ids,
                       Matrix(tweet_ids.size(), article_ids.size())};
  for (std::size_t t = 0; t < tweet_ids.size(); ++t) {
    const Vector& tv = lookup(tweet_vecs, tweet_ids[t]);
    for (std::size_t a = 0; a < articles.size(); ++a) {
      sim.values(t, a) = Cosine(tv, *articles[a]);
    }
  }
  return sim;
}

ClassificationMatrix Classify(const SimilarityMatrix& sim, double threshold) {
  ClassificationMatrix out{sim.tweet_ids, sim.article_ids,
                           Grid<int>(sim.values.rows(), sim.values.cols(), -1)};
  for (std::size_t i = 0; i < sim.values.size(); ++i) {
    if (sim.values.data()[i] >= threshold) out.values.data()[i] = 1;
  }
  return out;
}

std::vector<double> CandidateThresholds(std::span<const double> scores) {
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> candidates;
  if (sorted.empty()) return candidates;
  candidates.push_back(sorted.front() - kCalibrationEpsilon);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    candidates.push_back(sorted[i - 1] + (sorted[i] - sorted[i - 1]) / 2.0);
  }
  candidates.push_back(sorted.back() + kCalibrationEpsilon);
  return candidates;
}

Calibration CalibrateThreshold(std::span<const double> scores,
                               std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "scores vs labels");
  }
  if (scores.empty()) throw Error(ErrorCode::kNoLabeledCells, "calibration");
  std::vector<double> pos;
  std::vector<double> neg;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 1) {
      pos.push_back(scores[i]);
    } else if (labels[i] == -1) {
      neg.push_back(scores[i]);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "labels must be +1 or -1");
    }
  }
  if (pos.empty()) throw Error(ErrorCode::kNoPositives, "calibration");
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());

  // Counts are taken with the same >= rule Classify uses, so the reported F1
  // is exactly what evaluation at the returned threshold yields.
  auto at_or_above = [](const std::vector<double>& v, double t) {
    return static_cast<std::size_t>(v.end() - std::lower_bound(v.begin(), v.end(), t));
  };
  Calibration best;
  bool have_best = false;
  for (double t : CandidateThresholds(scores)) {
    ConfusionCounts c;
    c.tp = at_or_above(pos, t);
    c.fn = pos.size() - c.tp;
    c.fp = at_or_above(neg, t);
    c.tn = neg.size() - c.fp;
    const double f1 = F1Of(c);
    if (!have_best || f1 > best.f1) {
      best = {t, f1};
      have_best = true;
    }
  }
  return best;
}

Calibration CalibrateThreshold(const SimilarityMatrix& sim, const GroundTruthMatrix& gt) {
  const MaskedCells cells = MaskedPairs(sim.values, gt);
  if (cells.values.empty()) throw Error(ErrorCode::kNoLabeledCells, "calibration");
  return CalibrateThreshold(cells.values, cells.labels);
}

std::string MatrixToCsv(const SimilarityMatrix& sim) {
  std::string out = "tweet_id";
  for (const auto& id : sim.article_ids) out += "," + CsvEscape(id);
  out += '\n';
  for (std::size_t t = 0; t < sim.tweet_ids.size(); ++t) {
    out += CsvEscape(sim.tweet_ids[t]);
    for (double v : sim.values.row(t)) out += "," + FormatDouble(v);
    out += '\n';
  }
  return out;
}

SimilarityMatrix MatrixFromCsv(std::string_view csv) {
  auto lines = SplitLines(csv);
  if (lines.empty()) throw Error(ErrorCode::kMalformedLine, "empty matrix csv");
  auto header = ParseCsvLine(lines[0]);
  if (header.size() < 2) throw Error(ErrorCode::kMalformedLine, "line 1");
  SimilarityMatrix sim;
  sim.article_ids.assign(header.begin() + 1, header.end());
  std::vector<double> values;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = ParseCsvLine(lines[i]);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kMalformedLine, "line " + std::to_string(i + 1));
    }
    sim.tweet_ids.push_back(fields[0]);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      double v = 0.0;
      const auto& f = fields[j];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw Error(ErrorCode::kMalformedLine, "line " + std::to_string(i + 1));
      }
      values.push_back(v);
    }
  }
  sim.values = Matrix(sim.tweet_ids.size(), sim.article_ids.size());
  sim.values.data() = std::move(values);
  return sim;
}

void WriteMatrixCsv(const std::filesystem::path& path, const SimilarityMatrix& sim) {
  WriteFile(path, MatrixToCsv(sim));
}

SimilarityMatrix ReadMatrixCsv(const std::filesystem::path& path) {
  return MatrixFromCsv(ReadFile(path));
}

}  // namespace tweetlink
