#include "tweetlink/evalx.h"

#include <algorithm>
#include <numeric>

#include "tweetlink/error.h"

namespace tweetlink {
namespace {

template <typename T>
MaskedCells MaskCells(const Grid<T>& values, const GroundTruthMatrix& gt) {
  if (values.rows() != gt.values.rows() || values.cols() != gt.values.cols()) {
    throw Error(ErrorCode::kShapeMismatch,
                std::to_string(values.rows()) + "x" + std::to_string(values.cols()) +
                    " vs " + std::to_string(gt.values.rows()) + "x" +
                    std::to_string(gt.values.cols()));
  }
  MaskedCells out;
  const auto& labels = gt.values.data();
  const auto& data = values.data();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) continue;
    out.values.push_back(static_cast<double>(data[i]));
    out.labels.push_back(labels[i]);
  }
  return out;
}

void CheckLabels(std::span<const int> labels) {
  for (int y : labels) {
    if (y != 1 && y != -1) {
      throw Error(ErrorCode::kInvalidArgument, "labels must be +1 or -1");
    }
  }
}

}  // namespace

MaskedCells MaskedPairs(const Matrix& values, const GroundTruthMatrix& gt) {
  return MaskCells(values, gt);
}

MaskedCells MaskedPairs(const Grid<int>& values, const GroundTruthMatrix& gt) {
  return MaskCells(values, gt);
}

double AveragePrecision(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "scores vs labels");
  }
  if (scores.empty()) throw Error(ErrorCode::kEmptyInput, "average precision");
  CheckLabels(labels);
  const auto positives =
      static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (positives == 0) throw Error(ErrorCode::kNoPositives, "average precision");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double ap = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0;
  std::size_t seen = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double group_score = scores[order[i]];
    while (i < order.size() && scores[order[i]] == group_score) {
      if (labels[order[i]] == 1) ++tp;
      ++seen;
      ++i;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(positives);
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

double PrecisionOf(const ConfusionCounts& c) {
  const std::size_t denom = c.tp + c.fp;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double RecallOf(const ConfusionCounts& c) {
  const std::size_t denom = c.tp + c.fn;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double F1FromPrecisionRecall(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

double F1Of(const ConfusionCounts& c) {
  return F1FromPrecisionRecall(PrecisionOf(c), RecallOf(c));
}

ConfusionCounts CountConfusion(std::span<const int> preds, std::span<const int> labels) {
  if (preds.size() != labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "predictions vs labels");
  }
  CheckLabels(preds);
  CheckLabels(labels);
  ConfusionCounts c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == 1) {
      labels[i] == 1 ? ++c.tp : ++c.fp;
    } else {
      labels[i] == 1 ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

MetricsReport BinaryMetrics(std::span<const int> preds, std::span<const int> labels) {
  if (preds.empty()) throw Error(ErrorCode::kEmptyInput, "binary metrics");
  const ConfusionCounts c = CountConfusion(preds, labels);
  MetricsReport report;
  report.n_evaluated = c.total();
  report.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  report.precision = PrecisionOf(c);
  report.recall = RecallOf(c);
  report.f1 = F1Of(c);
  return report;
}

MetricsReport EvaluateMasked(const Matrix& scores, const Grid<int>& decisions,
                             const GroundTruthMatrix& gt) {
  const MaskedCells scored = MaskedPairs(scores, gt);
  const MaskedCells decided = MaskedPairs(decisions, gt);
  if (scored.labels.empty()) throw Error(ErrorCode::kNoLabeledCells, "evaluation");
  std::vector<int> preds(decided.values.begin(), decided.values.end());
  MetricsReport report = BinaryMetrics(preds, decided.labels);
  report.average_precision = AveragePrecision(scored.values, scored.labels);
  return report;
}

ConsensusMap ConsensusScore(const std::vector<AnnotationRecord>& records,
                            double threshold) {
  struct Tally {
    std::size_t match = 0;
    std::size_t votes = 0;
  };
  std::map<std::pair<std::string, std::string>, Tally> tallies;
  for (const auto& rec : records) {
    auto& tally = tallies[{rec.tweet_id, rec.article_id}];
    if (rec.verdict == Verdict::kSkip) continue;
    ++tally.votes;
    if (rec.verdict == Verdict::kMatch) ++tally.match;
  }
  ConsensusMap out;
  for (const auto& [key, tally] : tallies) {
    ConsensusEntry entry;
    entry.votes = tally.votes;
    if (tally.votes > 0) {
      entry.score = static_cast<double>(tally.match) / static_cast<double>(tally.votes);
      entry.label = entry.score >= threshold ? 1 : -1;
    }
    out.emplace(key, entry);
  }
  return out;
}

std::vector<LinkedPair> ConsensusPairs(const ConsensusMap& consensus) {
  std::vector<LinkedPair> pairs;
  for (const auto& [key, entry] : consensus) {
    PairLabel label = PairLabel::kUnknown;
    if (entry.label == 1) label = PairLabel::kMatch;
    if (entry.label == -1) label = PairLabel::kNoMatch;
    pairs.push_back({key.first, key.second, label});
  }
  return pairs;
}

double FleissKappa(const Grid<int>& table) {
  if (table.rows() == 0 || table.cols() == 0) {
    throw Error(ErrorCode::kEmptyInput, "fleiss kappa");
  }
  const std::size_t items = table.rows();
  const std::size_t categories = table.cols();
  long raters = -1;
  for (std::size_t i = 0; i < items; ++i) {
    long sum = 0;
    for (int n : table.row(i)) {
      if (n < 0) throw Error(ErrorCode::kInvalidArgument, "negative count");
      sum += n;
    }
    if (raters < 0) raters = sum;
    if (sum != raters) {
      throw Error(ErrorCode::kUnequalRaterCounts, "item " + std::to_string(i));
    }
  }
  if (raters < 2) throw Error(ErrorCode::kUnequalRaterCounts, "need >= 2 raters");

  const double r = static_cast<double>(raters);
  double mean_agreement = 0.0;
  Vector marginal(categories, 0.0);
  for (std::size_t i = 0; i < items; ++i) {
    double sq = 0.0;
    for (std::size_t j = 0; j < categories; ++j) {
      const double n = table(i, j);
      sq += n * n;
      marginal[j] += n;
    }
    mean_agreement += (sq - r) / (r * (r - 1.0));
  }
  mean_agreement /= static_cast<double>(items);
  double chance = 0.0;
  for (double m : marginal) {
    const double p = m / (static_cast<double>(items) * r);
    chance += p * p;
  }
  if (chance >= 1.0) throw Error(ErrorCode::kDegenerateAgreement, "one category only");
  return (mean_agreement - chance) / (1.0 - chance);
}

}  // namespace tweetlink
