#ifndef TWEETLINK_EVALX_H_
#define TWEETLINK_EVALX_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tweetlink/corpus.h"
#include "tweetlink/matrix.h"

namespace tweetlink {

// Row-major flattening of the cells whose ground truth is nonzero.
struct MaskedCells {
  Vector values;
  std::vector<int> labels;  // +1 / -1
};

MaskedCells MaskedPairs(const Matrix& values, const GroundTruthMatrix& gt);
MaskedCells MaskedPairs(const Grid<int>& values, const GroundTruthMatrix& gt);

// Area under the precision-recall step function over descending scores.
// Equal scores enter the ranking together.
double AveragePrecision(std::span<const double> scores, std::span<const int> labels);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

// Zero denominators give zero.
double PrecisionOf(const ConfusionCounts& c);
double RecallOf(const ConfusionCounts& c);
double F1Of(const ConfusionCounts& c);
double F1FromPrecisionRecall(double precision, double recall);

struct MetricsReport {
  std::optional<double> average_precision;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_evaluated = 0;
};

ConfusionCounts CountConfusion(std::span<const int> preds, std::span<const int> labels);
MetricsReport BinaryMetrics(std::span<const int> preds, std::span<const int> labels);

// Full masked evaluation: AP from the scores, the rest from the decisions.
MetricsReport EvaluateMasked(const Matrix& scores, const Grid<int>& decisions,
                             const GroundTruthMatrix& gt);

struct ConsensusEntry {
  double score = 0.0;  // fraction of non-skip verdicts that are match
  int label = 0;       // 1, -1, or 0 when every verdict was skip
  std::size_t votes = 0;
};

using ConsensusMap = std::map<std::pair<std::string, std::string>, ConsensusEntry>;

// Pairs scoring at or above `threshold` are labelled match.
ConsensusMap ConsensusScore(const std::vector<AnnotationRecord>& records,
                            double threshold = 0.5);

// Consensus labels as pairs (label 0 becomes unknown).
std::vector<LinkedPair> ConsensusPairs(const ConsensusMap& consensus);

// Items x categories table of rating counts; every row must sum to the same
// number of raters (at least two).
double FleissKappa(const Grid<int>& table);

}  // namespace tweetlink

#endif  // TWEETLINK_EVALX_H_
