#ifndef TWEETLINK_LINKER_H_
#define TWEETLINK_LINKER_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tweetlink/matrix.h"

namespace tweetlink {

// Zero when either vector has zero norm. Throws kDimMismatch.
double Cosine(std::span<const double> u, std::span<const double> v);

struct SimilarityMatrix {
  std::vector<std::string> tweet_ids;
  std::vector<std::string> article_ids;
  Matrix values;  // tweets x articles, cosine in [-1, 1]
};

struct ClassificationMatrix {
  std::vector<std::string> tweet_ids;
  std::vector<std::string> article_ids;
  Grid<int> values;  // +1 / -1
};

using VectorMap = std::map<std::string, Vector>;

// Cell (t, a) = cosine(tweet_vecs[t], article_vecs[a]) in the given id order.
// Throws kMissingEmbedding for ids absent from the maps.
SimilarityMatrix ScoreMatrix(const std::vector<std::string>& tweet_ids,
                             const VectorMap& tweet_vecs,
                             const std::vector<std::string>& article_ids,
                             const VectorMap& article_vecs);

// +1 where the similarity is at or above the threshold.
ClassificationMatrix Classify(const SimilarityMatrix& sim, double threshold);

struct Calibration {
  double threshold = 0.0;
  double f1 = 0.0;
};

// Offset of the outer candidates below the minimum / above the maximum.
inline constexpr double kCalibrationEpsilon = 1e-6;

// Candidate thresholds for a set of masked scores: midpoints between
// consecutive distinct values plus one just outside each end, ascending.
std::vector<double> CandidateThresholds(std::span<const double> scores);

// Picks the candidate with the highest masked F1; ties go to the smaller
// threshold.
Calibration CalibrateThreshold(const SimilarityMatrix& sim,
                               const GroundTruthMatrix& gt);
Calibration CalibrateThreshold(std::span<const double> scores,
                               std::span<const int> labels);

// Header row "tweet_id,<article ids>", then one row per tweet.
std::string MatrixToCsv(const SimilarityMatrix& sim);
SimilarityMatrix MatrixFromCsv(std::string_view csv);
void WriteMatrixCsv(const std::filesystem::path& path, const SimilarityMatrix& sim);
SimilarityMatrix ReadMatrixCsv(const std::filesystem::path& path);

}  // namespace tweetlink

#endif  // TWEETLINK_LINKER_H_
