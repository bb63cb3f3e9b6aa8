#ifndef TWEETLINK_CONTRAST_H_
#define TWEETLINK_CONTRAST_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tweetlink/linker.h"
#include "tweetlink/matrix.h"
#include "tweetlink/random.h"

namespace tweetlink {

enum class Nonlinearity { kNone, kTanh };
enum class LongTextStrategy { kTruncate, kMeanChunks, kAugment };
enum class EncoderSide { kTweet, kArticle };

std::string_view ToString(Nonlinearity n);
std::string_view ToString(LongTextStrategy s);
Nonlinearity ParseNonlinearity(std::string_view s);
LongTextStrategy ParseStrategy(std::string_view s);

// y = f(W x + b) with f the identity or tanh.
class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(Matrix weights, Vector bias, Nonlinearity nonlinearity);
  // Weights and bias drawn from uniform(-s, s), s = 1 / sqrt(in_dim).
  static AffineMap Random(std::size_t in_dim, std::size_t out_dim,
                          Nonlinearity nonlinearity, Rng& rng);

  Vector Apply(std::span<const double> x) const;

  std::size_t in_dim() const { return weights_.cols(); }
  std::size_t out_dim() const { return weights_.rows(); }
  Nonlinearity nonlinearity() const { return nonlinearity_; }
  const Matrix& weights() const { return weights_; }
  const Vector& bias() const { return bias_; }
  Matrix& weights() { return weights_; }
  Vector& bias() { return bias_; }

  bool operator==(const AffineMap&) const = default;

 private:
  Matrix weights_;  // out_dim x in_dim
  Vector bias_;
  Nonlinearity nonlinearity_ = Nonlinearity::kNone;
};

// Two maps into one joint space, one per text type.
class DualEncoder {
 public:
  DualEncoder() = default;
  DualEncoder(AffineMap tweet_map, AffineMap article_map);

  // `segments` holds one feature vector per chunk. kMeanChunks averages the
  // mapped chunks; the other strategies map only the first segment (the
  // truncated text or the augmentation header). Throws kEmptyChunkList and
  // kDimMismatch.
  Vector Encode(EncoderSide side, std::span<const Vector> segments,
                LongTextStrategy strategy) const;
  Vector Encode(EncoderSide side, std::span<const double> features) const;

  std::size_t joint_dim() const { return tweet_map_.out_dim(); }
  const AffineMap& tweet_map() const { return tweet_map_; }
  const AffineMap& article_map() const { return article_map_; }
  AffineMap& tweet_map() { return tweet_map_; }
  AffineMap& article_map() { return article_map_; }

  bool operator==(const DualEncoder&) const = default;

 private:
  AffineMap tweet_map_;
  AffineMap article_map_;
};

// 1 - cos for y = +1, max(0, cos - margin) for y = -1.
double CosineEmbeddingLoss(std::span<const double> e1, std::span<const double> e2,
                           int y, double margin = 0.0);

struct LossGradient {
  Vector d_e1;
  Vector d_e2;
};

// Exact gradient; zero on the inactive side of the hinge including the
// boundary cos == margin, and zero for zero-norm inputs.
LossGradient CosineEmbeddingLossGradient(std::span<const double> e1,
                                         std::span<const double> e2, int y,
                                         double margin = 0.0);

using IdPair = std::pair<std::string, std::string>;  // (tweet, article)

// For a tweet with p positives, round-half-up(ratio * p) articles drawn
// without replacement from those not linked to it (all of them if fewer
// remain). Throws kNoNegativesAvailable.
std::vector<IdPair> SampleNegatives(const std::vector<IdPair>& positives,
                                    const std::vector<std::string>& articles,
                                    double ratio, std::uint64_t seed);

struct TrainConfig {
  double neg_ratio = 1.0;
  double lr = 0.1;
  int epochs = 100;
  int batch_size = 64;
  std::uint64_t seed = 1;
  double margin = 0.0;
  Nonlinearity nonlinearity = Nonlinearity::kTanh;
  int joint_dim = 64;
  double momentum = 0.0;

  nlohmann::ordered_json ToJson() const;
  static TrainConfig FromJson(const nlohmann::json& j);
};

// Feature vectors per document. Articles carry a list of segments: one for
// truncation, the chunks for mean_chunks, header then parts for augment.
struct FeatureStore {
  std::map<std::string, Vector> tweets;
  std::map<std::string, std::vector<Vector>> articles;
};

// One training pair. segment >= 0 selects a single article segment (an
// augmentation part); -1 means the article as the strategy encodes it.
struct TrainingExample {
  std::string tweet_id;
  std::string article_id;
  int segment = -1;
  int label = 1;
};

// Positives (expanded into header + parts under kAugment) followed by the
// negatives.
std::vector<TrainingExample> BuildTrainingExamples(
    const std::vector<IdPair>& positives, const std::vector<IdPair>& negatives,
    const FeatureStore& features, LongTextStrategy strategy);

struct TrainResult {
  DualEncoder encoder;
  std::vector<double> loss_trace;  // mean loss per epoch
  std::size_t n_examples = 0;
};

DualEncoder InitialEncoder(std::size_t tweet_dim, std::size_t article_dim,
                           const TrainConfig& cfg);

// Mini-batch gradient descent on the mean cosine embedding loss. Negatives
// are sampled from all articles in `features`.
TrainResult Train(const std::vector<IdPair>& positives, const FeatureStore& features,
                  const TrainConfig& cfg, LongTextStrategy strategy);

// Mean loss of `encoder` over the examples.
double MeanLoss(const DualEncoder& encoder, const std::vector<TrainingExample>& examples,
                const FeatureStore& features, LongTextStrategy strategy,
                double margin);

struct EncodedCorpus {
  VectorMap tweets;
  VectorMap articles;
};

EncodedCorpus EncodeAll(const DualEncoder& encoder, const FeatureStore& features,
                        LongTextStrategy strategy);

nlohmann::ordered_json EncoderToJson(const DualEncoder& encoder, const TrainConfig& cfg);
DualEncoder EncoderFromJson(const nlohmann::json& j);

}  // namespace tweetlink

#endif  // TWEETLINK_CONTRAST_H_
