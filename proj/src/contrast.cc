#include "tweetlink/contrast.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "tweetlink/error.h"

namespace tweetlink {
namespace {

constexpr std::string_view kEncoderFormat = "tweetlink.dual_encoder";
constexpr int kEncoderVersion = 1;

void CheckSameDim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
}

double Norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

// d cos(u, v) / du.
Vector CosineGradient(std::span<const double> u, std::span<const double> v,
                      double nu, double nv, double cos) {
  Vector g(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    g[i] = v[i] / (nu * nv) - cos * u[i] / (nu * nu);
  }
  return g;
}

nlohmann::ordered_json MapToJson(const AffineMap& map) {
  nlohmann::ordered_json j;
  j["in_dim"] = map.in_dim();
  j["out_dim"] = map.out_dim();
  j["nonlinearity"] = std::string(ToString(map.nonlinearity()));
  j["weights"] = map.weights().data();
  j["bias"] = map.bias();
  return j;
}

AffineMap MapFromJson(const nlohmann::json& j) {
  const auto in_dim = j.at("in_dim").get<std::size_t>();
  const auto out_dim = j.at("out_dim").get<std::size_t>();
  auto flat = j.at("weights").get<Vector>();
  if (flat.size() != in_dim * out_dim) {
    throw Error(ErrorCode::kConfigInvalid, "weight matrix size");
  }
  Matrix weights(out_dim, in_dim);
  weights.data() = std::move(flat);
  return AffineMap(std::move(weights), j.at("bias").get<Vector>(),
                   ParseNonlinearity(j.at("nonlinearity").get<std::string>()));
}

void ValidateConfig(const TrainConfig& cfg) {
  auto fail = [](const char* what) { throw Error(ErrorCode::kConfigInvalid, what); };
  if (!(cfg.neg_ratio > 0.0)) fail("neg_ratio must be > 0");
  if (!(cfg.lr > 0.0)) fail("lr must be > 0");
  if (cfg.epochs < 0) fail("epochs must be >= 0");
  if (cfg.batch_size < 1) fail("batch_size must be >= 1");
  if (!(cfg.margin >= 0.0 && cfg.margin < 1.0)) fail("margin must be in [0, 1)");
  if (cfg.joint_dim < 1) fail("joint_dim must be >= 1");
  if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) fail("momentum must be in [0, 1)");
}

// Segments that make up one article-side training unit.
std::vector<const Vector*> ArticleUnit(const std::vector<Vector>& segments, int segment,
                                       LongTextStrategy strategy) {
  if (segments.empty()) throw Error(ErrorCode::kEmptyChunkList, "article features");
  if (segment >= 0) {
    if (static_cast<std::size_t>(segment) >= segments.size()) {
      throw Error(ErrorCode::kInvalidArgument, "segment out of range");
    }
    return {&segments[segment]};
  }
  if (strategy == LongTextStrategy::kMeanChunks) {
    std::vector<const Vector*> all;
    for (const auto& s : segments) all.push_back(&s);
    return all;
  }
  return {&segments.front()};
}

struct Gradients {
  Matrix weights;
  Vector bias;

  explicit Gradients(const AffineMap& map)
      : weights(map.out_dim(), map.in_dim(), 0.0), bias(map.out_dim(), 0.0) {}

  void Reset() {
    std::fill(weights.data().begin(), weights.data().end(), 0.0);
    std::fill(bias.begin(), bias.end(), 0.0);
  }

  // Accumulates the parameter gradient for one application of `map` that
  // produced `out` from `x`, given d loss / d out scaled by `scale`.
  void Accumulate(const AffineMap& map, std::span<const double> x,
                  std::span<const double> out, std::span<const double> d_out,
                  double scale) {
    Vector d_pre(d_out.size());
    for (std::size_t r = 0; r < d_out.size(); ++r) {
      d_pre[r] = d_out[r] * scale;
      if (map.nonlinearity() == Nonlinearity::kTanh) d_pre[r] *= 1.0 - out[r] * out[r];
      bias[r] += d_pre[r];
    }
    for (std::size_t c = 0; c < x.size(); ++c) {
      if (x[c] == 0.0) continue;
      for (std::size_t r = 0; r < d_pre.size(); ++r) weights(r, c) += d_pre[r] * x[c];
    }
  }
};

struct Velocity {
  Vector weights;
  Vector bias;
};

void ApplyUpdate(AffineMap& map, const Gradients& g, Velocity& v, const TrainConfig& cfg) {
  auto& w = map.weights().data();
  if (v.weights.empty()) {
    v.weights.assign(w.size(), 0.0);
    v.bias.assign(map.bias().size(), 0.0);
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    v.weights[i] = cfg.momentum * v.weights[i] + g.weights.data()[i];
    w[i] -= cfg.lr * v.weights[i];
  }
  auto& b = map.bias();
  for (std::size_t i = 0; i < b.size(); ++i) {
    v.bias[i] = cfg.momentum * v.bias[i] + g.bias[i];
    b[i] -= cfg.lr * v.bias[i];
  }
}

bool AllFinite(const AffineMap& map) {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(map.weights().data().begin(), map.weights().data().end(), finite) &&
         std::all_of(map.bias().begin(), map.bias().end(), finite);
}

}  // namespace

std::string_view ToString(Nonlinearity n) {
  return n == Nonlinearity::kTanh ? "tanh" : "none";
}

std::string_view ToString(LongTextStrategy s) {
  switch (s) {
    case LongTextStrategy::kTruncate: return "truncate";
    case LongTextStrategy::kMeanChunks: return "mean_chunks";
    case LongTextStrategy::kAugment: return "augment";
  }
  return "truncate";
}

Nonlinearity ParseNonlinearity(std::string_view s) {
  if (s == "none") return Nonlinearity::kNone;
  if (s == "tanh") return Nonlinearity::kTanh;
  throw Error(ErrorCode::kConfigInvalid, "nonlinearity '" + std::string(s) + "'");
}

LongTextStrategy ParseStrategy(std::string_view s) {
  if (s == "truncate") return LongTextStrategy::kTruncate;
  if (s == "mean_chunks") return LongTextStrategy::kMeanChunks;
  if (s == "augment") return LongTextStrategy::kAugment;
  throw Error(ErrorCode::kConfigInvalid, "strategy '" + std::string(s) + "'");
}

AffineMap::AffineMap(Matrix weights, Vector bias, Nonlinearity nonlinearity)
    : weights_(std::move(weights)), bias_(std::move(bias)), nonlinearity_(nonlinearity) {
  if (bias_.size() != weights_.rows()) throw Error(ErrorCode::kDimMismatch, "bias size");
}

AffineMap AffineMap::Random(std::size_t in_dim, std::size_t out_dim,
                            Nonlinearity nonlinearity, Rng& rng) {
  if (in_dim == 0 || out_dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "affine map dims must be >= 1");
  }
  const double s = 1.0 / std::sqrt(static_cast<double>(in_dim));
  Matrix weights(out_dim, in_dim);
  for (auto& w : weights.data()) w = UniformRange(rng, -s, s);
  Vector bias(out_dim);
  for (auto& b : bias) b = UniformRange(rng, -s, s);
  return AffineMap(std::move(weights), std::move(bias), nonlinearity);
}

Vector AffineMap::Apply(std::span<const double> x) const {
  if (x.size() != in_dim()) {
    throw Error(ErrorCode::kDimMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(in_dim()));
  }
  Vector out(bias_);
  for (std::size_t r = 0; r < out_dim(); ++r) {
    auto row = weights_.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) acc += row[c] * x[c];
    out[r] += acc;
    if (nonlinearity_ == Nonlinearity::kTanh) out[r] = std::tanh(out[r]);
  }
  return out;
}

DualEncoder::DualEncoder(AffineMap tweet_map, AffineMap article_map)
    : tweet_map_(std::move(tweet_map)), article_map_(std::move(article_map)) {
  if (tweet_map_.out_dim() != article_map_.out_dim()) {
    throw Error(ErrorCode::kDimMismatch, "joint dimensions differ");
  }
}

Vector DualEncoder::Encode(EncoderSide side, std::span<const double> features) const {
  return side == EncoderSide::kTweet ? tweet_map_.Apply(features)
                                     : article_map_.Apply(features);
}

Vector DualEncoder::Encode(EncoderSide side, std::span<const Vector> segments,
                           LongTextStrategy strategy) const {
  if (segments.empty()) throw Error(ErrorCode::kEmptyChunkList, "encode");
  if (strategy != LongTextStrategy::kMeanChunks) return Encode(side, segments.front());
  Vector mean(joint_dim(), 0.0);
  for (const auto& seg : segments) {
    const Vector out = Encode(side, seg);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += out[i];
  }
  for (auto& m : mean) m /= static_cast<double>(segments.size());
  return mean;
}

double CosineEmbeddingLoss(std::span<const double> e1, std::span<const double> e2,
                           int y, double margin) {
  CheckSameDim(e1, e2);
  const double cos = Cosine(e1, e2);
  if (y == 1) return 1.0 - cos;
  if (y == -1) return std::max(0.0, cos - margin);
  throw Error(ErrorCode::kInvalidArgument, "label must be +1 or -1");
}

LossGradient CosineEmbeddingLossGradient(std::span<const double> e1,
                                         std::span<const double> e2, int y,
                                         double margin) {
  CheckSameDim(e1, e2);
  if (y != 1 && y != -1) throw Error(ErrorCode::kInvalidArgument, "label must be +1 or -1");
  LossGradient grad{Vector(e1.size(), 0.0), Vector(e2.size(), 0.0)};
  const double n1 = Norm(e1);
  const double n2 = Norm(e2);
  if (n1 == 0.0 || n2 == 0.0) return grad;
  const double cos = Cosine(e1, e2);
  double sign = 0.0;
  if (y == 1) {
    sign = -1.0;
  } else if (cos > margin) {
    sign = 1.0;
  }
  if (sign == 0.0) return grad;
  grad.d_e1 = CosineGradient(e1, e2, n1, n2, cos);
  grad.d_e2 = CosineGradient(e2, e1, n2, n1, cos);
  for (auto& g : grad.d_e1) g *= sign;
  for (auto& g : grad.d_e2) g *= sign;
  return grad;
}

std::vector<IdPair> SampleNegatives(const std::vector<IdPair>& positives,
                                    const std::vector<std::string>& articles,
                                    double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0)) throw Error(ErrorCode::kInvalidArgument, "ratio must be > 0");
  std::vector<std::string> tweet_order;
  std::unordered_map<std::string, std::set<std::string>> linked;
  for (const auto& [tweet, article] : positives) {
    auto [it, inserted] = linked.try_emplace(tweet);
    if (inserted) tweet_order.push_back(tweet);
    it->second.insert(article);
  }

  Rng rng(seed);
  std::vector<IdPair> negatives;
  for (const auto& tweet : tweet_order) {
    const auto& mine = linked[tweet];
    std::vector<std::string> pool;
    for (const auto& a : articles) {
      if (!mine.count(a)) pool.push_back(a);
    }
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    if (pool.empty()) throw Error(ErrorCode::kNoNegativesAvailable, tweet);
    const auto wanted = static_cast<std::size_t>(
        std::floor(ratio * static_cast<double>(mine.size()) + 0.5));
    const std::size_t take = std::min(wanted, pool.size());
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(pool[i], pool[i + UniformIndex(rng, pool.size() - i)]);
      negatives.emplace_back(tweet, pool[i]);
    }
  }
  return negatives;
}

nlohmann::ordered_json TrainConfig::ToJson() const {
  nlohmann::ordered_json j;
  j["neg_ratio"] = neg_ratio;
  j["lr"] = lr;
  j["epochs"] = epochs;
  j["batch_size"] = batch_size;
  j["seed"] = seed;
  j["margin"] = margin;
  j["nonlinearity"] = std::string(ToString(nonlinearity));
  j["joint_dim"] = joint_dim;
  j["momentum"] = momentum;
  return j;
}

TrainConfig TrainConfig::FromJson(const nlohmann::json& j) {
  TrainConfig cfg;
  cfg.neg_ratio = j.value("neg_ratio", cfg.neg_ratio);
  cfg.lr = j.value("lr", cfg.lr);
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.margin = j.value("margin", cfg.margin);
  if (j.contains("nonlinearity")) {
    cfg.nonlinearity = ParseNonlinearity(j["nonlinearity"].get<std::string>());
  }
  cfg.joint_dim = j.value("joint_dim", cfg.joint_dim);
  cfg.momentum = j.value("momentum", cfg.momentum);
  ValidateConfig(cfg);
  return cfg;
}

std::vector<TrainingExample> BuildTrainingExamples(const std::vector<IdPair>& positives,
                                                   const std::vector<IdPair>& negatives,
                                                   const FeatureStore& features,
                                                   LongTextStrategy strategy) {
  std::vector<TrainingExample> examples;
  auto segments_of = [&](const std::string& article) -> const std::vector<Vector>& {
    auto it = features.articles.find(article);
    if (it == features.articles.end()) throw Error(ErrorCode::kMissingEmbedding, article);
    if (it->second.empty()) throw Error(ErrorCode::kEmptyChunkList, article);
    return it->second;
  };
  for (const auto& [tweet, article] : positives) {
    const auto& segs = segments_of(article);
    if (strategy == LongTextStrategy::kAugment) {
      for (std::size_t k = 0; k < segs.size(); ++k) {
        examples.push_back({tweet, article, static_cast<int>(k), 1});
      }
    } else {
      examples.push_back({tweet, article, -1, 1});
    }
  }
  for (const auto& [tweet, article] : negatives) {
    segments_of(article);
    examples.push_back({tweet, article, -1, -1});
  }
  for (const auto& ex : examples) {
    if (!features.tweets.count(ex.tweet_id)) {
      throw Error(ErrorCode::kMissingEmbedding, ex.tweet_id);
    }
  }
  return examples;
}

DualEncoder InitialEncoder(std::size_t tweet_dim, std::size_t article_dim,
                           const TrainConfig& cfg) {
  ValidateConfig(cfg);
  Rng rng(cfg.seed);
  const auto d = static_cast<std::size_t>(cfg.joint_dim);
  AffineMap tweet_map = AffineMap::Random(tweet_dim, d, cfg.nonlinearity, rng);
  AffineMap article_map = AffineMap::Random(article_dim, d, cfg.nonlinearity, rng);
  return DualEncoder(std::move(tweet_map), std::move(article_map));
}

double MeanLoss(const DualEncoder& encoder, const std::vector<TrainingExample>& examples,
                const FeatureStore& features, LongTextStrategy strategy, double margin) {
  if (examples.empty()) throw Error(ErrorCode::kEmptyInput, "no examples");
  double total = 0.0;
  for (const auto& ex : examples) {
    const Vector t = encoder.Encode(EncoderSide::kTweet, features.tweets.at(ex.tweet_id));
    const auto& segs = features.articles.at(ex.article_id);
    Vector a;
    if (ex.segment >= 0) {
      a = encoder.Encode(EncoderSide::kArticle, segs.at(ex.segment));
    } else {
      a = encoder.Encode(EncoderSide::kArticle, segs, strategy);
    }
    total += CosineEmbeddingLoss(t, a, ex.label, margin);
  }
  return total / static_cast<double>(examples.size());
}

TrainResult Train(const std::vector<IdPair>& positives, const FeatureStore& features,
                  const TrainConfig& cfg, LongTextStrategy strategy) {
  ValidateConfig(cfg);
  if (positives.empty()) throw Error(ErrorCode::kEmptyInput, "no positive pairs");
  if (features.tweets.empty() || features.articles.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no features");
  }

  const std::size_t tweet_dim = features.tweets.begin()->second.size();
  for (const auto& [id, v] : features.tweets) {
    if (v.size() != tweet_dim) throw Error(ErrorCode::kDimMismatch, id);
  }
  const std::size_t article_dim = features.articles.begin()->second.empty()
                                      ? 0
                                      : features.articles.begin()->second.front().size();
  std::vector<std::string> article_pool;
  for (const auto& [id, segs] : features.articles) {
    if (segs.empty()) throw Error(ErrorCode::kEmptyChunkList, id);
    for (const auto& s : segs) {
      if (s.size() != article_dim) throw Error(ErrorCode::kDimMismatch, id);
    }
    article_pool.push_back(id);
  }

  const auto negatives = SampleNegatives(positives, article_pool, cfg.neg_ratio,
                                         cfg.seed ^ 0x9E3779B97F4A7C15ULL);
  const auto examples = BuildTrainingExamples(positives, negatives, features, strategy);

  TrainResult result;
  result.encoder = InitialEncoder(tweet_dim, article_dim, cfg);
  result.n_examples = examples.size();

  // Resolve examples to unit indices so each distinct tweet / article unit is
  // encoded once per batch.
  std::vector<const Vector*> tweet_units;
  std::vector<std::vector<const Vector*>> article_units;
  std::map<std::string, std::size_t> tweet_index;
  std::map<std::pair<std::string, int>, std::size_t> article_index;
  struct Resolved {
    std::size_t tweet;
    std::size_t article;
    int label;
  };
  std::vector<Resolved> resolved;
  for (const auto& ex : examples) {
    auto [ti, t_new] = tweet_index.try_emplace(ex.tweet_id, tweet_units.size());
    if (t_new) tweet_units.push_back(&features.tweets.at(ex.tweet_id));
    auto [ai, a_new] =
        article_index.try_emplace({ex.article_id, ex.segment}, article_units.size());
    if (a_new) {
      article_units.push_back(
          ArticleUnit(features.articles.at(ex.article_id), ex.segment, strategy));
    }
    resolved.push_back({ti->second, ai->second, ex.label});
  }

  DualEncoder& enc = result.encoder;
  Gradients tweet_grad(enc.tweet_map());
  Gradients article_grad(enc.article_map());
  Velocity tweet_vel;
  Velocity article_vel;
  Rng shuffle_rng(cfg.seed + 2);
  std::vector<std::size_t> order(resolved.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  const std::size_t d = enc.joint_dim();
  std::vector<int> tweet_slot(tweet_units.size(), -1);
  std::vector<int> article_slot(article_units.size(), -1);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Shuffle(order, shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const double scale = 1.0 / static_cast<double>(end - start);

      // Forward pass over the distinct units of this batch.
      std::vector<std::size_t> t_ids;
      std::vector<std::size_t> a_ids;
      std::vector<Vector> t_out;
      std::vector<std::vector<Vector>> a_seg_out;
      std::vector<Vector> a_out;
      for (std::size_t k = start; k < end; ++k) {
        const Resolved& r = resolved[order[k]];
        if (tweet_slot[r.tweet] < 0) {
          tweet_slot[r.tweet] = static_cast<int>(t_ids.size());
          t_ids.push_back(r.tweet);
          t_out.push_back(enc.tweet_map().Apply(*tweet_units[r.tweet]));
        }
        if (article_slot[r.article] < 0) {
          article_slot[r.article] = static_cast<int>(a_ids.size());
          a_ids.push_back(r.article);
          std::vector<Vector> segs;
          Vector mean(d, 0.0);
          for (const Vector* x : article_units[r.article]) {
            segs.push_back(enc.article_map().Apply(*x));
            for (std::size_t i = 0; i < d; ++i) mean[i] += segs.back()[i];
          }
          for (auto& m : mean) m /= static_cast<double>(segs.size());
          a_seg_out.push_back(std::move(segs));
          a_out.push_back(std::move(mean));
        }
      }

      std::vector<Vector> t_grad(t_ids.size(), Vector(d, 0.0));
      std::vector<Vector> a_grad(a_ids.size(), Vector(d, 0.0));
      double batch_loss = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const Resolved& r = resolved[order[k]];
        const auto ts = static_cast<std::size_t>(tweet_slot[r.tweet]);
        const auto as = static_cast<std::size_t>(article_slot[r.article]);
        batch_loss += CosineEmbeddingLoss(t_out[ts], a_out[as], r.label, cfg.margin);
        const LossGradient g =
            CosineEmbeddingLossGradient(t_out[ts], a_out[as], r.label, cfg.margin);
        for (std::size_t i = 0; i < d; ++i) {
          t_grad[ts][i] += g.d_e1[i];
          a_grad[as][i] += g.d_e2[i];
        }
      }
      if (!std::isfinite(batch_loss)) {
        throw Error(ErrorCode::kNonFiniteLoss, "epoch " + std::to_string(epoch));
      }
      epoch_loss += batch_loss;

      tweet_grad.Reset();
      article_grad.Reset();
      for (std::size_t s = 0; s < t_ids.size(); ++s) {
        tweet_grad.Accumulate(enc.tweet_map(), *tweet_units[t_ids[s]], t_out[s],
                              t_grad[s], scale);
        tweet_slot[t_ids[s]] = -1;
      }
      for (std::size_t s = 0; s < a_ids.size(); ++s) {
        const auto& unit = article_units[a_ids[s]];
        const double share = scale / static_cast<double>(unit.size());
        for (std::size_t j = 0; j < unit.size(); ++j) {
          article_grad.Accumulate(enc.article_map(), *unit[j], a_seg_out[s][j],
                                  a_grad[s], share);
        }
        article_slot[a_ids[s]] = -1;
      }
      ApplyUpdate(enc.tweet_map(), tweet_grad, tweet_vel, cfg);
      ApplyUpdate(enc.article_map(), article_grad, article_vel, cfg);
      if (!AllFinite(enc.tweet_map()) || !AllFinite(enc.article_map())) {
        throw Error(ErrorCode::kNonFiniteLoss, "parameters diverged");
      }
    }
    result.loss_trace.push_back(epoch_loss / static_cast<double>(order.size()));
  }
  return result;
}

EncodedCorpus EncodeAll(const DualEncoder& encoder, const FeatureStore& features,
                        LongTextStrategy strategy) {
  EncodedCorpus out;
  for (const auto& [id, x] : features.tweets) {
    out.tweets.emplace(id, encoder.Encode(EncoderSide::kTweet, x));
  }
  for (const auto& [id, segs] : features.articles) {
    out.articles.emplace(id, encoder.Encode(EncoderSide::kArticle, segs, strategy));
  }
  return out;
}

nlohmann::ordered_json EncoderToJson(const DualEncoder& encoder, const TrainConfig& cfg) {
  nlohmann::ordered_json j;
  j["format"] = std::string(kEncoderFormat);
  j["version"] = kEncoderVersion;
  j["joint_dim"] = encoder.joint_dim();
  j["config"] = cfg.ToJson();
  j["tweet_map"] = MapToJson(encoder.tweet_map());
  j["article_map"] = MapToJson(encoder.article_map());
  return j;
}

DualEncoder EncoderFromJson(const nlohmann::json& j) {
  if (j.value("format", "") != kEncoderFormat || j.value("version", 0) != kEncoderVersion) {
    throw Error(ErrorCode::kConfigInvalid, "not a dual encoder v1");
  }
  return DualEncoder(MapFromJson(j.at("tweet_map")), MapFromJson(j.at("article_map")));
}

}  // namespace tweetlink
