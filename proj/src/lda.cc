#include <algorithm>
#include <cmath>

#include "tweetlink/error.h"
#include "tweetlink/random.h"
#include "tweetlink/vectorize.h"

namespace tweetlink {
namespace {

constexpr std::string_view kLdaFormat = "tweetlink.lda";
constexpr int kLdaVersion = 1;

std::size_t SampleDiscrete(Rng& rng, const Vector& weights, double total) {
  const double target = UniformUnit(rng) * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (target < acc) return k;
  }
  return weights.size() - 1;
}

struct GibbsState {
  std::vector<std::vector<std::size_t>> words;
  std::vector<std::vector<std::size_t>> topics;
  Grid<int> doc_topic;   // docs x K
  Grid<int> topic_word;  // K x V
  std::vector<int> topic_total;
};

double JointLogLikelihood(const GibbsState& s, std::size_t num_topics,
                          std::size_t vocab_size, double alpha, double beta) {
  const double v = static_cast<double>(vocab_size);
  const double k = static_cast<double>(num_topics);
  double ll = 0.0;
  for (std::size_t t = 0; t < num_topics; ++t) {
    ll += std::lgamma(v * beta) - v * std::lgamma(beta);
    for (std::size_t w = 0; w < vocab_size; ++w) {
      ll += std::lgamma(s.topic_word(t, w) + beta);
    }
    ll -= std::lgamma(s.topic_total[t] + v * beta);
  }
  for (std::size_t d = 0; d < s.words.size(); ++d) {
    ll += std::lgamma(k * alpha) - k * std::lgamma(alpha);
    for (std::size_t t = 0; t < num_topics; ++t) {
      ll += std::lgamma(s.doc_topic(d, t) + alpha);
    }
    ll -= std::lgamma(static_cast<double>(s.words[d].size()) + k * alpha);
  }
  return ll;
}

}  // namespace

LdaModel LdaModel::Fit(const std::vector<TokenSeq>& docs, const LdaParams& params) {
  if (params.num_topics < 1) {
    throw Error(ErrorCode::kDegenerateK, std::to_string(params.num_topics));
  }
  if (params.iters < 1) throw Error(ErrorCode::kInvalidArgument, "iters must be >= 1");
  const double alpha = params.ResolvedAlpha();
  if (!(alpha > 0.0) || !(params.beta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha and beta must be positive");
  }
  const bool any_tokens = std::any_of(docs.begin(), docs.end(),
                                      [](const TokenSeq& d) { return !d.empty(); });
  if (!any_tokens) throw Error(ErrorCode::kEmptyCorpus, "lda fit");

  LdaModel model;
  model.num_topics_ = params.num_topics;
  model.alpha_ = alpha;
  model.beta_ = params.beta;
  model.seed_ = params.seed;
  model.vocab_ = Vocabulary::Build(docs);

  const std::size_t num_topics = static_cast<std::size_t>(params.num_topics);
  const std::size_t vocab_size = model.vocab_.size();
  const double vbeta = static_cast<double>(vocab_size) * params.beta;

  Rng rng(params.seed);
  GibbsState s;
  s.doc_topic = Grid<int>(docs.size(), num_topics, 0);
  s.topic_word = Grid<int>(num_topics, vocab_size, 0);
  s.topic_total.assign(num_topics, 0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::vector<std::size_t> words;
    std::vector<std::size_t> topics;
    for (const auto& tok : docs[d]) {
      const std::size_t w = *model.vocab_.Index(tok);
      const std::size_t t = UniformIndex(rng, num_topics);
      words.push_back(w);
      topics.push_back(t);
      ++s.doc_topic(d, t);
      ++s.topic_word(t, w);
      ++s.topic_total[t];
    }
    s.words.push_back(std::move(words));
    s.topics.push_back(std::move(topics));
  }

  Vector weights(num_topics);
  for (int sweep = 0; sweep < params.iters; ++sweep) {
    for (std::size_t d = 0; d < s.words.size(); ++d) {
      for (std::size_t i = 0; i < s.words[d].size(); ++i) {
        const std::size_t w = s.words[d][i];
        std::size_t t = s.topics[d][i];
        --s.doc_topic(d, t);
        --s.topic_word(t, w);
        --s.topic_total[t];
        double total = 0.0;
        for (std::size_t k = 0; k < num_topics; ++k) {
          weights[k] = (s.doc_topic(d, k) + alpha) * (s.topic_word(k, w) + params.beta) /
                       (s.topic_total[k] + vbeta);
          total += weights[k];
        }
        t = SampleDiscrete(rng, weights, total);
        s.topics[d][i] = t;
        ++s.doc_topic(d, t);
        ++s.topic_word(t, w);
        ++s.topic_total[t];
      }
    }
    model.trace_.push_back(
        JointLogLikelihood(s, num_topics, vocab_size, alpha, params.beta));
  }

  model.phi_ = Matrix(num_topics, vocab_size);
  for (std::size_t k = 0; k < num_topics; ++k) {
    double row_sum = 0.0;
    for (std::size_t w = 0; w < vocab_size; ++w) {
      model.phi_(k, w) = (s.topic_word(k, w) + params.beta) / (s.topic_total[k] + vbeta);
      row_sum += model.phi_(k, w);
    }
    for (std::size_t w = 0; w < vocab_size; ++w) model.phi_(k, w) /= row_sum;
  }
  return model;
}

Vector LdaModel::Infer(const TokenSeq& doc, int iters, std::uint64_t seed) const {
  const std::size_t num_topics = static_cast<std::size_t>(num_topics_);
  if (num_topics == 1) return Vector{1.0};
  if (iters < 1) throw Error(ErrorCode::kInvalidArgument, "iters must be >= 1");

  std::vector<std::size_t> words;
  for (const auto& tok : doc) {
    if (auto w = vocab_.Index(tok)) words.push_back(*w);
  }
  if (words.empty()) return Vector(num_topics, 1.0 / static_cast<double>(num_topics));

  Rng rng(seed);
  std::vector<std::size_t> topics(words.size());
  std::vector<int> counts(num_topics, 0);
  for (std::size_t i = 0; i < words.size(); ++i) {
    topics[i] = UniformIndex(rng, num_topics);
    ++counts[topics[i]];
  }

  // Average the topic counts over the second half of the sweeps.
  const int burn_in = iters / 2;
  Vector accumulated(num_topics, 0.0);
  int samples = 0;
  Vector weights(num_topics);
  for (int sweep = 0; sweep < iters; ++sweep) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      --counts[topics[i]];
      double total = 0.0;
      for (std::size_t k = 0; k < num_topics; ++k) {
        weights[k] = (counts[k] + alpha_) * phi_(k, words[i]);
        total += weights[k];
      }
      topics[i] = SampleDiscrete(rng, weights, total);
      ++counts[topics[i]];
    }
    if (sweep >= burn_in) {
      for (std::size_t k = 0; k < num_topics; ++k) accumulated[k] += counts[k];
      ++samples;
    }
  }

  Vector theta(num_topics);
  double sum = 0.0;
  for (std::size_t k = 0; k < num_topics; ++k) {
    theta[k] = accumulated[k] / samples + alpha_;
    sum += theta[k];
  }
  for (auto& v : theta) v /= sum;
  return theta;
}

nlohmann::json LdaModel::ToJson() const {
  nlohmann::ordered_json j;
  j["format"] = std::string(kLdaFormat);
  j["version"] = kLdaVersion;
  j["num_topics"] = num_topics_;
  j["alpha"] = alpha_;
  j["beta"] = beta_;
  j["seed"] = seed_;
  j["vocab"] = vocab_.terms();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < phi_.rows(); ++k) {
    auto r = phi_.row(k);
    rows.push_back(Vector(r.begin(), r.end()));
  }
  j["phi"] = std::move(rows);
  j["log_likelihood"] = trace_;
  return j;
}

LdaModel LdaModel::FromJson(const nlohmann::json& j) {
  if (j.value("format", "") != kLdaFormat || j.value("version", 0) != kLdaVersion) {
    throw Error(ErrorCode::kConfigInvalid, "not an lda model v1");
  }
  LdaModel model;
  model.num_topics_ = j.at("num_topics").get<int>();
  model.alpha_ = j.at("alpha").get<double>();
  model.beta_ = j.at("beta").get<double>();
  model.seed_ = j.at("seed").get<std::uint64_t>();
  model.vocab_ = Vocabulary::FromTerms(j.at("vocab").get<std::vector<std::string>>());
  const auto rows = j.at("phi").get<std::vector<Vector>>();
  if (model.num_topics_ < 1 || rows.size() != static_cast<std::size_t>(model.num_topics_)) {
    throw Error(ErrorCode::kConfigInvalid, "inconsistent lda model");
  }
  model.phi_ = Matrix(rows.size(), model.vocab_.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != model.vocab_.size()) {
      throw Error(ErrorCode::kConfigInvalid, "phi row width");
    }
    std::copy(rows[k].begin(), rows[k].end(), model.phi_.row(k).begin());
  }
  model.trace_ = j.value("log_likelihood", std::vector<double>{});
  return model;
}

}  // namespace tweetlink
