#ifndef TWEETLINK_VECTORIZE_H_
#define TWEETLINK_VECTORIZE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tweetlink/matrix.h"
#include "tweetlink/textprep.h"

namespace tweetlink {

// Terms indexed densely in lexicographic order.
class Vocabulary {
 public:
  Vocabulary() = default;
  static Vocabulary Build(const std::vector<TokenSeq>& docs);
  static Vocabulary FromTerms(std::vector<std::string> sorted_terms);

  std::optional<std::size_t> Index(const std::string& term) const;
  const std::string& Term(std::size_t index) const { return terms_[index]; }
  const std::vector<std::string>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct SparseVector {
  std::size_t dim = 0;
  std::vector<std::pair<std::size_t, double>> entries;  // ascending index

  Vector ToDense() const;
  double Norm() const;
};

// Raw term counts weighted by the smoothed idf ln((1 + N) / (1 + df)) + 1,
// then L2-normalized.
class TfidfModel {
 public:
  static TfidfModel Fit(const std::vector<TokenSeq>& docs);

  // Out-of-vocabulary terms are ignored; an all-OOV document maps to zero.
  SparseVector Transform(const TokenSeq& doc) const;
  Vector TransformDense(const TokenSeq& doc) const {
    return Transform(doc).ToDense();
  }

  const Vocabulary& vocab() const { return vocab_; }
  const Vector& idf() const { return idf_; }
  std::size_t n_docs() const { return n_docs_; }
  std::size_t dim() const { return vocab_.size(); }

  nlohmann::json ToJson() const;
  static TfidfModel FromJson(const nlohmann::json& j);

 private:
  Vocabulary vocab_;
  Vector idf_;
  std::size_t n_docs_ = 0;
};

struct LdaParams {
  int num_topics = 10;
  std::optional<double> alpha;  // defaults to 50 / num_topics
  double beta = 0.01;
  int iters = 200;
  std::uint64_t seed = 1;

  double ResolvedAlpha() const { return alpha ? *alpha : 50.0 / num_topics; }
};

// Topic model fitted by collapsed Gibbs sampling.
class LdaModel {
 public:
  static LdaModel Fit(const std::vector<TokenSeq>& docs, const LdaParams& params);

  // Fold-in Gibbs sampling with the topic-word distributions frozen. Returns
  // smoothed topic proportions summing to one.
  Vector Infer(const TokenSeq& doc, int iters, std::uint64_t seed) const;

  int num_topics() const { return num_topics_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::uint64_t seed() const { return seed_; }
  const Vocabulary& vocab() const { return vocab_; }
  // num_topics x |vocab|, each row a distribution.
  const Matrix& phi() const { return phi_; }
  // Joint log p(words, topic assignments) after each training sweep.
  const std::vector<double>& log_likelihood_trace() const { return trace_; }

  nlohmann::json ToJson() const;
  static LdaModel FromJson(const nlohmann::json& j);

 private:
  int num_topics_ = 1;
  double alpha_ = 50.0;
  double beta_ = 0.01;
  std::uint64_t seed_ = 1;
  Vocabulary vocab_;
  Matrix phi_;
  std::vector<double> trace_;
};

// Externally computed embeddings keyed by document id.
class EmbeddingTable {
 public:
  static EmbeddingTable Load(const std::filesystem::path& path);
  static EmbeddingTable Parse(std::string_view jsonl);

  // The first vector fixes the dimension. Throws kDuplicateId, kDimMismatch.
  void Add(const std::string& id, Vector vec);
  bool Contains(const std::string& id) const { return table_.count(id) > 0; }
  // Throws kMissingEmbedding.
  const Vector& at(const std::string& id) const;

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return table_.size(); }
  const std::map<std::string, Vector>& entries() const { return table_; }

 private:
  std::size_t dim_ = 0;
  std::map<std::string, Vector> table_;
};

}  // namespace tweetlink

#endif  // TWEETLINK_VECTORIZE_H_
