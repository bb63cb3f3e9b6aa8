#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tweetlink/error.h"
#include "tweetlink/vectorize.h"

namespace tweetlink {

namespace {
constexpr std::string_view kTfidfFormat = "tweetlink.tfidf";
constexpr int kTfidfVersion = 1;
}  // namespace

Vocabulary Vocabulary::Build(const std::vector<TokenSeq>& docs) {
  std::set<std::string> terms;
  for (const auto& doc : docs) terms.insert(doc.begin(), doc.end());
  return FromTerms(std::vector<std::string>(terms.begin(), terms.end()));
}

Vocabulary Vocabulary::FromTerms(std::vector<std::string> sorted_terms) {
  Vocabulary vocab;
  vocab.terms_ = std::move(sorted_terms);
  for (std::size_t i = 0; i < vocab.terms_.size(); ++i) {
    if (!vocab.index_.emplace(vocab.terms_[i], i).second) {
      throw Error(ErrorCode::kDuplicateId, "vocabulary term " + vocab.terms_[i]);
    }
  }
  return vocab;
}

std::optional<std::size_t> Vocabulary::Index(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vector SparseVector::ToDense() const {
  Vector dense(dim, 0.0);
  for (const auto& [i, v] : entries) dense[i] = v;
  return dense;
}

double SparseVector::Norm() const {
  double sq = 0.0;
  for (const auto& [i, v] : entries) sq += v * v;
  return std::sqrt(sq);
}

TfidfModel TfidfModel::Fit(const std::vector<TokenSeq>& docs) {
  const bool any_tokens = std::any_of(docs.begin(), docs.end(),
                                      [](const TokenSeq& d) { return !d.empty(); });
  if (!any_tokens) throw Error(ErrorCode::kEmptyCorpus, "tf-idf fit");

  TfidfModel model;
  model.vocab_ = Vocabulary::Build(docs);
  model.n_docs_ = docs.size();
  std::vector<std::size_t> df(model.vocab_.size(), 0);
  for (const auto& doc : docs) {
    std::set<std::size_t> present;
    for (const auto& tok : doc) present.insert(*model.vocab_.Index(tok));
    for (std::size_t i : present) ++df[i];
  }
  const double n = static_cast<double>(model.n_docs_);
  model.idf_.resize(df.size());
  for (std::size_t i = 0; i < df.size(); ++i) {
    model.idf_[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
  }
  return model;
}

SparseVector TfidfModel::Transform(const TokenSeq& doc) const {
  std::map<std::size_t, double> counts;
  for (const auto& tok : doc) {
    if (auto i = vocab_.Index(tok)) counts[*i] += 1.0;
  }
  SparseVector out;
  out.dim = vocab_.size();
  for (const auto& [i, c] : counts) out.entries.emplace_back(i, c * idf_[i]);
  const double norm = out.Norm();
  if (norm > 0.0) {
    for (auto& entry : out.entries) entry.second /= norm;
  }
  return out;
}

nlohmann::json TfidfModel::ToJson() const {
  nlohmann::ordered_json j;
  j["format"] = std::string(kTfidfFormat);
  j["version"] = kTfidfVersion;
  j["n_docs"] = n_docs_;
  j["vocab"] = vocab_.terms();
  j["idf"] = idf_;
  return j;
}

TfidfModel TfidfModel::FromJson(const nlohmann::json& j) {
  if (j.value("format", "") != kTfidfFormat || j.value("version", 0) != kTfidfVersion) {
    throw Error(ErrorCode::kConfigInvalid, "not a tf-idf model v1");
  }
  TfidfModel model;
  model.n_docs_ = j.at("n_docs").get<std::size_t>();
  model.vocab_ = Vocabulary::FromTerms(j.at("vocab").get<std::vector<std::string>>());
  model.idf_ = j.at("idf").get<Vector>();
  if (model.idf_.size() != model.vocab_.size() || model.n_docs_ < 1) {
    throw Error(ErrorCode::kConfigInvalid, "inconsistent tf-idf model");
  }
  return model;
}

}  // namespace tweetlink
