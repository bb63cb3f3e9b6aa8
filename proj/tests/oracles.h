// Slow reference implementations used only by tests. Each is written
// directly from the metric definition, without sharing code with the library.

#ifndef TWEETLINK_TESTS_ORACLES_H_
#define TWEETLINK_TESTS_ORACLES_H_

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct Counts {
  int tp = 0, fp = 0, tn = 0, fn = 0;
};

// Confusion counts over every cell with a nonzero label.
inline Counts Confusion(const std::vector<std::vector<double>>& scores,
                        const std::vector<std::vector<int>>& gt, double threshold) {
  Counts c;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    for (std::size_t j = 0; j < gt[i].size(); ++j) {
      if (gt[i][j] == 0) continue;
      const bool pred = scores[i][j] >= threshold;
      if (pred && gt[i][j] == 1) ++c.tp;
      if (pred && gt[i][j] == -1) ++c.fp;
      if (!pred && gt[i][j] == -1) ++c.tn;
      if (!pred && gt[i][j] == 1) ++c.fn;
    }
  }
  return c;
}

inline double Precision(const Counts& c) {
  return c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fp);
}
inline double Recall(const Counts& c) {
  return c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fn);
}
inline double F1(const Counts& c) {
  const double p = Precision(c), r = Recall(c);
  return p + r == 0.0 ? 0.0 : 2 * p * r / (p + r);
}
inline double Accuracy(const Counts& c) {
  const int n = c.tp + c.fp + c.tn + c.fn;
  return n == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / n;
}

// Average precision by scanning every distinct score as a cutoff from the
// top: sum of (recall gain) x (precision at that cutoff).
inline double AveragePrecision(const std::vector<double>& scores, const std::vector<int>& labels) {
  std::set<double, std::greater<>> cutoffs(scores.begin(), scores.end());
  int positives = 0;
  for (int l : labels) positives += l == 1;
  double ap = 0.0, prev_recall = 0.0;
  for (double t : cutoffs) {
    int tp = 0, taken = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= t) {
        ++taken;
        tp += labels[i] == 1;
      }
    }
    const double recall = static_cast<double>(tp) / positives;
    ap += (recall - prev_recall) * static_cast<double>(tp) / taken;
    prev_recall = recall;
  }
  return ap;
}

// idf(t) = ln((1 + N) / (1 + df)) + 1 computed with a plain map.
inline std::map<std::string, double> Idf(const std::vector<std::vector<std::string>>& docs) {
  std::map<std::string, int> df;
  for (const auto& d : docs) {
    std::set<std::string> uniq(d.begin(), d.end());
    for (const auto& t : uniq) ++df[t];
  }
  std::map<std::string, double> idf;
  const double n = static_cast<double>(docs.size());
  for (const auto& [t, count] : df) idf[t] = std::log((1.0 + n) / (1.0 + count)) + 1.0;
  return idf;
}

// L2-normalized tf x idf weights of `doc` keyed by term; unseen terms drop.
inline std::map<std::string, double> Tfidf(const std::map<std::string, double>& idf,
                                           const std::vector<std::string>& doc) {
  std::map<std::string, double> w;
  for (const auto& t : doc) {
    if (idf.count(t)) w[t] += idf.at(t);
  }
  double norm = 0.0;
  for (const auto& [t, v] : w) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0) {
    for (auto& [t, v] : w) v /= norm;
  }
  return w;
}

// Central difference d f / d x_i.
inline std::vector<double> CentralDiff(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double up = f(x);
    x[i] = orig - h;
    const double down = f(x);
    x[i] = orig;
    grad[i] = (up - down) / (2 * h);
  }
  return grad;
}

// Fleiss' kappa straight from the textbook formulas.
inline double Fleiss(const std::vector<std::vector<int>>& table) {
  const double items = static_cast<double>(table.size());
  const std::size_t cats = table[0].size();
  double raters = 0;
  for (int v : table[0]) raters += v;
  std::vector<double> p(cats, 0.0);
  double p_bar = 0.0;
  for (const auto& row : table) {
    double agree = 0.0;
    for (std::size_t j = 0; j < cats; ++j) {
      agree += row[j] * (row[j] - 1.0);
      p[j] += row[j];
    }
    p_bar += agree / (raters * (raters - 1.0));
  }
  p_bar /= items;
  double pe = 0.0;
  for (double v : p) pe += (v / (items * raters)) * (v / (items * raters));
  return (p_bar - pe) / (1.0 - pe);
}

}  // namespace oracle

#endif  // TWEETLINK_TESTS_ORACLES_H_
