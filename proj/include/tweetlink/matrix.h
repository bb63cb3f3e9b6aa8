#ifndef TWEETLINK_MATRIX_H_
#define TWEETLINK_MATRIX_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tweetlink {

using Vector = std::vector<double>;

// Dense row-major matrix.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = Grid<double>;

// Tweets x articles labels: 1 match, -1 no match, 0 unknown (masked out).
struct GroundTruthMatrix {
  std::vector<std::string> tweet_ids;
  std::vector<std::string> article_ids;
  Grid<int> values;
};

}  // namespace tweetlink

#endif  // TWEETLINK_MATRIX_H_
