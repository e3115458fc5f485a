#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace laesim {

// Dense row-major (rows x cols) grid of T. Used for per-(hotspot, service)
// quantities throughout.
template <typename T>
class Grid2 {
 public:
  Grid2() = default;
  Grid2(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  T& at(std::size_t r, std::size_t c) { return data_[index(r, c)]; }
  const T& at(std::size_t r, std::size_t c) const { return data_[index(r, c)]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool same_shape(const Grid2& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t index(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("Grid2 index");
    return r * cols_ + c;
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

// Dense (n x rows x cols) grid, outermost index first.
template <typename T>
class Grid3 {
 public:
  Grid3() = default;
  Grid3(std::size_t n, std::size_t rows, std::size_t cols, T fill = T{})
      : n_(n), rows_(rows), cols_(cols), data_(n * rows * cols, fill) {}

  T& at(std::size_t i, std::size_t r, std::size_t c) { return data_[index(i, r, c)]; }
  const T& at(std::size_t i, std::size_t r, std::size_t c) const { return data_[index(i, r, c)]; }

  std::size_t n() const { return n_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t index(std::size_t i, std::size_t r, std::size_t c) const {
    if (i >= n_ || r >= rows_ || c >= cols_) throw std::out_of_range("Grid3 index");
    return (i * rows_ + r) * cols_ + c;
  }

  std::size_t n_ = 0, rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

}  // namespace laesim
