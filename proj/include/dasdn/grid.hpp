#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dasdn/error.hpp"

namespace dasdn {

/// Dense rows x cols array of samples, row-major.
///
/// For seismic records rows are time samples and cols are channels, so a
/// trace is a (strided) column.
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Grid2D(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw ShapeError("Grid2D: data length does not equal rows*cols");
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool same_shape(const Grid2D& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline void require_same_shape(const Grid2D& a, const Grid2D& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": grid dimensions differ");
  }
}

}  // namespace dasdn
