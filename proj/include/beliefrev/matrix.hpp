#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "beliefrev/error.hpp"

namespace beliefrev {

// Dense row-major matrix of doubles. Attribute value spaces are tiny (a few
// dozen values at most), so this stays deliberately simple.
class Matrix {
 public:
  Matrix() = default;

  Matrix(int rows, int cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, value) {
    if (rows < 0 || cols < 0) throw ConfigError("matrix dimensions must be nonnegative");
  }

  static Matrix identity(int n) {
    Matrix m(n, n, 0.0);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  // True when every row is a probability vector within tol.
  bool row_stochastic(double tol) const {
    for (int r = 0; r < rows_; ++r) {
      double sum = 0.0;
      for (int c = 0; c < cols_; ++c) {
        const double v = (*this)(r, c);
        if (!(v >= 0.0) || v > 1.0 + tol) return false;
        sum += v;
      }
      if (std::abs(sum - 1.0) > tol) return false;
    }
    return true;
  }

  bool operator==(const Matrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

}  // namespace beliefrev
