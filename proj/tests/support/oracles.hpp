#pragma once

// Test-only oracles and generators. Everything here is deliberately
// independent of the library's solver paths: the stationary distribution
// comes from a direct linear solve, not power iteration.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "beliefrev/knowledge.hpp"
#include "beliefrev/matrix.hpp"
#include "beliefrev/rng.hpp"
#include "beliefrev/types.hpp"

namespace testsupport {

// 99th-percentile chi-square critical values by degrees of freedom.
inline double chi_square_crit_99(int df) {
  switch (df) {
    case 1: return 6.6348966;
    case 2: return 9.2103404;
    case 3: return 11.3448667;
    case 4: return 13.2767041;
    case 5: return 15.0862725;
    default: throw std::runtime_error("no tabulated chi-square value for df");
  }
}

inline std::vector<double> random_simplex(beliefrev::Rng& rng, int n, double floor = 0.0) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (double& x : v) {
    x = rng.next_double() + floor;
    sum += x;
  }
  for (double& x : v) x /= sum;
  return v;
}

inline beliefrev::Matrix random_row_stochastic(beliefrev::Rng& rng, int rows, int cols,
                                               double floor = 0.05) {
  beliefrev::Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto row = random_simplex(rng, cols, floor);
    for (int c = 0; c < cols; ++c) m(r, c) = row[c];
  }
  return m;
}

// Matrix of the composed chain-rule map b_x -> x_given_y(y_given_x(b_x)),
// acting on column vectors: out[i2] = sum_j X[j][i2] * sum_i Y[i][j] * b[i].
inline beliefrev::Matrix composite_map(const beliefrev::KnowledgeMatrix& x_given_y,
                                       const beliefrev::KnowledgeMatrix& y_given_x) {
  const auto& X = x_given_y.table;
  const auto& Y = y_given_x.table;
  const int nx = Y.rows();
  const int ny = Y.cols();
  beliefrev::Matrix m(nx, nx, 0.0);
  for (int i = 0; i < nx; ++i)
    for (int i2 = 0; i2 < nx; ++i2) {
      double total = 0.0;
      for (int j = 0; j < ny; ++j) total += X(j, i2) * Y(i, j);
      m(i2, i) = total;  // column i holds the image of e_i
    }
  return m;
}

// Gaussian elimination with partial pivoting; n is tiny here.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                        std::vector<double> rhs) {
  const int n = static_cast<int>(rhs.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    if (std::abs(a[col][col]) < 1e-14)
      throw std::runtime_error("singular system in linear-solve oracle");
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = rhs[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

// Stationary distribution of a column-stochastic map by direct linear solve:
// least squares over the stacked system [(M - I); 1^T] b = (0, ..., 0, 1)
// through its normal equations. Independent of power iteration.
inline std::vector<double> stationary_direct(const beliefrev::Matrix& m) {
  const int n = m.rows();
  std::vector<std::vector<double>> normal(n, std::vector<double>(n, 0.0));
  std::vector<double> rhs(n, 1.0);  // (A^T e) with e = (0,...,0,1) and a ones row
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 1.0;  // ones-row contribution
      for (int k = 0; k < n; ++k) {
        const double aki = m(k, i) - (k == i ? 1.0 : 0.0);
        const double akj = m(k, j) - (k == j ? 1.0 : 0.0);
        acc += aki * akj;
      }
      normal[i][j] = acc;
    }
  }
  auto b = solve_linear(std::move(normal), std::move(rhs));
  double sum = 0.0;
  for (double v : b) sum += v;
  for (double& v : b) v /= sum;
  return b;
}

}  // namespace testsupport
