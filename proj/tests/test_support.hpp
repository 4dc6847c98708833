#pragma once

#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "spmvtk/formats.hpp"

namespace testsup {

using spmvtk::CrsMatrix;
using spmvtk::DenseMatrix;
using spmvtk::index_t;

inline CrsMatrix crs(index_t n, std::vector<double> values,
                     std::vector<index_t> col_idx,
                     std::vector<index_t> row_ptr) {
  CrsMatrix m;
  m.n = n;
  m.values = std::move(values);
  m.col_idx = std::move(col_idx);
  m.row_ptr = std::move(row_ptr);
  return m;
}

inline CrsMatrix identity(index_t n) {
  CrsMatrix m;
  m.n = n;
  for (index_t i = 1; i <= n; ++i) {
    m.values.push_back(1.0);
    m.col_idx.push_back(i);
  }
  m.row_ptr.resize(static_cast<std::size_t>(n) + 1);
  for (index_t i = 0; i <= n; ++i)
    m.row_ptr[static_cast<std::size_t>(i)] = i + 1;
  return m;
}

// random square CRS with distinct positions per row, unsorted column order,
// values in [-1, 1]
inline CrsMatrix random_crs(std::mt19937_64& rng, index_t max_n,
                            index_t max_nnz) {
  index_t n = 1 + static_cast<index_t>(rng() % static_cast<std::uint64_t>(max_n));
  index_t want = static_cast<index_t>(
      rng() % static_cast<std::uint64_t>(std::min(max_nnz, n * n) + 1));
  std::set<std::pair<index_t, index_t>> pos;
  while (static_cast<index_t>(pos.size()) < want)
    pos.emplace(1 + static_cast<index_t>(rng() % n),
                1 + static_cast<index_t>(rng() % n));
  std::vector<std::vector<std::pair<index_t, double>>> rows(
      static_cast<std::size_t>(n));
  for (auto [i, j] : pos) {
    double v =
        2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    rows[static_cast<std::size_t>(i - 1)].emplace_back(j, v);
  }
  // shuffle within rows so column order is not sorted
  for (auto& r : rows)
    for (std::size_t k = r.size(); k > 1; --k)
      std::swap(r[k - 1], r[rng() % k]);
  CrsMatrix m;
  m.n = n;
  m.row_ptr.push_back(1);
  for (auto& r : rows) {
    for (auto& [j, v] : r) {
      m.col_idx.push_back(j);
      m.values.push_back(v);
    }
    m.row_ptr.push_back(m.nnz() + 1);
  }
  return m;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, index_t n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x)
    v = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  return x;
}

// brute-force dense mat-vec oracle
inline std::vector<double> dense_matvec(const DenseMatrix& d,
                                        const std::vector<double>& x) {
  std::vector<double> y(static_cast<std::size_t>(d.n), 0.0);
  for (index_t i = 1; i <= d.n; ++i) {
    double acc = 0.0;
    for (index_t j = 1; j <= d.n; ++j)
      acc += d.at(i, j) * x[static_cast<std::size_t>(j - 1)];
    y[static_cast<std::size_t>(i - 1)] = acc;
  }
  return y;
}

inline double max_rel_error(const std::vector<double>& got,
                            const std::vector<double>& want) {
  double scale = 0.0;
  for (double v : want) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) scale = 1.0;
  double err = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i)
    err = std::max(err, std::fabs(got[i] - want[i]) / scale);
  return err;
}

}  // namespace testsup
