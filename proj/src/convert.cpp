#include "spmvtk/convert.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "spmvtk/error.hpp"

namespace spmvtk {

CooMatrix crs_to_coo_row(const CrsMatrix& m) {
  CooMatrix out;
  out.n = m.n;
  out.ordering = CooOrdering::RowMajor;
  out.values = m.values;
  out.col_idx = m.col_idx;
  out.row_idx.resize(m.values.size());
  for (index_t i = 1; i <= m.n; ++i)
    for (index_t p = m.row_ptr[i - 1]; p < m.row_ptr[i]; ++p)
      out.row_idx[static_cast<std::size_t>(p - 1)] = i;
  return out;
}

CcsMatrix crs_to_ccs(const CrsMatrix& m) {
  CcsMatrix out;
  out.n = m.n;
  out.values.resize(m.values.size());
  out.row_idx.resize(m.values.size());
  out.col_ptr.assign(static_cast<std::size_t>(m.n) + 1, 0);

  // pass 1: count entries per column
  std::vector<index_t> count(static_cast<std::size_t>(m.n), 0);
  for (index_t j : m.col_idx) ++count[static_cast<std::size_t>(j - 1)];

  // pass 2: exclusive prefix sum into column pointers
  out.col_ptr[0] = 1;
  for (index_t j = 1; j <= m.n; ++j)
    out.col_ptr[static_cast<std::size_t>(j)] =
        out.col_ptr[static_cast<std::size_t>(j - 1)] +
        count[static_cast<std::size_t>(j - 1)];

  // pass 3: scatter each CRS entry to the next free slot of its column
  std::vector<index_t> next(out.col_ptr.begin(), out.col_ptr.end() - 1);
  for (index_t i = 1; i <= m.n; ++i)
    for (index_t p = m.row_ptr[i - 1]; p < m.row_ptr[i]; ++p) {
      index_t j = m.col_idx[static_cast<std::size_t>(p - 1)];
      index_t slot = next[static_cast<std::size_t>(j - 1)]++;
      out.values[static_cast<std::size_t>(slot - 1)] =
          m.values[static_cast<std::size_t>(p - 1)];
      out.row_idx[static_cast<std::size_t>(slot - 1)] = i;
    }
  return out;
}

CooMatrix ccs_to_coo_col(const CcsMatrix& m) {
  CooMatrix out;
  out.n = m.n;
  out.ordering = CooOrdering::ColMajor;
  out.values = m.values;
  out.row_idx = m.row_idx;
  out.col_idx.resize(m.values.size());
  for (index_t j = 1; j <= m.n; ++j)
    for (index_t p = m.col_ptr[j - 1]; p < m.col_ptr[j]; ++p)
      out.col_idx[static_cast<std::size_t>(p - 1)] = j;
  return out;
}

CooMatrix crs_to_coo_col(const CrsMatrix& m) {
  return ccs_to_coo_col(crs_to_ccs(m));
}

std::uint64_t estimate_ell_bytes(const CrsMatrix& m, int value_bytes,
                                 int index_bytes) {
  index_t max_row = 0;
  for (index_t i = 1; i <= m.n; ++i)
    max_row = std::max(max_row, m.row_ptr[i] - m.row_ptr[i - 1]);
  return static_cast<std::uint64_t>(m.n) * static_cast<std::uint64_t>(max_row) *
         static_cast<std::uint64_t>(value_bytes + index_bytes);
}

EllMatrix crs_to_ell(const CrsMatrix& m, std::uint64_t max_bytes) {
  if (max_bytes != kNoByteLimit) {
    std::uint64_t est = estimate_ell_bytes(m);
    if (est > max_bytes)
      throw Error(ErrorCode::MemoryLimit,
                  "ELL footprint estimate " + std::to_string(est) +
                      " bytes exceeds limit " + std::to_string(max_bytes));
  }
  EllMatrix out;
  out.n = m.n;
  out.row_entry_count.resize(static_cast<std::size_t>(m.n));
  for (index_t i = 1; i <= m.n; ++i) {
    index_t r = m.row_ptr[i] - m.row_ptr[i - 1];
    out.row_entry_count[static_cast<std::size_t>(i - 1)] = r;
    out.band_count = std::max(out.band_count, r);
  }
  out.stored_nnz = m.nnz();
  std::size_t slots = static_cast<std::size_t>(out.n * out.band_count);
  out.values.assign(slots, 0.0);
  out.col_idx.resize(slots);
  for (index_t i = 1; i <= m.n; ++i) {
    index_t r = out.row_entry_count[static_cast<std::size_t>(i - 1)];
    for (index_t k = 1; k <= out.band_count; ++k) {
      std::size_t s = EllMatrix::slot(out.n, k, i);
      if (k <= r) {
        std::size_t p = static_cast<std::size_t>(m.row_ptr[i - 1] - 1 + k - 1);
        out.values[s] = m.values[p];
        out.col_idx[s] = m.col_idx[p];
      } else {
        out.col_idx[s] = i;  // padding: own row, value 0.0
      }
    }
  }
  return out;
}

namespace {

CrsMatrix triplets_to_canonical_crs(index_t n,
                                    std::vector<index_t>&& rows,
                                    std::vector<index_t>&& cols,
                                    std::vector<double>&& vals) {
  std::vector<std::size_t> perm(vals.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return rows[a] != rows[b] ? rows[a] < rows[b] : cols[a] < cols[b];
  });
  for (std::size_t k = 1; k < perm.size(); ++k) {
    std::size_t a = perm[k - 1], b = perm[k];
    if (rows[a] == rows[b] && cols[a] == cols[b])
      throw Error(ErrorCode::Validation,
                  "duplicate (row, col) pair (" + std::to_string(rows[a]) +
                      ", " + std::to_string(cols[a]) + ")");
  }
  CrsMatrix out;
  out.n = n;
  out.values.resize(vals.size());
  out.col_idx.resize(vals.size());
  out.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  out.row_ptr[0] = 1;
  for (index_t r : rows) ++out.row_ptr[static_cast<std::size_t>(r)];
  for (index_t i = 1; i <= n; ++i)
    out.row_ptr[static_cast<std::size_t>(i)] +=
        out.row_ptr[static_cast<std::size_t>(i - 1)];
  // perm is row-major sorted; write in order
  std::vector<index_t> next(out.row_ptr.begin(), out.row_ptr.end() - 1);
  for (std::size_t k = 0; k < perm.size(); ++k) {
    std::size_t p = perm[k];
    index_t slot = next[static_cast<std::size_t>(rows[p] - 1)]++;
    out.values[static_cast<std::size_t>(slot - 1)] = vals[p];
    out.col_idx[static_cast<std::size_t>(slot - 1)] = cols[p];
  }
  return out;
}

}  // namespace

CrsMatrix coo_to_crs(const CooMatrix& m) {
  auto rows = m.row_idx;
  auto cols = m.col_idx;
  auto vals = m.values;
  return triplets_to_canonical_crs(m.n, std::move(rows), std::move(cols),
                                   std::move(vals));
}

CrsMatrix ell_to_crs(const EllMatrix& m) {
  std::vector<index_t> rows, cols;
  std::vector<double> vals;
  rows.reserve(static_cast<std::size_t>(m.stored_nnz));
  cols.reserve(static_cast<std::size_t>(m.stored_nnz));
  vals.reserve(static_cast<std::size_t>(m.stored_nnz));
  for (index_t i = 1; i <= m.n; ++i) {
    index_t r = m.row_entry_count[static_cast<std::size_t>(i - 1)];
    for (index_t k = 1; k <= r; ++k) {
      std::size_t s = EllMatrix::slot(m.n, k, i);
      rows.push_back(i);
      cols.push_back(m.col_idx[s]);
      vals.push_back(m.values[s]);
    }
  }
  return triplets_to_canonical_crs(m.n, std::move(rows), std::move(cols),
                                   std::move(vals));
}

}  // namespace spmvtk
