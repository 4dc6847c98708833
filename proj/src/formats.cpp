#include "spmvtk/formats.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <unordered_set>

#include "spmvtk/error.hpp"

namespace spmvtk {
namespace {

std::string msg(const char* fmt, long long a, long long b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

void check_pointer_array(const std::vector<index_t>& ptr, index_t n,
                         index_t nnz, const char* name,
                         std::vector<std::string>& out) {
  if (static_cast<index_t>(ptr.size()) != n + 1) {
    out.push_back(msg("pointer array length %lld, expected %lld",
                      static_cast<long long>(ptr.size()),
                      static_cast<long long>(n + 1)));
    return;
  }
  if (ptr.front() != 1)
    out.push_back(std::string(name) + "[1] != 1");
  if (ptr.back() != nnz + 1)
    out.push_back(msg("pointer array end %lld, expected nnz+1 = %lld",
                      static_cast<long long>(ptr.back()),
                      static_cast<long long>(nnz + 1)));
  for (std::size_t i = 1; i < ptr.size(); ++i)
    if (ptr[i] < ptr[i - 1]) {
      out.push_back(std::string(name) +
                    msg(" not nondecreasing at position %lld",
                        static_cast<long long>(i + 1)));
      break;
    }
}

void check_index_range(const std::vector<index_t>& idx, index_t n,
                       const char* what, std::vector<std::string>& out) {
  for (std::size_t p = 0; p < idx.size(); ++p)
    if (idx[p] < 1 || idx[p] > n)
      out.push_back(msg((std::string(what) +
                         " index %lld out of range at entry %lld")
                            .c_str(),
                        static_cast<long long>(idx[p]),
                        static_cast<long long>(p + 1)));
}

// distinct indices within each pointer segment
void check_distinct(const std::vector<index_t>& ptr,
                    const std::vector<index_t>& idx, const char* seg,
                    std::vector<std::string>& out) {
  std::unordered_set<index_t> seen;
  for (std::size_t s = 0; s + 1 < ptr.size(); ++s) {
    seen.clear();
    for (index_t p = ptr[s]; p < ptr[s + 1]; ++p) {
      if (p < 1 || p > static_cast<index_t>(idx.size())) break;
      if (!seen.insert(idx[p - 1]).second)
        out.push_back(msg((std::string("duplicate index in ") + seg +
                           " %lld (index %lld)")
                              .c_str(),
                          static_cast<long long>(s + 1),
                          static_cast<long long>(idx[p - 1])));
    }
  }
}

}  // namespace

std::vector<std::string> validate(const CrsMatrix& m) {
  std::vector<std::string> out;
  if (m.n < 0) out.push_back("negative dimension");
  if (m.values.size() != m.col_idx.size())
    out.push_back("values / col_idx length mismatch");
  check_pointer_array(m.row_ptr, m.n, m.nnz(), "row_ptr", out);
  check_index_range(m.col_idx, m.n, "column", out);
  if (out.empty()) check_distinct(m.row_ptr, m.col_idx, "row", out);
  return out;
}

std::vector<std::string> validate(const CcsMatrix& m) {
  std::vector<std::string> out;
  if (m.n < 0) out.push_back("negative dimension");
  if (m.values.size() != m.row_idx.size())
    out.push_back("values / row_idx length mismatch");
  check_pointer_array(m.col_ptr, m.n, m.nnz(), "col_ptr", out);
  check_index_range(m.row_idx, m.n, "row", out);
  if (out.empty()) check_distinct(m.col_ptr, m.row_idx, "column", out);
  return out;
}

std::vector<std::string> validate(const CooMatrix& m) {
  std::vector<std::string> out;
  if (m.n < 0) out.push_back("negative dimension");
  if (m.values.size() != m.row_idx.size() ||
      m.values.size() != m.col_idx.size()) {
    out.push_back("triplet sequences have differing lengths");
    return out;
  }
  check_index_range(m.row_idx, m.n, "row", out);
  check_index_range(m.col_idx, m.n, "column", out);
  if (!out.empty()) return out;
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m.values.size() * 2);
  for (std::size_t p = 0; p < m.values.size(); ++p) {
    std::uint64_t key = static_cast<std::uint64_t>(m.row_idx[p]) << 32 |
                        static_cast<std::uint64_t>(m.col_idx[p]);
    if (!seen.insert(key).second)
      out.push_back(msg("duplicate (row, col) pair (%lld, %lld)",
                        static_cast<long long>(m.row_idx[p]),
                        static_cast<long long>(m.col_idx[p])));
  }
  if (m.ordering == CooOrdering::RowMajor) {
    for (std::size_t p = 1; p < m.row_idx.size(); ++p)
      if (m.row_idx[p] < m.row_idx[p - 1]) {
        out.push_back(msg("row_idx not nondecreasing at entry %lld",
                          static_cast<long long>(p + 1)));
        break;
      }
  } else if (m.ordering == CooOrdering::ColMajor) {
    for (std::size_t p = 1; p < m.col_idx.size(); ++p)
      if (m.col_idx[p] < m.col_idx[p - 1]) {
        out.push_back(msg("col_idx not nondecreasing at entry %lld",
                          static_cast<long long>(p + 1)));
        break;
      }
  }
  return out;
}

std::vector<std::string> validate(const EllMatrix& m) {
  std::vector<std::string> out;
  if (m.n < 0) out.push_back("negative dimension");
  if (m.band_count < 0) out.push_back("negative band count");
  std::size_t slots = static_cast<std::size_t>(m.n * m.band_count);
  if (m.values.size() != slots || m.col_idx.size() != slots) {
    out.push_back("data sequences are not n * band_count long");
    return out;
  }
  if (static_cast<index_t>(m.row_entry_count.size()) != m.n) {
    out.push_back("row_entry_count length mismatch");
    return out;
  }
  check_index_range(m.col_idx, m.n, "column", out);
  index_t total = 0;
  for (index_t i = 1; i <= m.n; ++i) {
    index_t r = m.row_entry_count[static_cast<std::size_t>(i - 1)];
    if (r < 0 || r > m.band_count) {
      out.push_back(msg("row %lld entry count %lld out of range",
                        static_cast<long long>(i), static_cast<long long>(r)));
      continue;
    }
    total += r;
    for (index_t k = r + 1; k <= m.band_count; ++k) {
      std::size_t s = EllMatrix::slot(m.n, k, i);
      if (m.values[s] != 0.0)
        out.push_back(msg("nonzero padding value in row %lld band %lld",
                          static_cast<long long>(i),
                          static_cast<long long>(k)));
      if (m.col_idx[s] != i)
        out.push_back(msg("padding column in row %lld band %lld is not the row index",
                          static_cast<long long>(i),
                          static_cast<long long>(k)));
    }
  }
  if (total != m.stored_nnz)
    out.push_back(msg("stored_nnz %lld inconsistent with row counts (sum %lld)",
                      static_cast<long long>(m.stored_nnz),
                      static_cast<long long>(total)));
  index_t max_r = 0;
  for (index_t r : m.row_entry_count) max_r = std::max(max_r, r);
  if (m.n > 0 && max_r != m.band_count)
    out.push_back(msg("band count %lld is not the max row entry count %lld",
                      static_cast<long long>(m.band_count),
                      static_cast<long long>(max_r)));
  return out;
}

RowHistogram row_histogram(const CrsMatrix& m) {
  RowHistogram h;
  h.counts.resize(static_cast<std::size_t>(m.n));
  for (index_t i = 0; i < m.n; ++i)
    h.counts[static_cast<std::size_t>(i)] =
        m.row_ptr[static_cast<std::size_t>(i + 1)] -
        m.row_ptr[static_cast<std::size_t>(i)];
  return h;
}

DenseMatrix dense_from_crs(const CrsMatrix& m) {
  if (m.n > kDenseOracleCap)
    throw Error(ErrorCode::InvalidArgument,
                "dense oracle capped at n = " + std::to_string(kDenseOracleCap));
  DenseMatrix d;
  d.n = m.n;
  d.entries.assign(static_cast<std::size_t>(m.n) * m.n, 0.0);
  for (index_t i = 1; i <= m.n; ++i)
    for (index_t p = m.row_ptr[i - 1]; p < m.row_ptr[i]; ++p)
      d.at(i, m.col_idx[p - 1]) = m.values[p - 1];
  return d;
}

CrsMatrix crs_from_dense(const DenseMatrix& d, double drop_tol) {
  if (d.n > kDenseOracleCap)
    throw Error(ErrorCode::InvalidArgument,
                "dense oracle capped at n = " + std::to_string(kDenseOracleCap));
  CrsMatrix m;
  m.n = d.n;
  m.row_ptr.reserve(static_cast<std::size_t>(d.n) + 1);
  m.row_ptr.push_back(1);
  for (index_t i = 1; i <= d.n; ++i) {
    for (index_t j = 1; j <= d.n; ++j) {
      double v = d.at(i, j);
      if (std::abs(v) > drop_tol) {
        m.values.push_back(v);
        m.col_idx.push_back(j);
      }
    }
    m.row_ptr.push_back(m.nnz() + 1);
  }
  return m;
}

CrsMatrix canonicalize(const CrsMatrix& m) {
  CrsMatrix out = m;
  std::vector<std::size_t> perm;
  for (index_t i = 1; i <= m.n; ++i) {
    index_t lo = m.row_ptr[i - 1] - 1, hi = m.row_ptr[i] - 1;
    perm.resize(static_cast<std::size_t>(hi - lo));
    std::iota(perm.begin(), perm.end(), static_cast<std::size_t>(lo));
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      return m.col_idx[a] < m.col_idx[b];
    });
    for (std::size_t k = 0; k < perm.size(); ++k) {
      out.col_idx[static_cast<std::size_t>(lo) + k] = m.col_idx[perm[k]];
      out.values[static_cast<std::size_t>(lo) + k] = m.values[perm[k]];
    }
  }
  return out;
}

bool structurally_equal(const CrsMatrix& a, const CrsMatrix& b) {
  return a.n == b.n && a.row_ptr == b.row_ptr && a.col_idx == b.col_idx &&
         a.values == b.values;
}

}  // namespace spmvtk
