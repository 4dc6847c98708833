#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace spmvtk {

using index_t = std::int64_t;

// All index data is 1-based, matching the Matrix Market convention.
// Vector subscripts are 0-based as usual, so the entries of row i of a
// CrsMatrix live at vector positions row_ptr[i-1]-1 .. row_ptr[i]-2.

struct CrsMatrix {
  index_t n = 0;
  std::vector<double> values;
  std::vector<index_t> col_idx;  // length nnz, entries in [1, n]
  std::vector<index_t> row_ptr;  // length n+1, row_ptr[0] == 1

  index_t nnz() const { return static_cast<index_t>(values.size()); }
};

struct CcsMatrix {
  index_t n = 0;
  std::vector<double> values;
  std::vector<index_t> row_idx;  // length nnz, entries in [1, n]
  std::vector<index_t> col_ptr;  // length n+1, col_ptr[0] == 1

  index_t nnz() const { return static_cast<index_t>(values.size()); }
};

enum class CooOrdering { RowMajor, ColMajor, Unordered };

struct CooMatrix {
  index_t n = 0;
  std::vector<double> values;
  std::vector<index_t> row_idx;
  std::vector<index_t> col_idx;
  CooOrdering ordering = CooOrdering::Unordered;

  index_t nnz() const { return static_cast<index_t>(values.size()); }
};

// Band-major padded storage: the slot for band k (1..band_count) of row i
// (1..n) is at linear offset n*(k-1) + (i-1).  Padding slots hold value 0.0
// and their own row index as column, so an unconditional multiply-add over
// every slot stays in range and contributes nothing.
struct EllMatrix {
  index_t n = 0;
  index_t band_count = 0;  // max entries in any source row
  std::vector<double> values;
  std::vector<index_t> col_idx;
  std::vector<index_t> row_entry_count;  // length n, real entries per row
  index_t stored_nnz = 0;

  static std::size_t slot(index_t n, index_t band, index_t row) {
    return static_cast<std::size_t>(n * (band - 1) + (row - 1));
  }
};

// Test oracle only; capped at kDenseOracleCap rows.
struct DenseMatrix {
  index_t n = 0;
  std::vector<double> entries;  // row-major n*n

  double& at(index_t i, index_t j) {
    return entries[static_cast<std::size_t>((i - 1) * n + (j - 1))];
  }
  double at(index_t i, index_t j) const {
    return entries[static_cast<std::size_t>((i - 1) * n + (j - 1))];
  }
};

struct RowHistogram {
  std::vector<index_t> counts;  // counts[i-1] = entries stored in row i
};

// Each overload reports every violated invariant with its location; an empty
// list means the matrix is valid.  Violations are data, not failures.
std::vector<std::string> validate(const CrsMatrix& m);
std::vector<std::string> validate(const CcsMatrix& m);
std::vector<std::string> validate(const CooMatrix& m);
std::vector<std::string> validate(const EllMatrix& m);

RowHistogram row_histogram(const CrsMatrix& m);

inline constexpr index_t kDenseOracleCap = 4096;

DenseMatrix dense_from_crs(const CrsMatrix& m);
CrsMatrix crs_from_dense(const DenseMatrix& d, double drop_tol = 0.0);

// Sorts columns ascending within each row; entry multiset is unchanged.
CrsMatrix canonicalize(const CrsMatrix& m);

bool structurally_equal(const CrsMatrix& a, const CrsMatrix& b);

}  // namespace spmvtk
