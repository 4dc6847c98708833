#pragma once

#include <span>
#include <vector>

#include "spmvtk/formats.hpp"

namespace spmvtk {

// Contiguous near-equal chunks of a 1-based work range.  An empty lane is
// stored as istart == iend + 1.
struct ThreadPartition {
  int lanes = 0;
  index_t range_len = 0;
  std::vector<index_t> istart;  // 1-based inclusive
  std::vector<index_t> iend;    // inclusive
};

ThreadPartition partition_range(index_t range_len, int lanes);

// Per-lane scratch vectors; lane k writes only its own column.
struct PartialResults {
  index_t n = 0;
  int lanes = 0;
  std::vector<double> yy;  // lane-major, lanes * n

  double& at(index_t i, int lane) {
    return yy[static_cast<std::size_t>(lane) * n + (i - 1)];
  }
  double at(index_t i, int lane) const {
    return yy[static_cast<std::size_t>(lane) * n + (i - 1)];
  }
};

// Serial, lanes summed in ascending order.
std::vector<double> reduce_partials(const PartialResults& pr);

// Sequential row-wise dot products; the timing baseline.
std::vector<double> spmv_crs(const CrsMatrix& m, std::span<const double> x);

std::vector<double> spmv_coo_col_outer(const CooMatrix& m,
                                       std::span<const double> x, int lanes);
std::vector<double> spmv_coo_row_outer(const CooMatrix& m,
                                       std::span<const double> x, int lanes);

// Bands run serially; the row loop of each band is split across lanes.
// No reduction buffer.
std::vector<double> spmv_ell_inner(const EllMatrix& m,
                                   std::span<const double> x, int lanes);

// Bands are partitioned across lanes; parallelism is bounded by band_count.
std::vector<double> spmv_ell_outer(const EllMatrix& m,
                                   std::span<const double> x, int lanes);

}  // namespace spmvtk
