#pragma once

#include "spmvtk/formats.hpp"

namespace spmvtk {

// mu = nnz/n, sigma = population standard deviation of the per-row entry
// counts (divide by n), d_mat = sigma/mu.
struct RowStats {
  double mu = 0.0;
  double sigma = 0.0;
  double d_mat = 0.0;
};

// Single pass with an incremental (Welford) variance update.
// Refuses when the histogram is all zeros (d_mat undefined).
RowStats stats_from_histogram(const RowHistogram& h);

RowStats row_stats(const CrsMatrix& m);

}  // namespace spmvtk
