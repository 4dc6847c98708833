#include "spmvtk/stats.hpp"

#include <cmath>

#include "spmvtk/error.hpp"

namespace spmvtk {

RowStats stats_from_histogram(const RowHistogram& h) {
  if (h.counts.empty())
    throw Error(ErrorCode::InvalidArgument, "empty histogram");
  // Welford's incremental update; population variance (divide by n).
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (index_t c : h.counts) {
    ++k;
    double delta = static_cast<double>(c) - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (static_cast<double>(c) - mean);
  }
  if (mean == 0.0)
    throw Error(ErrorCode::InvalidArgument,
                "row statistics undefined for an empty matrix (mu = 0)");
  RowStats s;
  s.mu = mean;
  s.sigma = std::sqrt(m2 / static_cast<double>(k));
  s.d_mat = s.sigma / s.mu;
  return s;
}

RowStats row_stats(const CrsMatrix& m) {
  if (m.nnz() == 0)
    throw Error(ErrorCode::InvalidArgument,
                "row statistics undefined for an empty matrix (mu = 0)");
  return stats_from_histogram(row_histogram(m));
}

}  // namespace spmvtk
