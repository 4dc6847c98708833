#include "spmvtk/spmv.hpp"

#include <string>
#include <thread>
#include <vector>

#include "spmvtk/error.hpp"

namespace spmvtk {
namespace {

void require_dim(index_t n, std::size_t x_len) {
  if (static_cast<index_t>(x_len) != n)
    throw Error(ErrorCode::InvalidArgument,
                "vector length " + std::to_string(x_len) +
                    " does not match matrix dimension " + std::to_string(n));
}

// Runs body(lane) for lanes 0..lanes-1; lane 0 stays on the calling thread,
// and lanes == 1 spawns no worker at all.
template <typename Body>
void run_lanes(int lanes, Body&& body) {
  if (lanes == 1) {
    body(0);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(lanes) - 1);
  for (int k = 1; k < lanes; ++k) workers.emplace_back(body, k);
  body(0);
  for (auto& w : workers) w.join();
}

}  // namespace

ThreadPartition partition_range(index_t range_len, int lanes) {
  if (lanes < 1)
    throw Error(ErrorCode::InvalidArgument, "lane count must be at least 1");
  ThreadPartition p;
  p.lanes = lanes;
  p.range_len = range_len;
  p.istart.resize(static_cast<std::size_t>(lanes));
  p.iend.resize(static_cast<std::size_t>(lanes));
  index_t base = range_len / lanes;
  index_t rem = range_len % lanes;
  index_t pos = 1;
  for (int k = 0; k < lanes; ++k) {
    index_t size = base + (k < rem ? 1 : 0);
    p.istart[static_cast<std::size_t>(k)] = pos;
    p.iend[static_cast<std::size_t>(k)] = pos + size - 1;
    pos += size;
  }
  return p;
}

std::vector<double> reduce_partials(const PartialResults& pr) {
  std::vector<double> y(static_cast<std::size_t>(pr.n), 0.0);
  for (int k = 0; k < pr.lanes; ++k)
    for (index_t i = 1; i <= pr.n; ++i)
      y[static_cast<std::size_t>(i - 1)] += pr.at(i, k);
  return y;
}

std::vector<double> spmv_crs(const CrsMatrix& m, std::span<const double> x) {
  require_dim(m.n, x.size());
  std::vector<double> y(static_cast<std::size_t>(m.n), 0.0);
  for (index_t i = 1; i <= m.n; ++i) {
    double acc = 0.0;
    for (index_t p = m.row_ptr[i - 1]; p < m.row_ptr[i]; ++p)
      acc += m.values[static_cast<std::size_t>(p - 1)] *
             x[static_cast<std::size_t>(m.col_idx[p - 1] - 1)];
    y[static_cast<std::size_t>(i - 1)] = acc;
  }
  return y;
}

namespace {

std::vector<double> spmv_coo_outer(const CooMatrix& m,
                                   std::span<const double> x, int lanes,
                                   CooOrdering required, const char* name) {
  if (m.ordering != required)
    throw Error(ErrorCode::InvalidArgument,
                std::string(name) + " requires the matching COO ordering");
  require_dim(m.n, x.size());
  ThreadPartition part = partition_range(m.nnz(), lanes);
  PartialResults pr;
  pr.n = m.n;
  pr.lanes = lanes;
  pr.yy.assign(static_cast<std::size_t>(lanes) * m.n, 0.0);
  run_lanes(lanes, [&](int k) {
    for (index_t p = part.istart[static_cast<std::size_t>(k)];
         p <= part.iend[static_cast<std::size_t>(k)]; ++p) {
      index_t i = m.row_idx[static_cast<std::size_t>(p - 1)];
      index_t j = m.col_idx[static_cast<std::size_t>(p - 1)];
      pr.at(i, k) += m.values[static_cast<std::size_t>(p - 1)] *
                     x[static_cast<std::size_t>(j - 1)];
    }
  });
  return reduce_partials(pr);
}

}  // namespace

std::vector<double> spmv_coo_col_outer(const CooMatrix& m,
                                       std::span<const double> x, int lanes) {
  return spmv_coo_outer(m, x, lanes, CooOrdering::ColMajor,
                        "spmv_coo_col_outer");
}

std::vector<double> spmv_coo_row_outer(const CooMatrix& m,
                                       std::span<const double> x, int lanes) {
  return spmv_coo_outer(m, x, lanes, CooOrdering::RowMajor,
                        "spmv_coo_row_outer");
}

std::vector<double> spmv_ell_inner(const EllMatrix& m,
                                   std::span<const double> x, int lanes) {
  require_dim(m.n, x.size());
  if (lanes < 1)
    throw Error(ErrorCode::InvalidArgument, "lane count must be at least 1");
  std::vector<double> y(static_cast<std::size_t>(m.n), 0.0);
  ThreadPartition part = partition_range(m.n, lanes);
  for (index_t band = 1; band <= m.band_count; ++band) {
    index_t base = m.n * (band - 1);
    run_lanes(lanes, [&](int k) {
      for (index_t i = part.istart[static_cast<std::size_t>(k)];
           i <= part.iend[static_cast<std::size_t>(k)]; ++i) {
        std::size_t s = static_cast<std::size_t>(base + i - 1);
        y[static_cast<std::size_t>(i - 1)] +=
            m.values[s] * x[static_cast<std::size_t>(m.col_idx[s] - 1)];
      }
    });
  }
  return y;
}

std::vector<double> spmv_ell_outer(const EllMatrix& m,
                                   std::span<const double> x, int lanes) {
  require_dim(m.n, x.size());
  ThreadPartition part = partition_range(m.band_count, lanes);
  PartialResults pr;
  pr.n = m.n;
  pr.lanes = lanes;
  pr.yy.assign(static_cast<std::size_t>(lanes) * m.n, 0.0);
  run_lanes(lanes, [&](int k) {
    for (index_t band = part.istart[static_cast<std::size_t>(k)];
         band <= part.iend[static_cast<std::size_t>(k)]; ++band) {
      index_t base = m.n * (band - 1);
      for (index_t i = 1; i <= m.n; ++i) {
        std::size_t s = static_cast<std::size_t>(base + i - 1);
        pr.at(i, k) +=
            m.values[s] * x[static_cast<std::size_t>(m.col_idx[s] - 1)];
      }
    }
  });
  return reduce_partials(pr);
}

}  // namespace spmvtk
