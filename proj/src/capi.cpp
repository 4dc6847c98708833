#include "spmvtk/spmvtk.h"

#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spmvtk/autotune.hpp"
#include "spmvtk/convert.hpp"
#include "spmvtk/error.hpp"
#include "spmvtk/formats.hpp"
#include "spmvtk/ingest.hpp"
#include "spmvtk/spmv.hpp"
#include "spmvtk/stats.hpp"

using namespace spmvtk;

struct spmvtk_matrix {
  std::variant<CrsMatrix, CcsMatrix, CooMatrix, EllMatrix> data;
};

struct spmvtk_profile {
  Profile profile;
};

namespace {

thread_local std::string g_last_error;

spmvtk_status status_from(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidArgument:
      return SPMVTK_ERR_USAGE;
    case ErrorCode::MemoryLimit:
      return SPMVTK_ERR_MEMORY_LIMIT;
    case ErrorCode::Validation:
    case ErrorCode::Io:
    case ErrorCode::Parse:
      return SPMVTK_ERR_DATA;
  }
  return SPMVTK_ERR_DATA;
}

template <typename Fn>
spmvtk_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SPMVTK_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_from(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPMVTK_ERR_DATA;
  }
}

const CrsMatrix& require_crs(const spmvtk_matrix* m) {
  if (!m) throw Error(ErrorCode::InvalidArgument, "null matrix handle");
  if (auto* crs = std::get_if<CrsMatrix>(&m->data)) return *crs;
  throw Error(ErrorCode::InvalidArgument, "operation requires a CRS handle");
}

Kernel kernel_from_c(spmvtk_kernel k) {
  switch (k) {
    case SPMVTK_KERNEL_CRS: return Kernel::Crs;
    case SPMVTK_KERNEL_COO_ROW_OUTER: return Kernel::CooRowOuter;
    case SPMVTK_KERNEL_COO_COL_OUTER: return Kernel::CooColOuter;
    case SPMVTK_KERNEL_ELL_INNER: return Kernel::EllInner;
    case SPMVTK_KERNEL_ELL_OUTER: return Kernel::EllOuter;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown kernel id");
}

spmvtk_kernel kernel_to_c(Kernel k) {
  switch (k) {
    case Kernel::Crs: return SPMVTK_KERNEL_CRS;
    case Kernel::CooRowOuter: return SPMVTK_KERNEL_COO_ROW_OUTER;
    case Kernel::CooColOuter: return SPMVTK_KERNEL_COO_COL_OUTER;
    case Kernel::EllInner: return SPMVTK_KERNEL_ELL_INNER;
    case Kernel::EllOuter: return SPMVTK_KERNEL_ELL_OUTER;
  }
  return SPMVTK_KERNEL_CRS;
}

void set_out(spmvtk_matrix** out,
             std::variant<CrsMatrix, CcsMatrix, CooMatrix, EllMatrix>&& data) {
  *out = new spmvtk_matrix{std::move(data)};
}

}  // namespace

extern "C" {

const char* spmvtk_last_error(void) { return g_last_error.c_str(); }

void spmvtk_matrix_free(spmvtk_matrix* m) { delete m; }
void spmvtk_profile_free(spmvtk_profile* p) { delete p; }

spmvtk_status spmvtk_read_matrix_market(const char* path, spmvtk_matrix** out) {
  return guarded([&] {
    if (!path || !out)
      throw Error(ErrorCode::InvalidArgument, "null argument");
    set_out(out, read_matrix_market(path));
  });
}

spmvtk_status spmvtk_write_matrix_market(const spmvtk_matrix* m,
                                         const char* path) {
  return guarded([&] {
    if (!m || !path)
      throw Error(ErrorCode::InvalidArgument, "null argument");
    // non-CRS handles are written through their CRS reconstruction
    if (auto* crs = std::get_if<CrsMatrix>(&m->data)) {
      write_matrix_market(*crs, path);
    } else if (auto* coo = std::get_if<CooMatrix>(&m->data)) {
      write_matrix_market(coo_to_crs(*coo), path);
    } else if (auto* ell = std::get_if<EllMatrix>(&m->data)) {
      write_matrix_market(ell_to_crs(*ell), path);
    } else if (auto* ccs = std::get_if<CcsMatrix>(&m->data)) {
      CooMatrix coo_col = ccs_to_coo_col(*ccs);
      write_matrix_market(coo_to_crs(coo_col), path);
    }
  });
}

spmvtk_status spmvtk_gen_banded(int64_t n, int64_t half_width,
                                spmvtk_matrix** out) {
  return guarded([&] {
    if (!out) throw Error(ErrorCode::InvalidArgument, "null output");
    set_out(out, gen_banded(n, half_width));
  });
}

spmvtk_status spmvtk_gen_skewed(int64_t n, int64_t base_deg,
                                int64_t heavy_rows, int64_t heavy_deg,
                                uint64_t seed, spmvtk_matrix** out) {
  return guarded([&] {
    if (!out) throw Error(ErrorCode::InvalidArgument, "null output");
    set_out(out, gen_skewed(n, base_deg, heavy_rows, heavy_deg, seed));
  });
}

spmvtk_status spmvtk_gen_cv_target(int64_t n, double mean_deg,
                                   double target_dmat, uint64_t seed,
                                   spmvtk_matrix** out) {
  return guarded([&] {
    if (!out) throw Error(ErrorCode::InvalidArgument, "null output");
    set_out(out, gen_cv_target(n, mean_deg, target_dmat, seed));
  });
}

spmvtk_format spmvtk_matrix_get_format(const spmvtk_matrix* m) {
  if (!m) return SPMVTK_FORMAT_CRS;
  if (std::holds_alternative<CcsMatrix>(m->data)) return SPMVTK_FORMAT_CCS;
  if (std::holds_alternative<EllMatrix>(m->data)) return SPMVTK_FORMAT_ELL;
  if (auto* coo = std::get_if<CooMatrix>(&m->data))
    return coo->ordering == CooOrdering::ColMajor ? SPMVTK_FORMAT_COO_COL
                                                  : SPMVTK_FORMAT_COO_ROW;
  return SPMVTK_FORMAT_CRS;
}

spmvtk_status spmvtk_matrix_get_info(const spmvtk_matrix* m,
                                     spmvtk_matrix_info* out) {
  return guarded([&] {
    if (!out) throw Error(ErrorCode::InvalidArgument, "null output");
    const CrsMatrix& crs = require_crs(m);
    out->n = crs.n;
    out->nnz = crs.nnz();
    index_t max_row = 0;
    for (index_t i = 1; i <= crs.n; ++i)
      max_row = std::max(max_row, crs.row_ptr[i] - crs.row_ptr[i - 1]);
    out->max_row_entries = max_row;
    out->ell_bytes = estimate_ell_bytes(crs);
    RowStats s = row_stats(crs);
    out->mu = s.mu;
    out->sigma = s.sigma;
    out->d_mat = s.d_mat;
  });
}

spmvtk_status spmvtk_matrix_convert(const spmvtk_matrix* m, spmvtk_format to,
                                    uint64_t max_bytes, spmvtk_matrix** out) {
  return guarded([&] {
    if (!out) throw Error(ErrorCode::InvalidArgument, "null output");
    const CrsMatrix& crs = require_crs(m);
    switch (to) {
      case SPMVTK_FORMAT_CRS:
        set_out(out, CrsMatrix(crs));
        return;
      case SPMVTK_FORMAT_CCS:
        set_out(out, crs_to_ccs(crs));
        return;
      case SPMVTK_FORMAT_COO_ROW:
        set_out(out, crs_to_coo_row(crs));
        return;
      case SPMVTK_FORMAT_COO_COL:
        set_out(out, crs_to_coo_col(crs));
        return;
      case SPMVTK_FORMAT_ELL:
        set_out(out, crs_to_ell(crs, max_bytes));
        return;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown target format");
  });
}

spmvtk_status spmvtk_spmv(const spmvtk_matrix* m, spmvtk_kernel kernel,
                          const double* x, int64_t len, int lanes, double* y,
                          double* elapsed_seconds) {
  return guarded([&] {
    if (!m || !x || !y)
      throw Error(ErrorCode::InvalidArgument, "null argument");
    std::span<const double> xs(x, static_cast<std::size_t>(len));
    Kernel k = kernel_from_c(kernel);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> result;
    switch (k) {
      case Kernel::Crs:
        result = spmv_crs(require_crs(m), xs);
        break;
      case Kernel::CooRowOuter:
        if (!std::holds_alternative<CooMatrix>(m->data))
          throw Error(ErrorCode::InvalidArgument,
                      "kernel requires a row-major COO handle");
        result = spmv_coo_row_outer(std::get<CooMatrix>(m->data), xs, lanes);
        break;
      case Kernel::CooColOuter:
        if (!std::holds_alternative<CooMatrix>(m->data))
          throw Error(ErrorCode::InvalidArgument,
                      "kernel requires a column-major COO handle");
        result = spmv_coo_col_outer(std::get<CooMatrix>(m->data), xs, lanes);
        break;
      case Kernel::EllInner:
        if (!std::holds_alternative<EllMatrix>(m->data))
          throw Error(ErrorCode::InvalidArgument,
                      "kernel requires an ELL handle");
        result = spmv_ell_inner(std::get<EllMatrix>(m->data), xs, lanes);
        break;
      case Kernel::EllOuter:
        if (!std::holds_alternative<EllMatrix>(m->data))
          throw Error(ErrorCode::InvalidArgument,
                      "kernel requires an ELL handle");
        result = spmv_ell_outer(std::get<EllMatrix>(m->data), xs, lanes);
        break;
    }
    auto t1 = std::chrono::steady_clock::now();
    std::memcpy(y, result.data(), result.size() * sizeof(double));
    if (elapsed_seconds)
      *elapsed_seconds = std::chrono::duration<double>(t1 - t0).count();
  });
}

spmvtk_status spmvtk_bench(const spmvtk_matrix* m, spmvtk_kernel variant,
                           int lanes, int repeats, uint64_t max_bytes,
                           spmvtk_bench_result* out) {
  return guarded([&] {
    if (!out) throw Error(ErrorCode::InvalidArgument, "null output");
    const CrsMatrix& crs = require_crs(m);
    Kernel k = kernel_from_c(variant);
    std::vector<double> x(static_cast<std::size_t>(crs.n), 1.0);
    Timings t;
    t.t_crs = measure_spmv(Kernel::Crs, &crs, x, 1, repeats);
    switch (k) {
      case Kernel::EllInner:
      case Kernel::EllOuter: {
        auto [ell, t_trans] = measure_transformation(crs, max_bytes);
        t.t_trans = t_trans;
        t.t_ell = measure_spmv(k, &ell, x, lanes, repeats);
        break;
      }
      case Kernel::CooRowOuter: {
        auto t0 = std::chrono::steady_clock::now();
        CooMatrix coo = crs_to_coo_row(crs);
        auto t1 = std::chrono::steady_clock::now();
        t.t_trans = std::chrono::duration<double>(t1 - t0).count();
        t.t_ell = measure_spmv(k, &coo, x, lanes, repeats);
        break;
      }
      case Kernel::CooColOuter: {
        auto t0 = std::chrono::steady_clock::now();
        CooMatrix coo = crs_to_coo_col(crs);
        auto t1 = std::chrono::steady_clock::now();
        t.t_trans = std::chrono::duration<double>(t1 - t0).count();
        t.t_ell = measure_spmv(k, &coo, x, lanes, repeats);
        break;
      }
      case Kernel::Crs:
        throw Error(ErrorCode::InvalidArgument,
                    "bench variant must be a transformed-format kernel");
    }
    CostMetrics cm = compute_metrics(t);
    out->t_crs = t.t_crs;
    out->t_ell = t.t_ell;
    out->t_trans = t.t_trans;
    out->sp = cm.sp;
    out->tt = cm.tt;
    out->r = cm.r;
  });
}

spmvtk_status spmvtk_profile_build(const spmvtk_matrix* const* matrices,
                                   const char* const* ids, size_t count,
                                   spmvtk_kernel variant, int lanes, double c,
                                   int repeats, uint64_t max_bytes,
                                   const char* machine_label,
                                   spmvtk_profile** out) {
  return guarded([&] {
    if (!matrices || !ids || !out)
      throw Error(ErrorCode::InvalidArgument, "null argument");
    std::vector<std::pair<std::string, const CrsMatrix*>> set;
    set.reserve(count);
    for (size_t i = 0; i < count; ++i)
      set.emplace_back(ids[i] ? ids[i] : "", &require_crs(matrices[i]));
    ProfileOptions opts;
    opts.machine_label = machine_label ? machine_label : "";
    opts.kernel_variant = kernel_from_c(variant);
    opts.lanes = lanes;
    opts.c = c;
    opts.repeats = repeats;
    opts.max_bytes = max_bytes;
    *out = new spmvtk_profile{offline_profile(set, opts)};
  });
}

spmvtk_status spmvtk_profile_write(const spmvtk_profile* p, const char* path) {
  return guarded([&] {
    if (!p || !path) throw Error(ErrorCode::InvalidArgument, "null argument");
    write_profile(p->profile, path);
  });
}

spmvtk_status spmvtk_profile_read(const char* path, spmvtk_profile** out) {
  return guarded([&] {
    if (!path || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out = new spmvtk_profile{read_profile(path)};
  });
}

double spmvtk_profile_d_star(const spmvtk_profile* p) {
  return p ? p->profile.d_star : 0.0;
}

double spmvtk_profile_c(const spmvtk_profile* p) {
  return p ? p->profile.c : 0.0;
}

int spmvtk_profile_lanes(const spmvtk_profile* p) {
  return p ? p->profile.lanes : 0;
}

spmvtk_kernel spmvtk_profile_kernel(const spmvtk_profile* p) {
  return p ? kernel_to_c(p->profile.kernel_variant) : SPMVTK_KERNEL_CRS;
}

size_t spmvtk_profile_record_count(const spmvtk_profile* p) {
  return p ? p->profile.records.size() : 0;
}

spmvtk_status spmvtk_profile_record(const spmvtk_profile* p, size_t index,
                                    spmvtk_record_view* out) {
  return guarded([&] {
    if (!p || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    if (index >= p->profile.records.size())
      throw Error(ErrorCode::InvalidArgument, "record index out of range");
    const BenchRecord& r = p->profile.records[index];
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    out->matrix_id = r.matrix_id.c_str();
    out->n = r.n;
    out->nnz = r.nnz;
    out->mu = r.stats.mu;
    out->sigma = r.stats.sigma;
    out->d_mat = r.stats.d_mat;
    out->excluded = r.excluded ? 1 : 0;
    out->exclusion_reason =
        r.exclusion_reason ? r.exclusion_reason->c_str() : nullptr;
    out->t_crs = r.timings ? r.timings->t_crs : nan;
    out->t_ell = r.timings ? r.timings->t_ell : nan;
    out->t_trans = r.timings ? r.timings->t_trans : nan;
    out->sp = r.metrics ? r.metrics->sp : nan;
    out->tt = r.metrics ? r.metrics->tt : nan;
    out->r = r.metrics ? r.metrics->r : nan;
  });
}

spmvtk_status spmvtk_select(const spmvtk_matrix* m, const spmvtk_profile* p,
                            spmvtk_decision* decision, double* d_mat) {
  return guarded([&] {
    if (!p || !decision)
      throw Error(ErrorCode::InvalidArgument, "null argument");
    Selection s = online_select(require_crs(m), p->profile);
    *decision =
        s.decision == Decision::UseEll ? SPMVTK_USE_ELL : SPMVTK_USE_CRS;
    if (d_mat) *d_mat = s.d_mat;
  });
}

}  // extern "C"
