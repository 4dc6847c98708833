/* spmvtk C API: opaque handles over the sparse-format toolkit.
 *
 * Every function returns a status code; on failure spmvtk_last_error()
 * describes the most recent error on the calling thread.  Handles are
 * created by the library and released with the matching _free call.
 */
#ifndef SPMVTK_H
#define SPMVTK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spmvtk_status {
  SPMVTK_OK = 0,
  SPMVTK_ERR_USAGE = 1,        /* bad arguments / contract violation */
  SPMVTK_ERR_DATA = 2,         /* invalid data, parse or I/O failure */
  SPMVTK_ERR_CHECK = 3,        /* a requested verification failed */
  SPMVTK_ERR_MEMORY_LIMIT = 4, /* ELL footprint guard tripped */
} spmvtk_status;

typedef struct spmvtk_matrix spmvtk_matrix;
typedef struct spmvtk_profile spmvtk_profile;

typedef enum spmvtk_format {
  SPMVTK_FORMAT_CRS = 0,
  SPMVTK_FORMAT_CCS = 1,
  SPMVTK_FORMAT_COO_ROW = 2,
  SPMVTK_FORMAT_COO_COL = 3,
  SPMVTK_FORMAT_ELL = 4,
} spmvtk_format;

typedef enum spmvtk_kernel {
  SPMVTK_KERNEL_CRS = 0,
  SPMVTK_KERNEL_COO_ROW_OUTER = 1,
  SPMVTK_KERNEL_COO_COL_OUTER = 2,
  SPMVTK_KERNEL_ELL_INNER = 3,
  SPMVTK_KERNEL_ELL_OUTER = 4,
} spmvtk_kernel;

typedef enum spmvtk_decision {
  SPMVTK_USE_ELL = 0,
  SPMVTK_USE_CRS = 1,
} spmvtk_decision;

/* Message for the last error on this thread; empty string if none. */
const char* spmvtk_last_error(void);

void spmvtk_matrix_free(spmvtk_matrix* m);
void spmvtk_profile_free(spmvtk_profile* p);

/* ---- ingestion and generators (all produce CRS handles) ---- */

spmvtk_status spmvtk_read_matrix_market(const char* path, spmvtk_matrix** out);
spmvtk_status spmvtk_write_matrix_market(const spmvtk_matrix* m,
                                         const char* path);

spmvtk_status spmvtk_gen_banded(int64_t n, int64_t half_width,
                                spmvtk_matrix** out);
spmvtk_status spmvtk_gen_skewed(int64_t n, int64_t base_deg,
                                int64_t heavy_rows, int64_t heavy_deg,
                                uint64_t seed, spmvtk_matrix** out);
spmvtk_status spmvtk_gen_cv_target(int64_t n, double mean_deg,
                                   double target_dmat, uint64_t seed,
                                   spmvtk_matrix** out);

/* ---- inspection ---- */

typedef struct spmvtk_matrix_info {
  int64_t n;
  int64_t nnz;
  int64_t max_row_entries;
  double mu;
  double sigma;
  double d_mat;
  uint64_t ell_bytes; /* estimate at the stored value/index widths */
} spmvtk_matrix_info;

spmvtk_format spmvtk_matrix_get_format(const spmvtk_matrix* m);

/* Statistics require a CRS handle with nnz >= 1 (except n/nnz, always set). */
spmvtk_status spmvtk_matrix_get_info(const spmvtk_matrix* m,
                                     spmvtk_matrix_info* out);

/* ---- conversion ---- */

/* max_bytes caps the ELL footprint; 0 means unlimited. */
spmvtk_status spmvtk_matrix_convert(const spmvtk_matrix* m, spmvtk_format to,
                                    uint64_t max_bytes, spmvtk_matrix** out);

/* ---- kernels ---- */

/* The handle's format must match the kernel.  y has length n and is
 * overwritten.  elapsed_seconds may be NULL. */
spmvtk_status spmvtk_spmv(const spmvtk_matrix* m, spmvtk_kernel kernel,
                          const double* x, int64_t len, int lanes, double* y,
                          double* elapsed_seconds);

/* ---- benchmarking and profiles ---- */

typedef struct spmvtk_bench_result {
  double t_crs;
  double t_ell;
  double t_trans;
  double sp;
  double tt;
  double r;
} spmvtk_bench_result;

/* Measures the triple (t_crs, t_trans, t_ell) on a CRS handle and derives
 * the cost metrics.  Returns SPMVTK_ERR_MEMORY_LIMIT when the ELL guard
 * refuses the transformation. */
spmvtk_status spmvtk_bench(const spmvtk_matrix* m, spmvtk_kernel variant,
                           int lanes, int repeats, uint64_t max_bytes,
                           spmvtk_bench_result* out);

spmvtk_status spmvtk_profile_build(const spmvtk_matrix* const* matrices,
                                   const char* const* ids, size_t count,
                                   spmvtk_kernel variant, int lanes, double c,
                                   int repeats, uint64_t max_bytes,
                                   const char* machine_label,
                                   spmvtk_profile** out);

spmvtk_status spmvtk_profile_write(const spmvtk_profile* p, const char* path);
spmvtk_status spmvtk_profile_read(const char* path, spmvtk_profile** out);

double spmvtk_profile_d_star(const spmvtk_profile* p);
double spmvtk_profile_c(const spmvtk_profile* p);
int spmvtk_profile_lanes(const spmvtk_profile* p);
spmvtk_kernel spmvtk_profile_kernel(const spmvtk_profile* p);
size_t spmvtk_profile_record_count(const spmvtk_profile* p);

typedef struct spmvtk_record_view {
  const char* matrix_id; /* borrowed from the profile handle */
  int64_t n;
  int64_t nnz;
  double mu;
  double sigma;
  double d_mat;
  int excluded;
  const char* exclusion_reason; /* NULL when not excluded */
  /* NaN when the record is excluded */
  double t_crs;
  double t_ell;
  double t_trans;
  double sp;
  double tt;
  double r;
} spmvtk_record_view;

spmvtk_status spmvtk_profile_record(const spmvtk_profile* p, size_t index,
                                    spmvtk_record_view* out);

/* ---- on-line decision ---- */

spmvtk_status spmvtk_select(const spmvtk_matrix* m, const spmvtk_profile* p,
                            spmvtk_decision* decision, double* d_mat);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPMVTK_H */
