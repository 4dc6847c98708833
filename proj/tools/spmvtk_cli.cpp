// spmvtk command-line front end.  Talks to the library exclusively through
// the C API in spmvtk/spmvtk.h.
//
// Exit statuses: 0 success, 1 usage error, 2 data/validation error,
// 3 check failure.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spmvtk/spmvtk.h"

namespace fs = std::filesystem;

namespace {

constexpr uint64_t kDefaultEllCapBytes = 2ull << 30;  // 2 GiB

struct MatrixDeleter {
  void operator()(spmvtk_matrix* m) const { spmvtk_matrix_free(m); }
};
struct ProfileDeleter {
  void operator()(spmvtk_profile* p) const { spmvtk_profile_free(p); }
};
using MatrixHandle = std::unique_ptr<spmvtk_matrix, MatrixDeleter>;
using ProfileHandle = std::unique_ptr<spmvtk_profile, ProfileDeleter>;

int exit_code(spmvtk_status st) {
  switch (st) {
    case SPMVTK_OK: return 0;
    case SPMVTK_ERR_USAGE: return 1;
    case SPMVTK_ERR_CHECK: return 3;
    default: return 2;
  }
}

[[noreturn]] void fail(spmvtk_status st) {
  std::fprintf(stderr, "error: %s\n", spmvtk_last_error());
  std::exit(exit_code(st));
}

void check(spmvtk_status st) {
  if (st != SPMVTK_OK) fail(st);
}

MatrixHandle load_matrix(const std::string& path) {
  spmvtk_matrix* m = nullptr;
  check(spmvtk_read_matrix_market(path.c_str(), &m));
  return MatrixHandle(m);
}

spmvtk_kernel parse_kernel(const std::string& name) {
  if (name == "crs") return SPMVTK_KERNEL_CRS;
  if (name == "coo-row") return SPMVTK_KERNEL_COO_ROW_OUTER;
  if (name == "coo-col") return SPMVTK_KERNEL_COO_COL_OUTER;
  if (name == "ell-inner") return SPMVTK_KERNEL_ELL_INNER;
  if (name == "ell-outer") return SPMVTK_KERNEL_ELL_OUTER;
  std::fprintf(stderr, "error: unknown kernel \"%s\"\n", name.c_str());
  std::exit(1);
}

const char* kernel_label(spmvtk_kernel k) {
  switch (k) {
    case SPMVTK_KERNEL_CRS: return "crs";
    case SPMVTK_KERNEL_COO_ROW_OUTER: return "coo-row";
    case SPMVTK_KERNEL_COO_COL_OUTER: return "coo-col";
    case SPMVTK_KERNEL_ELL_INNER: return "ell-inner";
    case SPMVTK_KERNEL_ELL_OUTER: return "ell-outer";
  }
  return "?";
}

spmvtk_format kernel_input_format(spmvtk_kernel k) {
  switch (k) {
    case SPMVTK_KERNEL_COO_ROW_OUTER: return SPMVTK_FORMAT_COO_ROW;
    case SPMVTK_KERNEL_COO_COL_OUTER: return SPMVTK_FORMAT_COO_COL;
    case SPMVTK_KERNEL_ELL_INNER:
    case SPMVTK_KERNEL_ELL_OUTER: return SPMVTK_FORMAT_ELL;
    default: return SPMVTK_FORMAT_CRS;
  }
}

// Same raw mt19937_64 mapping the generators use: 53 bits -> [-1,1).
std::vector<double> make_x(const std::string& spec, int64_t n) {
  std::vector<double> x(static_cast<size_t>(n), 1.0);
  if (spec == "ones") return x;
  if (spec.rfind("seed:", 0) == 0) {
    std::mt19937_64 rng(std::stoull(spec.substr(5)));
    for (auto& v : x)
      v = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    return x;
  }
  std::fprintf(stderr, "error: --x must be \"ones\" or \"seed:N\"\n");
  std::exit(1);
}

std::string csv_quote(const char* s) {
  if (!s) return "";
  std::string out = "\"";
  for (const char* p = s; *p; ++p) {
    if (*p == '"') out += '"';
    out += *p;
  }
  out += '"';
  return out;
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

// ---- subcommand bodies -----------------------------------------------------

int run_info(const std::string& path, bool csv) {
  MatrixHandle m = load_matrix(path);
  spmvtk_matrix_info info{};
  check(spmvtk_matrix_get_info(m.get(), &info));
  if (csv) {
    std::printf("matrix,n,nnz,mu,sigma,d_mat,max_row_entries,ell_bytes_estimate\n");
    std::printf("%s,%" PRId64 ",%" PRId64 ",%.17g,%.17g,%.17g,%" PRId64
                ",%" PRIu64 "\n",
                stem_of(path).c_str(), info.n, info.nnz, info.mu, info.sigma,
                info.d_mat, info.max_row_entries, info.ell_bytes);
  } else {
    std::printf("matrix:            %s\n", stem_of(path).c_str());
    std::printf("n:                 %" PRId64 "\n", info.n);
    std::printf("nnz:               %" PRId64 "\n", info.nnz);
    std::printf("mu:                %.6g\n", info.mu);
    std::printf("sigma:             %.6g\n", info.sigma);
    std::printf("d_mat:             %.6g\n", info.d_mat);
    std::printf("max row entries:   %" PRId64 "\n", info.max_row_entries);
    std::printf("ELL bytes (est.):  %" PRIu64 "\n", info.ell_bytes);
  }
  return 0;
}

int run_convert(const std::string& path, const std::string& to,
                const std::string& out_path, uint64_t max_bytes) {
  MatrixHandle m = load_matrix(path);
  spmvtk_format target;
  if (to == "coo-row") target = SPMVTK_FORMAT_COO_ROW;
  else if (to == "coo-col") target = SPMVTK_FORMAT_COO_COL;
  else if (to == "ccs") target = SPMVTK_FORMAT_CCS;
  else if (to == "ell") target = SPMVTK_FORMAT_ELL;
  else {
    std::fprintf(stderr, "error: unknown target format \"%s\"\n", to.c_str());
    return 1;
  }
  spmvtk_matrix* converted = nullptr;
  check(spmvtk_matrix_convert(m.get(), target, max_bytes, &converted));
  MatrixHandle conv(converted);
  check(spmvtk_write_matrix_market(conv.get(), out_path.c_str()));
  if (target == SPMVTK_FORMAT_ELL) {
    spmvtk_matrix_info info{};
    check(spmvtk_matrix_get_info(m.get(), &info));
    int64_t padding = info.n * info.max_row_entries - info.nnz;
    std::string sidecar = out_path + ".stats";
    std::ofstream sc(sidecar);
    sc << "band_count=" << info.max_row_entries << " stored_nnz=" << info.nnz
       << " padding=" << padding << " bytes=" << info.ell_bytes << "\n";
    std::printf("ell: band_count=%" PRId64 " stored_nnz=%" PRId64
                " padding=%" PRId64 " bytes=%" PRIu64 "\n",
                info.max_row_entries, info.nnz, padding, info.ell_bytes);
  }
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

int run_spmv(const std::string& path, const std::string& kernel_name,
             int lanes, const std::string& x_spec, bool do_check,
             uint64_t max_bytes) {
  MatrixHandle crs = load_matrix(path);
  spmvtk_matrix_info info{};
  check(spmvtk_matrix_get_info(crs.get(), &info));
  spmvtk_kernel kernel = parse_kernel(kernel_name);

  MatrixHandle run_handle;
  if (kernel == SPMVTK_KERNEL_CRS) {
    run_handle = std::move(crs);
  } else {
    spmvtk_matrix* conv = nullptr;
    check(spmvtk_matrix_convert(crs.get(), kernel_input_format(kernel),
                                max_bytes, &conv));
    run_handle = MatrixHandle(conv);
  }

  std::vector<double> x = make_x(x_spec, info.n);
  std::vector<double> y(static_cast<size_t>(info.n));
  double elapsed = 0.0;
  check(spmvtk_spmv(run_handle.get(), kernel, x.data(), info.n, lanes,
                    y.data(), &elapsed));
  std::printf("kernel=%s lanes=%d wall_seconds=%.9f\n", kernel_label(kernel),
              lanes, elapsed);

  if (do_check) {
    MatrixHandle baseline =
        kernel == SPMVTK_KERNEL_CRS ? std::move(run_handle) : load_matrix(path);
    std::vector<double> y0(static_cast<size_t>(info.n));
    check(spmvtk_spmv(baseline.get(), SPMVTK_KERNEL_CRS, x.data(), info.n, 1,
                      y0.data(), nullptr));
    double max_rel = 0.0;
    double scale = 0.0;
    for (size_t i = 0; i < y.size(); ++i)
      scale = std::max(scale, std::fabs(y0[i]));
    if (scale == 0.0) scale = 1.0;
    for (size_t i = 0; i < y.size(); ++i)
      max_rel = std::max(max_rel, std::fabs(y[i] - y0[i]) / scale);
    std::printf("check: max relative error %.3e\n", max_rel);
    if (max_rel > 1e-10) {
      std::fprintf(stderr, "error: check failed (tolerance 1e-10)\n");
      return 3;
    }
  }
  return 0;
}

int run_bench(const std::string& path, const std::string& kernel_name,
              int lanes, int repeats, uint64_t max_bytes) {
  MatrixHandle m = load_matrix(path);
  spmvtk_matrix_info info{};
  check(spmvtk_matrix_get_info(m.get(), &info));
  spmvtk_kernel kernel = parse_kernel(kernel_name);
  std::printf(
      "matrix_id,d_mat,t_crs,t_ell,t_trans,sp,tt,r,excluded,exclusion_reason\n");
  spmvtk_bench_result res{};
  spmvtk_status st =
      spmvtk_bench(m.get(), kernel, lanes, repeats, max_bytes, &res);
  if (st == SPMVTK_ERR_MEMORY_LIMIT) {
    std::printf("%s,%.17g,,,,,,,true,%s\n", stem_of(path).c_str(), info.d_mat,
                csv_quote(spmvtk_last_error()).c_str());
    return 0;
  }
  check(st);
  std::printf("%s,%.17g,%.9e,%.9e,%.9e,%.17g,%.17g,%.17g,false,\n",
              stem_of(path).c_str(), info.d_mat, res.t_crs, res.t_ell,
              res.t_trans, res.sp, res.tt, res.r);
  return 0;
}

int run_profile(std::vector<std::string> inputs, const std::string& kernel_name,
                int lanes, double c, int repeats, uint64_t max_bytes,
                const std::string& out_path, const std::string& csv_path,
                const std::string& label) {
  // a single directory argument means "every .mtx inside, sorted"
  if (inputs.size() == 1 && fs::is_directory(inputs[0])) {
    std::vector<std::string> found;
    for (const auto& e : fs::directory_iterator(inputs[0]))
      if (e.path().extension() == ".mtx") found.push_back(e.path().string());
    std::sort(found.begin(), found.end());
    inputs = std::move(found);
  }
  if (inputs.empty()) {
    std::fprintf(stderr, "error: no input matrices\n");
    return 2;
  }
  std::vector<MatrixHandle> handles;
  std::vector<std::string> ids;
  for (const auto& p : inputs) {
    handles.push_back(load_matrix(p));
    ids.push_back(stem_of(p));
  }
  std::vector<const spmvtk_matrix*> raw;
  std::vector<const char*> id_ptrs;
  for (size_t i = 0; i < handles.size(); ++i) {
    raw.push_back(handles[i].get());
    id_ptrs.push_back(ids[i].c_str());
  }
  spmvtk_profile* profile = nullptr;
  check(spmvtk_profile_build(raw.data(), id_ptrs.data(), raw.size(),
                             parse_kernel(kernel_name), lanes, c, repeats,
                             max_bytes, label.c_str(), &profile));
  ProfileHandle ph(profile);
  check(spmvtk_profile_write(ph.get(), out_path.c_str()));
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    csv << "matrix_id,d_mat,r\n";
    char buf[128];
    for (size_t i = 0; i < spmvtk_profile_record_count(ph.get()); ++i) {
      spmvtk_record_view rec{};
      check(spmvtk_profile_record(ph.get(), i, &rec));
      if (rec.excluded) continue;
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", rec.d_mat, rec.r);
      csv << rec.matrix_id << ',' << buf << '\n';
    }
  }
  std::printf("d_star=%.17g\n", spmvtk_profile_d_star(ph.get()));
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

int run_select(const std::string& path, const std::string& profile_path) {
  MatrixHandle m = load_matrix(path);
  spmvtk_profile* profile = nullptr;
  check(spmvtk_profile_read(profile_path.c_str(), &profile));
  ProfileHandle ph(profile);
  spmvtk_decision decision;
  double d_mat = 0.0;
  check(spmvtk_select(m.get(), ph.get(), &decision, &d_mat));
  std::printf("%s d_mat=%.17g d_star=%.17g\n",
              decision == SPMVTK_USE_ELL ? "UseEll" : "UseCrs", d_mat,
              spmvtk_profile_d_star(ph.get()));
  return 0;
}

int finish_gen(spmvtk_matrix* raw, const std::string& out_path) {
  MatrixHandle m(raw);
  check(spmvtk_write_matrix_market(m.get(), out_path.c_str()));
  spmvtk_matrix_info info{};
  check(spmvtk_matrix_get_info(m.get(), &info));
  std::printf("n=%" PRId64 " nnz=%" PRId64 " mu=%.6g sigma=%.6g d_mat=%.6g\n",
              info.n, info.nnz, info.mu, info.sigma, info.d_mat);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse SpMV toolkit: format conversion, parallel kernels, and "
               "run-time transformation auto-tuning"};
  app.require_subcommand(1);

  // info
  std::string info_path;
  bool info_csv = false;
  auto* info_cmd = app.add_subcommand("info", "Report matrix statistics");
  info_cmd->add_option("matrix", info_path, "Matrix Market file")->required();
  info_cmd->add_flag("--csv", info_csv, "machine-readable output");

  // convert
  std::string conv_path, conv_to, conv_out;
  uint64_t conv_max_bytes = kDefaultEllCapBytes;
  auto* conv_cmd = app.add_subcommand("convert", "Convert storage format");
  conv_cmd->add_option("matrix", conv_path)->required();
  conv_cmd->add_option("--to", conv_to, "coo-row, coo-col, ccs or ell")
      ->required();
  conv_cmd->add_option("--out", conv_out)->required();
  conv_cmd->add_option("--max-bytes", conv_max_bytes,
                       "ELL footprint cap (default 2 GiB)");

  // spmv
  std::string spmv_path, spmv_kernel = "crs", spmv_x = "ones";
  int spmv_lanes = 1;
  bool spmv_check = false;
  uint64_t spmv_max_bytes = kDefaultEllCapBytes;
  auto* spmv_cmd = app.add_subcommand("spmv", "Run one SpMV");
  spmv_cmd->add_option("matrix", spmv_path)->required();
  spmv_cmd->add_option("--kernel", spmv_kernel,
                       "crs, coo-row, coo-col, ell-inner or ell-outer");
  spmv_cmd->add_option("--lanes", spmv_lanes);
  spmv_cmd->add_option("--x", spmv_x, "\"ones\" or \"seed:N\"");
  spmv_cmd->add_flag("--check", spmv_check, "compare against the CRS baseline");
  spmv_cmd->add_option("--max-bytes", spmv_max_bytes);

  // bench
  std::string bench_path, bench_kernel = "ell-outer";
  int bench_lanes = 1, bench_repeats = 9;
  uint64_t bench_max_bytes = kDefaultEllCapBytes;
  auto* bench_cmd = app.add_subcommand("bench", "Measure the timing triple");
  bench_cmd->add_option("matrix", bench_path)->required();
  bench_cmd->add_option("--kernel", bench_kernel);
  bench_cmd->add_option("--lanes", bench_lanes);
  bench_cmd->add_option("--repeats", bench_repeats);
  bench_cmd->add_option("--max-bytes", bench_max_bytes);

  // profile
  std::vector<std::string> prof_inputs;
  std::string prof_kernel = "ell-outer", prof_out = "profile.json",
              prof_csv, prof_label;
  int prof_lanes = 1, prof_repeats = 9;
  double prof_c = 1.0;
  uint64_t prof_max_bytes = kDefaultEllCapBytes;
  auto* prof_cmd =
      app.add_subcommand("profile", "Off-line phase: build a machine profile");
  prof_cmd->add_option("matrices", prof_inputs,
                       "matrix files, or one directory of .mtx files")
      ->required();
  prof_cmd->add_option("--kernel", prof_kernel);
  prof_cmd->add_option("--lanes", prof_lanes);
  prof_cmd->add_option("--c", prof_c, "threshold constant");
  prof_cmd->add_option("--repeats", prof_repeats);
  prof_cmd->add_option("--max-bytes", prof_max_bytes);
  prof_cmd->add_option("--out", prof_out, "profile JSON path");
  prof_cmd->add_option("--csv", prof_csv, "companion (d_mat, r) CSV path");
  prof_cmd->add_option("--label", prof_label, "machine label");

  // select
  std::string sel_path, sel_profile;
  auto* sel_cmd =
      app.add_subcommand("select", "On-line phase: pick CRS or ELL");
  sel_cmd->add_option("matrix", sel_path)->required();
  sel_cmd->add_option("--profile", sel_profile)->required();

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic matrix");
  gen_cmd->require_subcommand(1);
  int64_t gb_n = 0, gb_hw = 0;
  std::string gb_out;
  auto* gb = gen_cmd->add_subcommand("banded", "band matrix, D_mat near 0");
  gb->add_option("n", gb_n)->required();
  gb->add_option("half_width", gb_hw)->required();
  gb->add_option("--out", gb_out)->required();

  int64_t gs_n = 0, gs_base = 0, gs_heavy_rows = 0, gs_heavy_deg = 0;
  uint64_t gs_seed = 0;
  std::string gs_out;
  auto* gs = gen_cmd->add_subcommand("skewed",
                                     "few heavy rows over a light baseline");
  gs->add_option("n", gs_n)->required();
  gs->add_option("base_deg", gs_base)->required();
  gs->add_option("heavy_rows", gs_heavy_rows)->required();
  gs->add_option("heavy_deg", gs_heavy_deg)->required();
  gs->add_option("--seed", gs_seed);
  gs->add_option("--out", gs_out)->required();

  int64_t gc_n = 0;
  double gc_mean = 0.0, gc_target = 0.0;
  uint64_t gc_seed = 0;
  std::string gc_out;
  auto* gc = gen_cmd->add_subcommand("cv-target",
                                     "hit a requested D_mat value");
  gc->add_option("n", gc_n)->required();
  gc->add_option("mean_deg", gc_mean)->required();
  gc->add_option("target_dmat", gc_target)->required();
  gc->add_option("--seed", gc_seed);
  gc->add_option("--out", gc_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*info_cmd) return run_info(info_path, info_csv);
  if (*conv_cmd)
    return run_convert(conv_path, conv_to, conv_out, conv_max_bytes);
  if (*spmv_cmd)
    return run_spmv(spmv_path, spmv_kernel, spmv_lanes, spmv_x, spmv_check,
                    spmv_max_bytes);
  if (*bench_cmd)
    return run_bench(bench_path, bench_kernel, bench_lanes, bench_repeats,
                     bench_max_bytes);
  if (*prof_cmd)
    return run_profile(prof_inputs, prof_kernel, prof_lanes, prof_c,
                       prof_repeats, prof_max_bytes, prof_out, prof_csv,
                       prof_label);
  if (*sel_cmd) return run_select(sel_path, sel_profile);
  if (*gen_cmd) {
    spmvtk_matrix* m = nullptr;
    if (*gb) {
      check(spmvtk_gen_banded(gb_n, gb_hw, &m));
      return finish_gen(m, gb_out);
    }
    if (*gs) {
      check(spmvtk_gen_skewed(gs_n, gs_base, gs_heavy_rows, gs_heavy_deg,
                              gs_seed, &m));
      return finish_gen(m, gs_out);
    }
    if (*gc) {
      check(spmvtk_gen_cv_target(gc_n, gc_mean, gc_target, gc_seed, &m));
      return finish_gen(m, gc_out);
    }
  }
  return 1;
}
