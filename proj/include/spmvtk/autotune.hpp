#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spmvtk/formats.hpp"
#include "spmvtk/stats.hpp"

namespace spmvtk {

enum class Kernel { Crs, CooRowOuter, CooColOuter, EllInner, EllOuter };

std::string kernel_name(Kernel k);
Kernel kernel_from_name(const std::string& name);

struct Timings {
  double t_crs = 0.0;   // one CRS SpMV, seconds
  double t_ell = 0.0;   // one SpMV in the transformed format, seconds
  double t_trans = 0.0; // one serial transformation, seconds
};

struct CostMetrics {
  double sp = 0.0;  // t_crs / t_ell
  double tt = 0.0;  // t_trans / t_crs
  double r = 0.0;   // sp / tt
};

CostMetrics compute_metrics(const Timings& t);

// Smallest k with t_trans + k*t_ell <= k*t_crs; nullopt when t_ell >= t_crs.
std::optional<std::int64_t> amortization_iterations(const Timings& t);

using MatrixRef =
    std::variant<const CrsMatrix*, const CooMatrix*, const EllMatrix*>;

// Median of `repeats` timed calls after one untimed warm-up.
double measure_spmv(Kernel kernel, MatrixRef m, std::span<const double> x,
                    int lanes, int repeats);

// Times exactly one cold serial conversion; propagates the memory refusal.
std::pair<EllMatrix, double> measure_transformation(
    const CrsMatrix& m, std::uint64_t max_bytes = 0);

struct BenchRecord {
  std::string matrix_id;
  index_t n = 0;
  index_t nnz = 0;
  RowStats stats;
  Kernel kernel_variant = Kernel::EllOuter;
  int lanes = 1;
  std::optional<Timings> timings;
  std::optional<CostMetrics> metrics;
  bool excluded = false;
  std::optional<std::string> exclusion_reason;
};

struct Profile {
  std::string machine_label;
  Kernel kernel_variant = Kernel::EllOuter;
  int lanes = 1;
  double c = 1.0;
  std::vector<BenchRecord> records;
  double d_star = 0.0;
};

// Largest d_mat such that every record with d_mat <= that value has r >= c;
// 0 when no record qualifies.
double find_d_star(std::span<const std::pair<double, double>> records,
                   double c);
double find_d_star(const std::vector<BenchRecord>& records, double c);

struct ProfileOptions {
  std::string machine_label;
  Kernel kernel_variant = Kernel::EllOuter;
  int lanes = 1;
  double c = 1.0;
  int repeats = 9;
  std::uint64_t max_bytes = 0;  // ELL guard; 0 = unlimited
};

// Off-line phase: stats + (t_crs, t_trans, t_ell) per matrix, then D*.
// Matrices refused by the ELL guard stay in the record set, flagged and
// excluded from threshold finding.
Profile offline_profile(
    std::span<const std::pair<std::string, const CrsMatrix*>> matrix_set,
    const ProfileOptions& opts);

enum class Decision { UseEll, UseCrs };

struct Selection {
  Decision decision = Decision::UseCrs;
  double d_mat = 0.0;
};

// On-line phase: UseEll iff d_mat(m) < p.d_star (strict).
Selection online_select(const CrsMatrix& m, const Profile& p);

std::string profile_to_json(const Profile& p);
Profile profile_from_json(const std::string& text);

void write_profile(const Profile& p, const std::filesystem::path& path);
Profile read_profile(const std::filesystem::path& path);

}  // namespace spmvtk
