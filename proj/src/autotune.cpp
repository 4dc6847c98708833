#include "spmvtk/autotune.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "spmvtk/convert.hpp"
#include "spmvtk/error.hpp"
#include "spmvtk/spmv.hpp"

namespace spmvtk {

std::string kernel_name(Kernel k) {
  switch (k) {
    case Kernel::Crs: return "crs";
    case Kernel::CooRowOuter: return "coo-row";
    case Kernel::CooColOuter: return "coo-col";
    case Kernel::EllInner: return "ell-inner";
    case Kernel::EllOuter: return "ell-outer";
  }
  throw Error(ErrorCode::InvalidArgument, "unknown kernel variant");
}

Kernel kernel_from_name(const std::string& name) {
  if (name == "crs") return Kernel::Crs;
  if (name == "coo-row") return Kernel::CooRowOuter;
  if (name == "coo-col") return Kernel::CooColOuter;
  if (name == "ell-inner") return Kernel::EllInner;
  if (name == "ell-outer") return Kernel::EllOuter;
  throw Error(ErrorCode::InvalidArgument, "unknown kernel name: " + name);
}

CostMetrics compute_metrics(const Timings& t) {
  if (t.t_crs <= 0.0 || t.t_ell <= 0.0 || t.t_trans <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "timings must be positive");
  CostMetrics m;
  m.sp = t.t_crs / t.t_ell;
  m.tt = t.t_trans / t.t_crs;
  m.r = m.sp / m.tt;
  return m;
}

std::optional<std::int64_t> amortization_iterations(const Timings& t) {
  if (t.t_crs <= 0.0 || t.t_ell <= 0.0 || t.t_trans <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "timings must be positive");
  if (t.t_ell >= t.t_crs) return std::nullopt;
  double gain = t.t_crs - t.t_ell;
  auto k = static_cast<std::int64_t>(std::ceil(t.t_trans / gain));
  // guard against floating rounding on either side of the boundary
  while (k > 1 && t.t_trans + static_cast<double>(k - 1) * t.t_ell <=
                      static_cast<double>(k - 1) * t.t_crs)
    --k;
  while (t.t_trans + static_cast<double>(k) * t.t_ell >
         static_cast<double>(k) * t.t_crs)
    ++k;
  return k;
}

namespace {

using Clock = std::chrono::steady_clock;

std::vector<double> run_kernel(Kernel kernel, MatrixRef m,
                               std::span<const double> x, int lanes) {
  switch (kernel) {
    case Kernel::Crs:
      if (auto* p = std::get_if<const CrsMatrix*>(&m)) return spmv_crs(**p, x);
      break;
    case Kernel::CooRowOuter:
      if (auto* p = std::get_if<const CooMatrix*>(&m))
        return spmv_coo_row_outer(**p, x, lanes);
      break;
    case Kernel::CooColOuter:
      if (auto* p = std::get_if<const CooMatrix*>(&m))
        return spmv_coo_col_outer(**p, x, lanes);
      break;
    case Kernel::EllInner:
      if (auto* p = std::get_if<const EllMatrix*>(&m))
        return spmv_ell_inner(**p, x, lanes);
      break;
    case Kernel::EllOuter:
      if (auto* p = std::get_if<const EllMatrix*>(&m))
        return spmv_ell_outer(**p, x, lanes);
      break;
  }
  throw Error(ErrorCode::InvalidArgument,
              "matrix format does not match kernel " + kernel_name(kernel));
}

}  // namespace

double measure_spmv(Kernel kernel, MatrixRef m, std::span<const double> x,
                    int lanes, int repeats) {
  if (repeats < 1)
    throw Error(ErrorCode::InvalidArgument, "repeats must be at least 1");
  volatile double sink = 0.0;
  auto once = [&]() {
    auto y = run_kernel(kernel, m, x, lanes);
    if (!y.empty()) sink = y.front();
  };
  once();  // warm-up, untimed
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(repeats));
  for (int r = 0; r < repeats; ++r) {
    auto t0 = Clock::now();
    once();
    auto t1 = Clock::now();
    samples.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  (void)sink;
  std::sort(samples.begin(), samples.end());
  std::size_t mid = samples.size() / 2;
  double median = samples.size() % 2 == 1
                      ? samples[mid]
                      : 0.5 * (samples[mid - 1] + samples[mid]);
  return median;
}

std::pair<EllMatrix, double> measure_transformation(const CrsMatrix& m,
                                                    std::uint64_t max_bytes) {
  auto t0 = Clock::now();
  EllMatrix ell = crs_to_ell(m, max_bytes);
  auto t1 = Clock::now();
  return {std::move(ell), std::chrono::duration<double>(t1 - t0).count()};
}

double find_d_star(std::span<const std::pair<double, double>> records,
                   double c) {
  std::vector<std::pair<double, double>> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double d_star = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    // ties in d_mat qualify only if every tied record passes
    std::size_t j = i;
    bool all_pass = true;
    while (j < sorted.size() && sorted[j].first == sorted[i].first) {
      if (sorted[j].second < c) all_pass = false;
      ++j;
    }
    if (!all_pass) break;
    d_star = sorted[i].first;
    i = j;
  }
  return d_star;
}

double find_d_star(const std::vector<BenchRecord>& records, double c) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& rec : records)
    if (!rec.excluded && rec.metrics)
      pts.emplace_back(rec.stats.d_mat, rec.metrics->r);
  return find_d_star(pts, c);
}

Profile offline_profile(
    std::span<const std::pair<std::string, const CrsMatrix*>> matrix_set,
    const ProfileOptions& opts) {
  if (matrix_set.empty())
    throw Error(ErrorCode::InvalidArgument, "empty benchmark matrix set");
  if (opts.c <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "threshold constant must be positive");
  if (opts.kernel_variant == Kernel::Crs)
    throw Error(ErrorCode::InvalidArgument,
                "profile kernel must be a transformed-format kernel");
  Profile p;
  p.machine_label = opts.machine_label;
  p.kernel_variant = opts.kernel_variant;
  p.lanes = opts.lanes;
  p.c = opts.c;
  for (const auto& [id, mat] : matrix_set) {
    BenchRecord rec;
    rec.matrix_id = id;
    rec.n = mat->n;
    rec.nnz = mat->nnz();
    rec.stats = row_stats(*mat);
    rec.kernel_variant = opts.kernel_variant;
    rec.lanes = opts.lanes;
    std::vector<double> x(static_cast<std::size_t>(mat->n), 1.0);
    // baseline is the sequential CRS kernel
    Timings t;
    t.t_crs = measure_spmv(Kernel::Crs, mat, x, 1, opts.repeats);
    try {
      switch (opts.kernel_variant) {
        case Kernel::EllInner:
        case Kernel::EllOuter: {
          auto [ell, t_trans] = measure_transformation(*mat, opts.max_bytes);
          t.t_trans = t_trans;
          t.t_ell = measure_spmv(opts.kernel_variant, &ell, x, opts.lanes,
                                 opts.repeats);
          break;
        }
        case Kernel::CooRowOuter: {
          auto t0 = std::chrono::steady_clock::now();
          CooMatrix coo = crs_to_coo_row(*mat);
          auto t1 = std::chrono::steady_clock::now();
          t.t_trans = std::chrono::duration<double>(t1 - t0).count();
          t.t_ell = measure_spmv(opts.kernel_variant, &coo, x, opts.lanes,
                                 opts.repeats);
          break;
        }
        case Kernel::CooColOuter: {
          auto t0 = std::chrono::steady_clock::now();
          CooMatrix coo = crs_to_coo_col(*mat);
          auto t1 = std::chrono::steady_clock::now();
          t.t_trans = std::chrono::duration<double>(t1 - t0).count();
          t.t_ell = measure_spmv(opts.kernel_variant, &coo, x, opts.lanes,
                                 opts.repeats);
          break;
        }
        case Kernel::Crs:
          break;
      }
      rec.timings = t;
      rec.metrics = compute_metrics(t);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MemoryLimit) throw;
      rec.excluded = true;
      rec.exclusion_reason = e.what();
    }
    p.records.push_back(std::move(rec));
  }
  p.d_star = find_d_star(p.records, p.c);
  return p;
}

Selection online_select(const CrsMatrix& m, const Profile& p) {
  Selection s;
  s.d_mat = row_stats(m).d_mat;
  s.decision = s.d_mat < p.d_star ? Decision::UseEll : Decision::UseCrs;
  return s;
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj,
                         std::initializer_list<const char*> allowed,
                         const char* where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) { ok = true; break; }
    if (!ok)
      throw Error(ErrorCode::Parse, std::string("unknown key \"") + key +
                                        "\" in " + where);
  }
}

double require_number(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw Error(ErrorCode::Parse,
                std::string("missing or non-numeric \"") + key + "\" in " + where);
  return obj[key].get<double>();
}

}  // namespace

std::string profile_to_json(const Profile& p) {
  json doc;
  doc["version"] = 1;
  doc["machine_label"] = p.machine_label;
  doc["kernel_variant"] = kernel_name(p.kernel_variant);
  doc["lanes"] = p.lanes;
  doc["c"] = p.c;
  doc["d_star"] = p.d_star;
  json recs = json::array();
  for (const auto& r : p.records) {
    json jr;
    jr["matrix_id"] = r.matrix_id;
    jr["n"] = r.n;
    jr["nnz"] = r.nnz;
    jr["mu"] = r.stats.mu;
    jr["sigma"] = r.stats.sigma;
    jr["d_mat"] = r.stats.d_mat;
    if (r.timings) {
      jr["t_crs"] = r.timings->t_crs;
      jr["t_ell"] = r.timings->t_ell;
      jr["t_trans"] = r.timings->t_trans;
    } else {
      jr["t_crs"] = nullptr;
      jr["t_ell"] = nullptr;
      jr["t_trans"] = nullptr;
    }
    if (r.metrics) {
      jr["sp"] = r.metrics->sp;
      jr["tt"] = r.metrics->tt;
      jr["r"] = r.metrics->r;
    } else {
      jr["sp"] = nullptr;
      jr["tt"] = nullptr;
      jr["r"] = nullptr;
    }
    jr["excluded"] = r.excluded;
    jr["exclusion_reason"] =
        r.exclusion_reason ? json(*r.exclusion_reason) : json(nullptr);
    recs.push_back(std::move(jr));
  }
  doc["records"] = std::move(recs);
  // nlohmann emits shortest round-trip doubles, which reproduce every bit
  return doc.dump(2);
}

Profile profile_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("profile JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw Error(ErrorCode::Parse, "profile JSON is not an object");
  reject_unknown_keys(doc,
                      {"version", "machine_label", "kernel_variant", "lanes",
                       "c", "d_star", "records"},
                      "profile");
  if (!doc.contains("version") || doc["version"] != 1)
    throw Error(ErrorCode::Parse, "profile schema version must be 1");
  Profile p;
  if (!doc.contains("machine_label") || !doc["machine_label"].is_string())
    throw Error(ErrorCode::Parse, "missing machine_label");
  p.machine_label = doc["machine_label"].get<std::string>();
  if (!doc.contains("kernel_variant") || !doc["kernel_variant"].is_string())
    throw Error(ErrorCode::Parse, "missing kernel_variant");
  p.kernel_variant = kernel_from_name(doc["kernel_variant"].get<std::string>());
  if (!doc.contains("lanes") || !doc["lanes"].is_number_integer())
    throw Error(ErrorCode::Parse, "missing lanes");
  p.lanes = doc["lanes"].get<int>();
  p.c = require_number(doc, "c", "profile");
  p.d_star = require_number(doc, "d_star", "profile");
  if (!doc.contains("records") || !doc["records"].is_array())
    throw Error(ErrorCode::Parse, "missing records array");
  for (const auto& jr : doc["records"]) {
    reject_unknown_keys(jr,
                        {"matrix_id", "n", "nnz", "mu", "sigma", "d_mat",
                         "t_crs", "t_ell", "t_trans", "sp", "tt", "r",
                         "excluded", "exclusion_reason"},
                        "record");
    BenchRecord r;
    if (!jr.contains("matrix_id") || !jr["matrix_id"].is_string())
      throw Error(ErrorCode::Parse, "record missing matrix_id");
    r.matrix_id = jr["matrix_id"].get<std::string>();
    r.n = static_cast<index_t>(require_number(jr, "n", "record"));
    r.nnz = static_cast<index_t>(require_number(jr, "nnz", "record"));
    r.stats.mu = require_number(jr, "mu", "record");
    r.stats.sigma = require_number(jr, "sigma", "record");
    r.stats.d_mat = require_number(jr, "d_mat", "record");
    r.kernel_variant = p.kernel_variant;
    r.lanes = p.lanes;
    if (jr.contains("t_crs") && jr["t_crs"].is_number()) {
      Timings t;
      t.t_crs = require_number(jr, "t_crs", "record");
      t.t_ell = require_number(jr, "t_ell", "record");
      t.t_trans = require_number(jr, "t_trans", "record");
      r.timings = t;
    }
    if (jr.contains("sp") && jr["sp"].is_number()) {
      CostMetrics cm;
      cm.sp = require_number(jr, "sp", "record");
      cm.tt = require_number(jr, "tt", "record");
      cm.r = require_number(jr, "r", "record");
      r.metrics = cm;
    }
    if (!jr.contains("excluded") || !jr["excluded"].is_boolean())
      throw Error(ErrorCode::Parse, "record missing excluded flag");
    r.excluded = jr["excluded"].get<bool>();
    if (jr.contains("exclusion_reason") && jr["exclusion_reason"].is_string())
      r.exclusion_reason = jr["exclusion_reason"].get<std::string>();
    p.records.push_back(std::move(r));
  }
  return p;
}

void write_profile(const Profile& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << profile_to_json(p) << '\n';
  if (!out)
    throw Error(ErrorCode::Io, "write failed: " + path.string());
}

Profile read_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return profile_from_json(text);
}

}  // namespace spmvtk
