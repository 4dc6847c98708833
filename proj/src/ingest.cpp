#include "spmvtk/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include "spmvtk/convert.hpp"
#include "spmvtk/error.hpp"

namespace spmvtk {
namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, long line,
                             const std::string& what) {
  throw Error(ErrorCode::Parse,
              path.string() + ":" + std::to_string(line) + ": " + what);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// ---- deterministic random helpers -----------------------------------------
//
// All generators draw from std::mt19937_64 raw outputs only; the standard
// fixes that engine's sequence, so seeds reproduce byte-identical matrices
// on any conforming implementation.  std::*_distribution is deliberately
// avoided (its mapping is implementation-defined).

index_t rand_below(std::mt19937_64& rng, index_t n) {
  return static_cast<index_t>(rng() % static_cast<std::uint64_t>(n));
}

double rand_signed_unit(std::mt19937_64& rng) {
  // 53 uniform bits in [0,1), mapped to [-1,1)
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

// k distinct values from 1..n, in ascending order
std::vector<index_t> sample_distinct(std::mt19937_64& rng, index_t n,
                                     index_t k) {
  std::vector<index_t> out;
  out.reserve(static_cast<std::size_t>(k));
  if (k * 3 >= n) {
    // partial Fisher-Yates over 1..n
    std::vector<index_t> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), index_t{1});
    for (index_t i = 0; i < k; ++i) {
      index_t j = i + rand_below(rng, n - i);
      std::swap(pool[static_cast<std::size_t>(i)],
                pool[static_cast<std::size_t>(j)]);
      out.push_back(pool[static_cast<std::size_t>(i)]);
    }
  } else {
    std::unordered_set<index_t> seen;
    seen.reserve(static_cast<std::size_t>(k) * 2);
    while (static_cast<index_t>(out.size()) < k) {
      index_t v = 1 + rand_below(rng, n);
      if (seen.insert(v).second) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CrsMatrix from_row_degrees(const std::vector<index_t>& degrees,
                           std::mt19937_64& rng) {
  index_t n = static_cast<index_t>(degrees.size());
  CrsMatrix m;
  m.n = n;
  m.row_ptr.reserve(static_cast<std::size_t>(n) + 1);
  m.row_ptr.push_back(1);
  for (index_t i = 0; i < n; ++i) {
    auto cols = sample_distinct(rng, n, degrees[static_cast<std::size_t>(i)]);
    for (index_t j : cols) {
      m.col_idx.push_back(j);
      m.values.push_back(rand_signed_unit(rng));
    }
    m.row_ptr.push_back(m.nnz() + 1);
  }
  return m;
}

}  // namespace

CrsMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());

  long line_no = 1;
  std::string line;
  if (!std::getline(in, line))
    parse_fail(path, line_no, "empty file");
  std::istringstream hdr(lower(line));
  std::string banner, object, format, field, symmetry;
  hdr >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix")
    parse_fail(path, line_no, "not a Matrix Market file");
  if (format != "coordinate")
    parse_fail(path, line_no, "only coordinate format is supported");
  if (field != "real")
    parse_fail(path, line_no, "only real-valued matrices are supported (got \"" +
                                  field + "\")");
  bool symmetric = false;
  if (symmetry == "symmetric")
    symmetric = true;
  else if (symmetry != "general")
    parse_fail(path, line_no,
               "unsupported symmetry kind \"" + symmetry + "\"");

  // skip comments, read size line
  index_t rows = 0, cols = 0;
  long long file_nnz = 0;
  for (;;) {
    ++line_no;
    if (!std::getline(in, line))
      parse_fail(path, line_no, "missing size line");
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream sz(line);
    if (!(sz >> rows >> cols >> file_nnz))
      parse_fail(path, line_no, "malformed size line");
    break;
  }
  if (rows != cols)
    parse_fail(path, line_no,
               "non-square matrix (" + std::to_string(rows) + " x " +
                   std::to_string(cols) + ")");
  index_t n = rows;

  std::vector<index_t> ri, ci;
  std::vector<double> vals;
  std::vector<long> lines;
  ri.reserve(static_cast<std::size_t>(file_nnz));
  ci.reserve(static_cast<std::size_t>(file_nnz));
  vals.reserve(static_cast<std::size_t>(file_nnz));
  lines.reserve(static_cast<std::size_t>(file_nnz));
  long long seen = 0;
  while (seen < file_nnz) {
    ++line_no;
    if (!std::getline(in, line))
      parse_fail(path, line_no, "unexpected end of file, expected " +
                                    std::to_string(file_nnz) + " entries");
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream es(line);
    index_t i = 0, j = 0;
    double v = 0.0;
    if (!(es >> i >> j >> v))
      parse_fail(path, line_no, "malformed entry line");
    if (i < 1 || i > n)
      parse_fail(path, line_no, "row index " + std::to_string(i) + " out of range");
    if (j < 1 || j > n)
      parse_fail(path, line_no,
                 "column index " + std::to_string(j) + " out of range");
    ri.push_back(i);
    ci.push_back(j);
    vals.push_back(v);
    lines.push_back(line_no);
    if (symmetric && i != j) {
      ri.push_back(j);
      ci.push_back(i);
      vals.push_back(v);
      lines.push_back(line_no);
    }
    ++seen;
  }

  // duplicate detection with line attribution
  {
    std::vector<std::size_t> perm(ri.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      return ri[a] != ri[b] ? ri[a] < ri[b] : ci[a] < ci[b];
    });
    for (std::size_t k = 1; k < perm.size(); ++k) {
      std::size_t a = perm[k - 1], b = perm[k];
      if (ri[a] == ri[b] && ci[a] == ci[b])
        parse_fail(path, std::max(lines[a], lines[b]),
                   "duplicate entry (" + std::to_string(ri[a]) + ", " +
                       std::to_string(ci[a]) + ")");
    }
  }

  // group by row, keeping file order within each row
  CrsMatrix m;
  m.n = n;
  m.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  m.row_ptr[0] = 1;
  for (index_t r : ri) ++m.row_ptr[static_cast<std::size_t>(r)];
  for (index_t i = 1; i <= n; ++i)
    m.row_ptr[static_cast<std::size_t>(i)] +=
        m.row_ptr[static_cast<std::size_t>(i - 1)];
  m.values.resize(vals.size());
  m.col_idx.resize(vals.size());
  std::vector<index_t> next(m.row_ptr.begin(), m.row_ptr.end() - 1);
  for (std::size_t p = 0; p < ri.size(); ++p) {
    index_t slot = next[static_cast<std::size_t>(ri[p] - 1)]++;
    m.values[static_cast<std::size_t>(slot - 1)] = vals[p];
    m.col_idx[static_cast<std::size_t>(slot - 1)] = ci[p];
  }
  return m;
}

void write_matrix_market(const CrsMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  CrsMatrix c = canonicalize(m);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << c.n << ' ' << c.n << ' ' << c.nnz() << '\n';
  char buf[64];
  for (index_t i = 1; i <= c.n; ++i)
    for (index_t p = c.row_ptr[i - 1]; p < c.row_ptr[i]; ++p) {
      std::snprintf(buf, sizeof(buf), "%lld %lld %.17g\n",
                    static_cast<long long>(i),
                    static_cast<long long>(c.col_idx[p - 1]),
                    c.values[static_cast<std::size_t>(p - 1)]);
      out << buf;
    }
  if (!out)
    throw Error(ErrorCode::Io, "write failed: " + path.string());
}

CrsMatrix gen_banded(index_t n, index_t half_width) {
  if (n < 1 || half_width < 0 || half_width >= n)
    throw Error(ErrorCode::InvalidArgument,
                "gen_banded requires 0 <= half_width < n");
  CrsMatrix m;
  m.n = n;
  m.row_ptr.reserve(static_cast<std::size_t>(n) + 1);
  m.row_ptr.push_back(1);
  for (index_t i = 1; i <= n; ++i) {
    index_t lo = std::max<index_t>(1, i - half_width);
    index_t hi = std::min(n, i + half_width);
    for (index_t j = lo; j <= hi; ++j) {
      m.col_idx.push_back(j);
      m.values.push_back(1.0 / static_cast<double>(1 + std::llabs(i - j)));
    }
    m.row_ptr.push_back(m.nnz() + 1);
  }
  return m;
}

CrsMatrix gen_skewed(index_t n, index_t base_deg, index_t heavy_rows,
                     index_t heavy_deg, std::uint64_t seed) {
  if (n < 1 || heavy_rows > n)
    throw Error(ErrorCode::InvalidArgument, "heavy_rows must not exceed n");
  if (base_deg >= n || heavy_deg >= n || base_deg < 0 || heavy_deg < 0)
    throw Error(ErrorCode::InvalidArgument, "row degrees must lie in [0, n)");
  std::mt19937_64 rng(seed);
  std::vector<index_t> heavy = sample_distinct(rng, n, heavy_rows);
  std::vector<index_t> degrees(static_cast<std::size_t>(n), base_deg);
  for (index_t r : heavy) degrees[static_cast<std::size_t>(r - 1)] = heavy_deg;
  return from_row_degrees(degrees, rng);
}

CrsMatrix gen_cv_target(index_t n, double mean_deg, double target_dmat,
                        std::uint64_t seed) {
  if (n < 1 || mean_deg <= 0.0 || target_dmat < 0.0)
    throw Error(ErrorCode::InvalidArgument,
                "need n >= 1, mean_deg > 0, target_dmat >= 0");
  std::mt19937_64 rng(seed);

  if (target_dmat == 0.0) {
    index_t deg = static_cast<index_t>(std::llround(mean_deg));
    if (deg < 1 || deg > n)
      throw Error(ErrorCode::InvalidArgument,
                  "mean_deg must round into [1, n] for target 0");
    std::vector<index_t> degrees(static_cast<std::size_t>(n), deg);
    return from_row_degrees(degrees, rng);
  }

  // Two-point distribution: h heavy rows share all entries, the rest are
  // empty.  With p = h/n the CV is sqrt((1-p)/p) regardless of the heavy
  // degree, so h alone sets D_mat and the degree sets the mean.
  double t2 = target_dmat * target_dmat;
  index_t h = static_cast<index_t>(
      std::llround(static_cast<double>(n) / (1.0 + t2)));
  h = std::clamp<index_t>(h, 1, n - 1);
  long long total = std::llround(mean_deg * static_cast<double>(n));
  long long per_row = total / h;
  long long extra = total % h;
  if (per_row + (extra > 0 ? 1 : 0) > n) {
    double max_t = std::sqrt(
        static_cast<double>(n) /
            std::ceil(static_cast<double>(total) / static_cast<double>(n)) -
        1.0);
    throw Error(ErrorCode::InvalidArgument,
                "target D_mat infeasible: rows would need more than n distinct "
                "columns; feasible range is [0, " + std::to_string(max_t) + "]");
  }
  double achieved =
      std::sqrt(static_cast<double>(n - h) / static_cast<double>(h));
  if (std::abs(achieved - target_dmat) > 0.05 * target_dmat)
    throw Error(ErrorCode::InvalidArgument,
                "target D_mat " + std::to_string(target_dmat) +
                    " not reachable within 5% at n = " + std::to_string(n) +
                    " (closest " + std::to_string(achieved) + ")");

  std::vector<index_t> heavy = sample_distinct(rng, n, h);
  std::vector<index_t> degrees(static_cast<std::size_t>(n), 0);
  for (long long k = 0; k < h; ++k)
    degrees[static_cast<std::size_t>(heavy[static_cast<std::size_t>(k)] - 1)] =
        per_row + (k < extra ? 1 : 0);
  return from_row_degrees(degrees, rng);
}

}  // namespace spmvtk
