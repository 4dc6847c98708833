#pragma once

#include <cstdint>
#include <filesystem>

#include "spmvtk/formats.hpp"

namespace spmvtk {

// Coordinate real, general or symmetric (expanded on read).  Refusals name
// the offending line.
CrsMatrix read_matrix_market(const std::filesystem::path& path);

// General coordinate format, canonical row-major order, 17 significant
// digits.
void write_matrix_market(const CrsMatrix& m, const std::filesystem::path& path);

// Entry at (i,j) iff |i-j| <= half_width, value 1/(1+|i-j|).
CrsMatrix gen_banded(index_t n, index_t half_width);

// heavy_rows randomly chosen rows get heavy_deg distinct random columns,
// the rest base_deg; values uniform in [-1,1].  Deterministic per seed.
CrsMatrix gen_skewed(index_t n, index_t base_deg, index_t heavy_rows,
                     index_t heavy_deg, std::uint64_t seed);

// Two-point row-degree distribution (empty rows plus one heavy level)
// solved so the population CV of the row counts lands on target_dmat.
CrsMatrix gen_cv_target(index_t n, double mean_deg, double target_dmat,
                        std::uint64_t seed);

}  // namespace spmvtk
