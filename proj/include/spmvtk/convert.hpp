#pragma once

#include <cstdint>

#include "spmvtk/formats.hpp"

namespace spmvtk {

inline constexpr std::uint64_t kNoByteLimit = 0;

CooMatrix crs_to_coo_row(const CrsMatrix& m);

// Count / prefix-sum / scatter; within each output column the row indices
// come out ascending because CRS rows are scanned in order.
CcsMatrix crs_to_ccs(const CrsMatrix& m);

CooMatrix ccs_to_coo_col(const CcsMatrix& m);

// Two stages: CRS -> CCS, then CCS -> column-major COO.
CooMatrix crs_to_coo_col(const CrsMatrix& m);

std::uint64_t estimate_ell_bytes(const CrsMatrix& m, int value_bytes = 8,
                                 int index_bytes = 8);

// Refuses (ErrorCode::MemoryLimit) when the estimated footprint exceeds
// max_bytes; kNoByteLimit disables the guard.
EllMatrix crs_to_ell(const CrsMatrix& m, std::uint64_t max_bytes = kNoByteLimit);

// Both produce canonical CRS (columns ascending within rows).  coo_to_crs
// refuses duplicate (row, col) pairs; ell_to_crs drops exactly the padding
// slots using the per-row entry counts, never a value==0 test.
CrsMatrix coo_to_crs(const CooMatrix& m);
CrsMatrix ell_to_crs(const EllMatrix& m);

}  // namespace spmvtk
