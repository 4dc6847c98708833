#include <doctest.h>

#include <random>

#include "spmvtk/convert.hpp"
#include "spmvtk/error.hpp"
#include "test_support.hpp"

using namespace spmvtk;
using testsup::crs;

namespace {

// independent oracle: CCS of A must match the dense transpose read row-wise
CcsMatrix ccs_via_dense_transpose(const CrsMatrix& m) {
  DenseMatrix d = dense_from_crs(m);
  CcsMatrix out;
  out.n = m.n;
  out.col_ptr.push_back(1);
  for (index_t j = 1; j <= m.n; ++j) {
    for (index_t i = 1; i <= m.n; ++i)
      if (d.at(i, j) != 0.0) {
        out.values.push_back(d.at(i, j));
        out.row_idx.push_back(i);
      }
    out.col_ptr.push_back(static_cast<index_t>(out.values.size()) + 1);
  }
  return out;
}

}  // namespace

TEST_CASE("crs_to_coo_row") {
  SUBCASE("identity") {
    CooMatrix c = crs_to_coo_row(testsup::identity(2));
    CHECK(c.row_idx == std::vector<index_t>{1, 2});
    CHECK(c.col_idx == std::vector<index_t>{1, 2});
    CHECK(c.values == std::vector<double>{1, 1});
    CHECK(c.ordering == CooOrdering::RowMajor);
  }
  SUBCASE("expanded row pointers") {
    CrsMatrix m = crs(2, {2.0, 3.0, 4.0}, {1, 2, 2}, {1, 3, 4});
    CooMatrix c = crs_to_coo_row(m);
    CHECK(c.row_idx == std::vector<index_t>{1, 1, 2});
  }
  SUBCASE("empty") {
    CrsMatrix m = crs(3, {}, {}, {1, 1, 1, 1});
    CHECK(crs_to_coo_row(m).nnz() == 0);
  }
}

TEST_CASE("crs_to_ccs") {
  SUBCASE("by hand") {
    CrsMatrix m = crs(2, {2.0, 3.0, 4.0}, {1, 2, 2}, {1, 3, 4});
    CcsMatrix c = crs_to_ccs(m);
    CHECK(c.values == std::vector<double>{2.0, 3.0, 4.0});
    CHECK(c.row_idx == std::vector<index_t>{1, 1, 2});
    CHECK(c.col_ptr == std::vector<index_t>{1, 2, 4});
  }
  SUBCASE("identity mirrors itself") {
    CcsMatrix c = crs_to_ccs(testsup::identity(3));
    CHECK(c.col_ptr == std::vector<index_t>{1, 2, 3, 4});
    CHECK(c.row_idx == std::vector<index_t>{1, 2, 3});
  }
  SUBCASE("dense-transpose oracle on random matrices") {
    std::mt19937_64 rng(3);
    for (int it = 0; it < 30; ++it) {
      CrsMatrix m = testsup::random_crs(rng, 40, 300);
      CcsMatrix got = crs_to_ccs(m);
      CcsMatrix want = ccs_via_dense_transpose(m);
      CHECK(got.col_ptr == want.col_ptr);
      CHECK(got.row_idx == want.row_idx);
      CHECK(got.values == want.values);
      CHECK(validate(got).empty());
    }
  }
}

TEST_CASE("crs_to_coo_col composes the two phases") {
  CrsMatrix m = crs(2, {2.0, 3.0, 4.0}, {1, 2, 2}, {1, 3, 4});
  CooMatrix c = crs_to_coo_col(m);
  CHECK(c.col_idx == std::vector<index_t>{1, 2, 2});
  CHECK(c.row_idx == std::vector<index_t>{1, 1, 2});
  CHECK(c.values == std::vector<double>{2.0, 3.0, 4.0});
  CHECK(c.ordering == CooOrdering::ColMajor);
}

TEST_CASE("crs_to_ell") {
  SUBCASE("by-hand fill with padding") {
    CrsMatrix m = crs(2, {5.0, 6.0, 7.0}, {1, 2, 1}, {1, 3, 4});
    EllMatrix e = crs_to_ell(m);
    CHECK(e.band_count == 2);
    CHECK(e.values == std::vector<double>{5.0, 7.0, 6.0, 0.0});
    CHECK(e.col_idx == std::vector<index_t>{1, 1, 2, 2});
    CHECK(e.stored_nnz == 3);
    CHECK(validate(e).empty());
  }
  SUBCASE("constant bandwidth has zero padding") {
    CrsMatrix m;
    m.n = 5;
    m.row_ptr.push_back(1);
    for (index_t i = 1; i <= 5; ++i) {
      // wrap so every row has exactly 3 entries
      for (index_t off = 0; off < 3; ++off) {
        m.col_idx.push_back(1 + (i - 1 + off) % 5);
        m.values.push_back(1.0);
      }
      m.row_ptr.push_back(m.nnz() + 1);
    }
    EllMatrix e = crs_to_ell(m);
    CHECK(e.band_count == 3);
    CHECK(e.stored_nnz == 5 * 3);
    CHECK(validate(e).empty());
  }
  SUBCASE("footprint guard refuses a torso1-like shape") {
    CrsMatrix m;
    m.n = 10000;
    m.row_ptr.push_back(1);
    for (index_t j = 1; j <= 5000; ++j) {
      m.col_idx.push_back(j);
      m.values.push_back(1.0);
    }
    m.row_ptr.push_back(m.nnz() + 1);
    for (index_t i = 2; i <= m.n; ++i) m.row_ptr.push_back(m.nnz() + 1);
    CHECK_THROWS_WITH_AS(crs_to_ell(m, 100ull << 20),
                         doctest::Contains("exceeds limit"), Error);
  }
}

TEST_CASE("estimate_ell_bytes") {
  CrsMatrix m = crs(2, {5.0, 6.0, 7.0}, {1, 2, 1}, {1, 3, 4});
  CHECK(estimate_ell_bytes(m, 8, 4) == 48);
  CrsMatrix empty = crs(3, {}, {}, {1, 1, 1, 1});
  CHECK(estimate_ell_bytes(empty) == 0);
}

TEST_CASE("coo_to_crs refuses duplicates") {
  CooMatrix c;
  c.n = 2;
  c.values = {1.0, 2.0};
  c.row_idx = {1, 1};
  c.col_idx = {1, 1};
  CHECK_THROWS_WITH_AS(coo_to_crs(c), doctest::Contains("duplicate"), Error);
}

TEST_CASE("round trips reproduce the canonical matrix") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 40; ++it) {
    CrsMatrix m = testsup::random_crs(rng, 40, 300);
    CrsMatrix canon = canonicalize(m);
    CHECK(structurally_equal(coo_to_crs(crs_to_coo_row(m)), canon));
    CHECK(structurally_equal(coo_to_crs(crs_to_coo_col(m)), canon));
    CHECK(structurally_equal(ell_to_crs(crs_to_ell(m)), canon));
  }
}

TEST_CASE("ell_to_crs keeps explicit zeros") {
  // explicit stored zero at (1,2); bookkeeping, not a value test, decides
  // what is padding
  CrsMatrix m = crs(2, {5.0, 0.0, 7.0}, {1, 2, 1}, {1, 3, 4});
  CrsMatrix back = ell_to_crs(crs_to_ell(m));
  CHECK(back.nnz() == 3);
  CHECK(structurally_equal(back, canonicalize(m)));
}

TEST_CASE("transpose involution") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 20; ++it) {
    CrsMatrix m = testsup::random_crs(rng, 30, 200);
    CcsMatrix ccs = crs_to_ccs(m);
    // reinterpret the CCS of A as the CRS of A^T, transpose again
    CrsMatrix as_crs = crs(ccs.n, ccs.values, ccs.row_idx, ccs.col_ptr);
    CcsMatrix twice = crs_to_ccs(as_crs);
    CrsMatrix back = crs(twice.n, twice.values, twice.row_idx, twice.col_ptr);
    CHECK(structurally_equal(back, canonicalize(m)));
  }
}
