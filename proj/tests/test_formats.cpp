#include <doctest.h>

#include <random>

#include "spmvtk/error.hpp"
#include "spmvtk/formats.hpp"
#include "test_support.hpp"

using namespace spmvtk;
using testsup::crs;

TEST_CASE("validate accepts the 2x2 identity") {
  CrsMatrix m = crs(2, {1, 1}, {1, 2}, {1, 2, 3});
  CHECK(validate(m).empty());
}

TEST_CASE("validate flags a non-monotone row pointer") {
  CrsMatrix m = crs(3, {1, 1}, {1, 2}, {1, 3, 2, 3});
  auto v = validate(m);
  REQUIRE(!v.empty());
  CHECK(v.front().find("nondecreasing") != std::string::npos);
}

TEST_CASE("validate flags an out-of-range column index") {
  CrsMatrix m = crs(2, {1, 1}, {1, 5}, {1, 2, 3});
  auto v = validate(m);
  REQUIRE(!v.empty());
  CHECK(v.front().find("out of range") != std::string::npos);
}

TEST_CASE("validate flags duplicate columns within a row") {
  CrsMatrix m = crs(2, {1, 1}, {2, 2}, {1, 3, 3});
  CHECK(!validate(m).empty());
}

TEST_CASE("row_histogram") {
  SUBCASE("identity") {
    auto h = row_histogram(testsup::identity(2));
    CHECK(h.counts == std::vector<index_t>{1, 1});
  }
  SUBCASE("pointer differences") {
    CrsMatrix m = crs(3, {1, 2, 3}, {1, 2, 2}, {1, 3, 4, 4});
    CHECK(row_histogram(m).counts == std::vector<index_t>{2, 1, 0});
  }
  SUBCASE("empty matrix") {
    CrsMatrix m = crs(3, {}, {}, {1, 1, 1, 1});
    CHECK(row_histogram(m).counts == std::vector<index_t>{0, 0, 0});
  }
}

TEST_CASE("dense bridge") {
  SUBCASE("by-hand 2x2") {
    DenseMatrix d;
    d.n = 2;
    d.entries = {0, 2, 3, 0};
    CrsMatrix m = crs_from_dense(d);
    CHECK(m.values == std::vector<double>{2, 3});
    CHECK(m.col_idx == std::vector<index_t>{2, 1});
    CHECK(m.row_ptr == std::vector<index_t>{1, 2, 3});
  }
  SUBCASE("all-zero dense") {
    DenseMatrix d;
    d.n = 2;
    d.entries = {0, 0, 0, 0};
    CrsMatrix m = crs_from_dense(d);
    CHECK(m.nnz() == 0);
    CHECK(m.row_ptr == std::vector<index_t>{1, 1, 1});
  }
  SUBCASE("round trip equals canonical form") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 20; ++it) {
      CrsMatrix m = testsup::random_crs(rng, 30, 200);
      CrsMatrix back = crs_from_dense(dense_from_crs(m));
      CHECK(structurally_equal(back, canonicalize(m)));
    }
  }
  SUBCASE("oracle cap is enforced") {
    CrsMatrix m;
    m.n = kDenseOracleCap + 1;
    m.row_ptr.assign(static_cast<std::size_t>(m.n) + 1, 1);
    CHECK_THROWS_AS(dense_from_crs(m), Error);
  }
}

TEST_CASE("row_histogram sums to nnz on random matrices") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 50; ++it) {
    CrsMatrix m = testsup::random_crs(rng, 50, 400);
    REQUIRE(validate(m).empty());
    auto h = row_histogram(m);
    index_t sum = 0;
    for (index_t c : h.counts) sum += c;
    CHECK(sum == m.nnz());
  }
}
