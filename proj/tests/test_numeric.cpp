#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fanproj/numeric.hpp"

using namespace fanproj;

namespace {

IntVec iv(std::initializer_list<long long> xs) {
  IntVec v;
  for (long long x : xs) v.push_back(Int(x));
  return v;
}

// 3x3 determinant by direct cofactor expansion, independent of the
// fraction-free elimination under test.
Int det3(const std::vector<IntVec>& cols) {
  const auto a = [&](int r, int c) { return cols[c][r]; };
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

}  // namespace

TEST_CASE("primitive divides out the content") {
  CHECK(primitive(iv({2, 4, 6})) == std::make_pair(iv({1, 2, 3}), Int(2)));
  CHECK(primitive(iv({1, 0, 0})) == std::make_pair(iv({1, 0, 0}), Int(1)));
  CHECK(primitive(iv({-4, 6})) == std::make_pair(iv({-2, 3}), Int(2)));
  CHECK_THROWS_AS(primitive(iv({0, 0, 0})), ZeroVectorError);

  CHECK(is_primitive(iv({1, 2, 3})));
  CHECK_FALSE(is_primitive(iv({2, 4, 6})));

  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    IntVec v(3);
    bool zero = true;
    for (auto& x : v) {
      x = Int(static_cast<long long>(rng() % 11) - 5);
      zero = zero && x == 0;
    }
    if (zero) v[0] = 1;
    const auto [p, content] = primitive(v);
    CHECK(is_primitive(p));
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(p[i] * content == v[i]);
  }
}

TEST_CASE("pairing is the exact dot product") {
  CHECK(pairing(iv({0, 0, 1}), iv({0, 0, 1})) == 1);
  CHECK(pairing(iv({0, 0, 1}), iv({0, -1, -1})) == -1);
  CHECK(pairing(iv({3, -2, 5}), iv({0, 0, 0})) == 0);
  CHECK_THROWS_AS(pairing(iv({1, 0}), iv({1, 0, 0})), DimensionMismatchError);
}

TEST_CASE("determinant matches a cofactor oracle") {
  CHECK(determinant({iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1})}) == 1);
  CHECK(determinant({iv({-1, -1, -1}), iv({-1, -1, 0}), iv({0, -1, -1})}) == -1);
  CHECK(determinant({iv({1, 2}), iv({1, 2})}) == 0);
  CHECK_THROWS_AS(determinant({iv({1, 0, 0}), iv({0, 1, 0})}), DimensionMismatchError);

  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<IntVec> cols(3, IntVec(3));
    for (auto& col : cols)
      for (auto& x : col) x = Int(static_cast<long long>(rng() % 11) - 5);
    CHECK(determinant(cols) == det3(cols));
  }
}

TEST_CASE("solve_exact expresses the target in the column span") {
  const auto x = solve_exact({iv({1, 0, 0}), iv({-1, 0, -1})}, iv({0, 0, -1}));
  REQUIRE(x.has_value());
  CHECK(*x == RatVec{Rat(1), Rat(1)});

  const auto id = solve_exact({iv({1, 0}), iv({0, 1})}, iv({-7, 3}));
  REQUIRE(id.has_value());
  CHECK(*id == RatVec{Rat(-7), Rat(3)});

  const auto half = solve_exact({iv({2, 0})}, iv({1, 0}));
  REQUIRE(half.has_value());
  CHECK(*half == RatVec{Rat(1, 2)});

  CHECK_FALSE(solve_exact({iv({1, 0, 0}), iv({0, 1, 0})}, iv({0, 0, 1})).has_value());
  CHECK_THROWS_AS(solve_exact({iv({1, 2}), iv({2, 4})}, iv({1, 0})), DependentColumnsError);
}

TEST_CASE("solve_exact with a rational target") {
  const auto x = solve_exact({iv({1, 1}), iv({0, 2})}, RatVec{Rat(1, 2), Rat(3, 2)});
  REQUIRE(x.has_value());
  CHECK(*x == RatVec{Rat(1, 2), Rat(1, 2)});
}

TEST_CASE("lexicographic order compares coordinates left to right") {
  CHECK(lex_compare(iv({0, 0, -1}), iv({0, 1, 0})) < 0);
  CHECK(lex_compare(iv({0, 1, 0}), iv({0, 0, -1})) > 0);
  CHECK(lex_compare(iv({1, -1, 0}), iv({1, -1, 0})) == 0);
  CHECK(lex_compare(iv({-2, 5, 5}), iv({-1, 0, 0})) < 0);

  std::set<IntVec, LexLess> ordered{iv({1, 0, 0}), iv({0, 1, -1}), iv({0, 0, 1})};
  CHECK(*ordered.begin() == iv({0, 0, 1}));
}

TEST_CASE("rank of row sets") {
  CHECK(rank({iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1})}) == 3);
  CHECK(rank({iv({1, 2, 3}), iv({2, 4, 6})}) == 1);
  CHECK(rank({iv({1, 0}), iv({0, 1}), iv({1, 1})}) == 2);
  CHECK(rank({}) == 0);
}

TEST_CASE("to_string formats coordinate tuples") {
  CHECK(to_string(iv({0, -1, 0})) == "(0,-1,0)");
}
