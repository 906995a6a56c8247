#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fanproj/fanproj.hpp"

using namespace fanproj;

namespace {

IntVec iv(std::initializer_list<long long> xs) {
  IntVec v;
  for (long long x : xs) v.push_back(Int(x));
  return v;
}

std::vector<LatticeVector> rays2(std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<LatticeVector> out;
  for (const auto& r : rows) out.push_back(iv(r));
  return out;
}

}  // namespace

TEST_CASE("make_fan enforces the structural invariants") {
  CHECK_THROWS_AS(make_fan(2, rays2({{2, 4}, {0, 1}, {-1, -1}}), {{0, 1}}), InvariantViolation);
  CHECK_THROWS_AS(make_fan(2, rays2({{1, 0}, {1, 0}}), {{0, 1}}), InvariantViolation);
  CHECK_THROWS_AS(make_fan(2, rays2({{1, 0}, {0, 0}}), {{0, 1}}), InvariantViolation);
  CHECK_THROWS_AS(make_fan(3, rays2({{1, 0, 0}, {0, 1, 0}}), {{0, 1}}), InvariantViolation);
  CHECK_THROWS_AS(make_fan(2, rays2({{1, 0}, {0, 1}}), {{1, 0}}), InvariantViolation);
  CHECK_THROWS_AS(make_fan(2, rays2({{1, 0}, {0, 1}}), {{0, 2}}), InvariantViolation);
  CHECK_THROWS_AS(make_fan(2, rays2({{1, 0}, {0, 1}}), {{0, 0}}), InvariantViolation);
  CHECK_THROWS_AS(make_fan(2, rays2({{1, 0}, {0, 1}}), {{0, 1}, {0, 1}}), InvariantViolation);
  CHECK_THROWS_AS(make_fan(1, rays2({{1}}), {{0}}), InvariantViolation);
}

TEST_CASE("every builtin fan validates smooth, complete, and a fan") {
  for (const std::string& name : builtin_names()) {
    const ValidationReport report = validate_fan(builtin(name));
    INFO(name);
    CHECK(report.smooth);
    CHECK(report.complete);
    CHECK(report.is_fan);
  }
}

TEST_CASE("a weighted projective plane is complete but not smooth") {
  const Fan f = make_fan(2, rays2({{1, 0}, {0, 1}, {-1, -2}}), {{0, 1}, {0, 2}, {1, 2}});
  const ValidationReport report = validate_fan(f);
  CHECK_FALSE(report.smooth);
  CHECK(report.complete);
  CHECK(report.is_fan);
}

TEST_CASE("overlapping cones violate the fan axioms") {
  const Fan f = make_fan(2, rays2({{1, 0}, {0, 1}, {1, 1}}), {{0, 1}, {0, 2}});
  const ValidationReport report = validate_fan(f);
  CHECK(report.smooth);
  CHECK_FALSE(report.is_fan);
  CHECK_FALSE(report.complete);
}

TEST_CASE("a punctured fan is not complete") {
  const Fan p2 = builtin("p2");
  const Fan punctured = make_fan(2, p2.rays, {{0, 1}, {0, 2}});
  const ValidationReport report = validate_fan(punctured);
  CHECK(report.smooth);
  CHECK_FALSE(report.complete);
  CHECK_THROWS_AS(walls(punctured), IncompleteFanError);
}

TEST_CASE("two_cones enumerates distinct pairs inside maximal cones") {
  CHECK(two_cones(builtin("oda75")).size() == 15);
  CHECK(two_cones(builtin("p2")).size() == 3);
  const Fan p1p1 = builtin("p1p1");
  const auto pairs = two_cones(p1p1);
  REQUIRE(pairs.size() == 4);
  for (const auto& [i, j] : pairs) CHECK(i < j);
}

TEST_CASE("walls pair each codimension-one face with its two sides") {
  const Fan oda = builtin("oda75");
  const auto ws = walls(oda);
  REQUIRE(ws.size() == 15);
  bool found = false;
  for (const Wall& w : ws) {
    CHECK(w.side_a < w.side_b);
    if (w.ray_indices == std::vector<int>{0, 6}) {
      found = true;
      CHECK(w.side_a == 1);
      CHECK(w.side_b == 5);
    }
    // The side generators sit strictly on opposite sides of the wall.
    const Covector m = wall_normal(oda, w.ray_indices);
    CHECK(pairing(m, oda.rays[w.side_a]) * pairing(m, oda.rays[w.side_b]) < 0);
  }
  CHECK(found);

  CHECK(walls(builtin("p1p1")).size() == 4);
}

TEST_CASE("wall relations reproduce the oda75 identities") {
  const Fan oda = builtin("oda75");
  for (const Wall& w : walls(oda)) {
    const WallRelation rel = wall_relation(oda, w);
    // v2 + v6 = v1 + v7 and v3 + v7 = v2 + v5.
    if (w.ray_indices == std::vector<int>{0, 6})
      CHECK(rel.coeffs == std::vector<Int>{Int(1), Int(1)});
    if (w.ray_indices == std::vector<int>{1, 4})
      CHECK(rel.coeffs == std::vector<Int>{Int(1), Int(1)});
    // Independent identity check by pairing with random covectors.
    std::mt19937 rng(97);
    for (int t = 0; t < 3; ++t) {
      Covector m(3);
      for (auto& x : m) x = Int(static_cast<long long>(rng() % 21) - 10);
      Int lhs = pairing(m, oda.rays[w.side_a]) + pairing(m, oda.rays[w.side_b]);
      for (std::size_t i = 0; i < rel.coeffs.size(); ++i)
        lhs -= rel.coeffs[i] * pairing(m, oda.rays[w.ray_indices[i]]);
      CHECK(lhs == 0);
    }
  }
}

TEST_CASE("opposite rays give a zero wall-relation coefficient") {
  const Fan p1p1 = builtin("p1p1");
  for (const Wall& w : walls(p1p1)) {
    if (w.ray_indices != std::vector<int>{0}) continue;
    const WallRelation rel = wall_relation(p1p1, w);
    CHECK(rel.coeffs == std::vector<Int>{Int(0)});
  }
}

TEST_CASE("wall_relation rejects a non-smooth side cone") {
  const Fan f = make_fan(2, rays2({{1, 0}, {0, 1}, {-1, -2}}), {{0, 1}, {0, 2}, {1, 2}});
  for (const Wall& w : walls(f))
    if (w.ray_indices == std::vector<int>{0})
      CHECK_THROWS_AS(wall_relation(f, w), NonIntegralRelationError);
}

TEST_CASE("f-vectors of the corpus") {
  CHECK(f_vector(builtin("oda75")).counts == std::vector<long long>{7, 15, 10});
  CHECK(f_vector(builtin("p2")).counts == std::vector<long long>{3, 3});
  CHECK(f_vector(builtin("p1p1")).counts == std::vector<long long>{4, 4});
  CHECK(f_vector(builtin("p1p1p1")).counts == std::vector<long long>{6, 12, 8});
  CHECK(f_vector(builtin("p3")).counts == std::vector<long long>{4, 6, 4});
  CHECK(f_vector(builtin("hexagon")).counts == std::vector<long long>{6, 6});

  // Euler relation for complete simplicial 3-fans.
  for (const char* name : {"oda75", "p1p1p1", "p3"}) {
    const auto f = f_vector(builtin(name)).counts;
    CHECK(f[0] - f[1] + f[2] == 2);
  }
}

TEST_CASE("star subdivision splits exactly the cones containing the pair") {
  const Fan oda = builtin("oda75");
  const auto [sub, s_idx] = star_subdivide(oda, 2, 5);
  CHECK(s_idx == 7);
  CHECK(sub.rays.back() == iv({0, -1, 0}));
  CHECK(sub.rays.size() == 8);
  CHECK(sub.maxcones.size() == 12);
  const ValidationReport report = validate_fan(sub);
  CHECK(report.smooth);
  CHECK(report.complete);
  CHECK(report.is_fan);

  const Fan p2 = builtin("p2");
  const auto [sub2, s2] = star_subdivide(p2, 1, 2);
  CHECK(sub2.rays[s2] == iv({-1, 0}));
  CHECK(sub2.maxcones.size() == 4);
  CHECK(validate_fan(sub2).all_pass());
}

TEST_CASE("star subdivision rejects pairs that span no two-cone") {
  const Fan p1p1 = builtin("p1p1");
  CHECK_THROWS_AS(star_subdivide(p1p1, 0, 2), NotATwoConeError);
  CHECK_THROWS_AS(star_subdivide(p1p1, 0, 0), NotATwoConeError);
  CHECK_THROWS_AS(star_subdivide(p1p1, 0, 9), NotATwoConeError);

  const Fan p2 = builtin("p2");
  const auto [sub, s_idx] = star_subdivide(p2, 0, 1);
  CHECK(s_idx == 3);
  CHECK_THROWS_AS(star_subdivide(sub, 0, 1), NotATwoConeError);
}

TEST_CASE("star subdivision refuses to duplicate an existing ray") {
  // Structurally valid but axiom-violating input: (1,1) already lies in
  // the two-cone being subdivided.
  const Fan f = make_fan(2, rays2({{1, 0}, {0, 1}, {1, 1}}), {{0, 1}});
  CHECK_THROWS_AS(star_subdivide(f, 0, 1), InvariantViolation);
}

TEST_CASE("cone membership is decided exactly") {
  const Fan p2 = builtin("p2");
  CHECK(cone_contains(p2, {0, 1}, iv({3, 2})));
  CHECK(cone_contains(p2, {0, 1}, iv({1, 0})));   // boundary
  CHECK(cone_contains(p2, {0, 1}, iv({0, 0})));   // apex
  CHECK_FALSE(cone_contains(p2, {0, 1}, iv({-1, 2})));
  CHECK_FALSE(cone_contains(p2, {0, 1}, iv({-1, -1})));
}

TEST_CASE("refinement is exact containment of maximal cones") {
  const Fan p2 = builtin("p2");
  const Fan hexagon = builtin("hexagon");
  CHECK(refines(hexagon, p2));
  CHECK_FALSE(refines(p2, hexagon));
  CHECK(refines(p2, p2));

  const auto [sub, s_idx] = star_subdivide(p2, 0, 1);
  CHECK(refines(sub, p2));
  CHECK_FALSE(refines(p2, sub));
}

TEST_CASE("skipping the axiom check is recorded in the diagnostics") {
  ValidateOptions opts;
  opts.check_fan_axioms = false;
  const ValidationReport report = validate_fan(builtin("p3"), opts);
  CHECK(report.all_pass());
  REQUIRE_FALSE(report.diagnostics.empty());
  CHECK(report.diagnostics.back().find("skipped") != std::string::npos);
}
