#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "geofactor/cubic_factorizations.hpp"

using namespace geofactor;

namespace {

Projectivity random_projectivity(const ProjectiveSpace& space, std::mt19937& rng) {
  const std::int64_t q = space.q();
  while (true) {
    std::vector<std::vector<std::int64_t>> m(4, std::vector<std::int64_t>(4));
    for (auto& row : m)
      for (auto& x : row) x = static_cast<std::int64_t>(rng() % static_cast<std::uint32_t>(q));
    auto copy = m;
    if (linalg::rref(space.field(), copy) == 4) return make_projectivity(space, m);
  }
}

}  // namespace

TEST_CASE("canonical cubics") {
  SECTION("q=2: the three points (0:0:0:1), (1:1:1:1), (1:0:0:0)") {
    const TwistedCubic c = canonical_cubic(2);
    REQUIRE(c.point_set.size() == 3);
    const auto& space = *c.space;
    CHECK(c.point_at(0) == space.point_index({0, 0, 0, 1}));
    CHECK(c.point_at(1) == space.point_index({1, 1, 1, 1}));
    CHECK(c.point_at_infinity() == space.point_index({1, 0, 0, 0}));
  }
  SECTION("q=5: six points") { CHECK(canonical_cubic(5).point_set.size() == 6); }
  SECTION("q=3: four points, no three collinear") {
    const TwistedCubic c = canonical_cubic(3);
    REQUIRE(c.point_set.size() == 4);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) {
        CHECK(span_points(*c.space, {c.point_set[a], c.point_set[b]}).k == 1);
        for (std::size_t d = b + 1; d < 4; ++d)
          CHECK(span_points(*c.space, {c.point_set[a], c.point_set[b], c.point_set[d]}).k == 2);
      }
  }
}

TEST_CASE("induced parameter action") {
  SECTION("identity matrix induces the identity projectivity") {
    auto space = ProjectiveSpace::make(3, make_field(5, 1));
    const Projectivity g = induced_action(*space, {1, 0, 0, 1});
    CHECK(g == identity_projectivity(*space));
  }
  SECTION("t -> t+1 over GF(3) cycles the affine cubic points and fixes infinity") {
    const TwistedCubic c = canonical_cubic(3);
    const Projectivity g = induced_action(*c.space, {1, 1, 0, 1});
    CHECK(apply_projectivity(*c.space, g, c.point_at_infinity()) == c.point_at_infinity());
    for (std::int64_t t = 0; t < 3; ++t) {
      const std::int64_t t1 = c.space->field().add(t, 1);
      CHECK(apply_projectivity(*c.space, g, c.point_at(t)) == c.point_at(t1));
    }
  }
  SECTION("homomorphism and injectivity over all of PGL(2,5)") {
    auto space = ProjectiveSpace::make(3, make_field(5, 1));
    const Field& F = space->field();
    const TwistedCubic c = canonical_cubic(5);
    const auto reps = enumerate_pgl2(F);
    REQUIRE(reps.size() == 120);
    std::vector<Projectivity> induced;
    induced.reserve(reps.size());
    std::set<std::vector<std::vector<std::int64_t>>> distinct;
    for (const auto& m : reps) {
      induced.push_back(induced_action(*space, m));
      distinct.insert(induced.back().matrix);
      // the cubic is fixed setwise
      std::vector<int> img;
      for (int p : c.point_set) img.push_back(apply_projectivity(*space, induced.back(), p));
      std::sort(img.begin(), img.end());
      CHECK(img == c.point_set);
    }
    CHECK(distinct.size() == 120);
    // induced(M * N) == compose(induced(M), induced(N)) on a deterministic sample
    std::mt19937 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
      const auto& M = reps[rng() % reps.size()];
      const auto& N = reps[rng() % reps.size()];
      const std::array<std::int64_t, 4> MN{
          F.add(F.mul(M[0], N[0]), F.mul(M[1], N[2])), F.add(F.mul(M[0], N[1]), F.mul(M[1], N[3])),
          F.add(F.mul(M[2], N[0]), F.mul(M[3], N[2])), F.add(F.mul(M[2], N[1]), F.mul(M[3], N[3]))};
      CHECK(induced_action(*space, MN) ==
            compose(*space, induced_action(*space, M), induced_action(*space, N)));
    }
  }
  SECTION("singular parameter matrices are rejected") {
    auto space = ProjectiveSpace::make(3, make_field(5, 1));
    CHECK_THROWS_AS(induced_action(*space, {2, 4, 1, 2}), std::invalid_argument);
  }
}

TEST_CASE("stabilizer reports") {
  SECTION("q=5: order 120, sharply 3-transitive") {
    const auto rep = stabilizer_report(canonical_cubic(5));
    CHECK(rep.group_order == 120);
    CHECK(rep.induced_distinct == 120);
    CHECK(rep.fixes_cubic);
    CHECK(rep.ordered_triples_reached == 120);
    CHECK(rep.sharply_three_transitive);
  }
  SECTION("q=4: order 60 acting 3-transitively on 5 points") {
    const auto rep = stabilizer_report(canonical_cubic(4));
    CHECK(rep.group_order == 60);
    CHECK(rep.induced_distinct == 60);
    CHECK(rep.fixes_cubic);
    CHECK(rep.ordered_triples_reached == 60);  // 5*4*3
    CHECK(rep.sharply_three_transitive);
  }
  SECTION("q=2: order 6 acting as S_3 on 3 points") {
    const auto rep = stabilizer_report(canonical_cubic(2));
    CHECK(rep.group_order == 6);
    CHECK(rep.induced_distinct == 6);
    CHECK(rep.ordered_triples_reached == 6);
    CHECK(rep.sharply_three_transitive);
  }
}

TEST_CASE("cubic counting identities") {
  SECTION("q=5 closed forms") {
    const auto cc = cubic_counts(5);
    CHECK(cc.num_cubics == 241800000);
    CHECK(cc.c_ell == 7800000);
    CHECK(cc.orbit_stabilizer_ok);
    CHECK(cc.quotient_identity_ok);
    CHECK(cc.within_hypothesis);
  }
  SECTION("exact identities for all prime powers 5 <= q <= 49") {
    for (std::int64_t q : {5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49}) {
      const auto cc = cubic_counts(q);
      CHECK(cc.orbit_stabilizer_ok);
      CHECK(cc.quotient_identity_ok);
      // c_ell * |lines| == num_cubics * |lines per spread|
      const BigInt Q = q;
      CHECK(cc.c_ell * ((Q * Q + 1) * (Q * Q + Q + 1)) == cc.num_cubics * (Q * Q + 1));
    }
  }
  SECTION("q < 5 computes but is flagged outside the hypothesis") {
    CHECK_FALSE(cubic_counts(3).within_hypothesis);
    CHECK_FALSE(cubic_counts(2).within_hypothesis);
  }
}

TEST_CASE("cubic spreads") {
  SECTION("q=2: 5 lines with signature (3,1,1)") {
    const TwistedCubic c = canonical_cubic(2);
    const auto lines = SubspaceFamily::build(c.space, 1);
    const CubicSpread s = cubic_spread(lines, c);
    CHECK(s.members.size() == 5);
    CHECK(s.signature() == std::array<int, 3>{3, 1, 1});
    CHECK_FALSE(verify_spread(lines, s.members).has_value());
  }
  SECTION("q=5: 26 lines with signature (6,10,10)") {
    const TwistedCubic c = canonical_cubic(5);
    const auto lines = SubspaceFamily::build(c.space, 1);
    const CubicSpread s = cubic_spread(lines, c);
    CHECK(s.members.size() == 26);
    CHECK(s.signature() == std::array<int, 3>{6, 10, 10});
    CHECK_FALSE(verify_spread(lines, s.members).has_value());
  }
  SECTION("q=8: 65 lines with signature (9,28,28)") {
    const TwistedCubic c = canonical_cubic(8);
    const auto lines = SubspaceFamily::build(c.space, 1);
    const CubicSpread s = cubic_spread(lines, c);
    CHECK(s.members.size() == 65);
    CHECK(s.signature() == std::array<int, 3>{9, 28, 28});
    CHECK_FALSE(verify_spread(lines, s.members).has_value());
  }
  SECTION("q=3 is rejected: gcd(4,3) = 1") {
    const TwistedCubic c = canonical_cubic(3);
    const auto lines = SubspaceFamily::build(c.space, 1);
    CHECK_THROWS_AS(cubic_spread(lines, c), std::invalid_argument);
  }
}

TEST_CASE("cubic factors") {
  SECTION("q=2: 5 disjoint triangles on the 15 points") {
    const TwistedCubic c = canonical_cubic(2);
    const auto lines = SubspaceFamily::build(c.space, 1);
    const Factor f = cubic_factor(lines, cubic_spread(lines, c));
    CHECK(f.v == 15);
    CHECK(f.m == 2);
    CHECK(f.components.size() == 5);
    CHECK_FALSE(verify_factor(f).has_value());
  }
  SECTION("q=5: 26 disjoint K_6 on the 156 points") {
    const TwistedCubic c = canonical_cubic(5);
    const auto lines = SubspaceFamily::build(c.space, 1);
    const Factor f = cubic_factor(lines, cubic_spread(lines, c));
    CHECK(f.v == 156);
    CHECK(f.m == 5);
    CHECK(f.components.size() == 26);
    CHECK_FALSE(verify_factor(f).has_value());
  }
}

TEST_CASE("distinct cubics induce distinct spreads for q = 5 (sampled)") {
  // The injectivity claim lives inside the theorem with hypothesis q >= 5;
  // see below for what happens at q = 2.
  auto space = ProjectiveSpace::make(3, make_field(5, 1));
  const auto lines = SubspaceFamily::build(space, 1);
  std::mt19937 rng(46);
  int tested = 0;
  while (tested < 30) {
    const TwistedCubic c1 = make_twisted_cubic(space, random_projectivity(*space, rng));
    const TwistedCubic c2 = make_twisted_cubic(space, random_projectivity(*space, rng));
    if (c1.point_set == c2.point_set) continue;
    const CubicSpread s1 = cubic_spread(lines, c1);
    const CubicSpread s2 = cubic_spread(lines, c2);
    CHECK(s1.members != s2.members);
    // distinct spreads give distinct factors
    CHECK(cubic_factor(lines, s1).components != cubic_factor(lines, s2).components);
    ++tested;
  }
}

TEST_CASE("at q = 2 the cubic-to-spread map cannot be injective") {
  // Exhaust the PGL(4,2) orbit of the canonical cubic: the point sets are
  // exactly the 420 non-collinear triples, but they induce only 52 distinct
  // spreads (out of the 56 spreads of PG(3,2)), so distinct cubics sharing a
  // spread exist.  Derived by full enumeration.
  auto space = ProjectiveSpace::make(3, make_field(2, 1));
  const auto lines = SubspaceFamily::build(space, 1);
  std::set<std::vector<int>> cubic_sets;
  std::set<std::vector<int>> spreads;
  std::vector<std::int64_t> cells(16, 0);
  while (true) {
    std::vector<std::vector<std::int64_t>> m(4, std::vector<std::int64_t>(4));
    for (int i = 0; i < 16; ++i) m[static_cast<std::size_t>(i / 4)][static_cast<std::size_t>(i % 4)] = cells[static_cast<std::size_t>(i)];
    auto copy = m;
    if (linalg::rref(space->field(), copy) == 4) {
      const TwistedCubic c = make_twisted_cubic(space, make_projectivity(*space, m));
      if (!cubic_sets.count(c.point_set)) {
        cubic_sets.insert(c.point_set);
        spreads.insert(cubic_spread(lines, c).members);
      }
    }
    std::size_t pos = 0;
    for (; pos < cells.size(); ++pos) {
      if (++cells[pos] < 2) break;
      cells[pos] = 0;
    }
    if (pos == cells.size()) break;
  }
  CHECK(cubic_sets.size() == 420);
  CHECK(spreads.size() == 52);
}
