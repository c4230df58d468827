#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "geofactor/affine_constructions.hpp"
#include "geofactor/factorization.hpp"

using namespace geofactor;

namespace {

Factor k8_two_quads() {
  Factor f;
  f.v = 8;
  f.m = 3;
  f.components = {{0, 1, 2, 3}, {4, 5, 6, 7}};
  return f;
}

}  // namespace

TEST_CASE("verify_factor") {
  SECTION("K_8 split into two disjoint 4-sets, m = 3") {
    CHECK_FALSE(verify_factor(k8_two_quads()).has_value());
  }
  SECTION("overlapping components carry a witness vertex") {
    Factor f = k8_two_quads();
    f.components[1][0] = 3;
    const auto bad = verify_factor(f);
    REQUIRE(bad.has_value());
    CHECK(bad->message.find("3") != std::string::npos);
  }
  SECTION("15 vertices in 5 triples, m = 2 (Kirkman class shape)") {
    Factor f;
    f.v = 15;
    f.m = 2;
    for (int c = 0; c < 5; ++c) f.components.push_back({3 * c, 3 * c + 1, 3 * c + 2});
    CHECK_FALSE(verify_factor(f).has_value());
  }
  SECTION("uncovered vertex") {
    Factor f = k8_two_quads();
    f.components.pop_back();
    const auto bad = verify_factor(f);
    REQUIRE(bad.has_value());
    CHECK(bad->message.find("uncovered") != std::string::npos);
  }
}

TEST_CASE("verify_factorization") {
  const auto af = build_affine_factorization(3, 2, 2);
  Factorization phi = af.factorization;
  SECTION("the 7 plane-classes of AG(3,2) are a 3-factorization of 3K_8") {
    CHECK_FALSE(verify_factorization(phi).has_value());
  }
  SECTION("dropping one factor leaves pairs under-covered") {
    phi.factors.pop_back();
    const auto bad = verify_factorization(phi);
    REQUIRE(bad.has_value());
    CHECK(bad->message.find("covered") != std::string::npos);
  }
  SECTION("counting identity lambda v (v-1) = f m v") {
    // each factor contributes v*m/2 edges; lambda * C(v,2) = f * v * m / 2
    const std::int64_t lhs = static_cast<std::int64_t>(phi.lambda) * phi.v * (phi.v - 1);
    const std::int64_t rhs = static_cast<std::int64_t>(phi.factors.size()) * phi.v * phi.m;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("simplicity") {
  auto phi = build_affine_factorization(3, 2, 2).factorization;
  CHECK(is_simple(phi));
  phi.factors.push_back(phi.factors.front());
  CHECK_FALSE(is_simple(phi));
}

TEST_CASE("relabeling invariance of verification") {
  auto phi = build_affine_factorization(3, 2, 2).factorization;
  std::mt19937 rng(11);
  std::vector<int> perm(static_cast<std::size_t>(phi.v));
  std::iota(perm.begin(), perm.end(), 0);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    Factorization relabeled = phi;
    for (auto& f : relabeled.factors) {
      for (auto& comp : f.components)
        for (auto& x : comp) x = perm[static_cast<std::size_t>(x)];
      f = canonical_factor(std::move(f));
    }
    CHECK_FALSE(verify_factorization(relabeled).has_value());
  }
}

TEST_CASE("decomposition search on the 3K_8 one-factorizations") {
  const Factorization gp = build_3k8_variant(K8Variant::g_prime);
  const Factorization m = build_3k8_variant(K8Variant::m);
  const Factorization g = one_factorization_G(3);

  SECTION("G' is decomposable with witness a copy of G") {
    const auto verdict = decomposition_search(gp, 1);
    REQUIRE(verdict.decomposable);
    REQUIRE(verdict.witness.has_value());
    CHECK(verdict.witness->size() == 7);
    // the witness factors are exactly G up to canonical form
    std::vector<std::vector<std::vector<int>>> witness_forms, g_forms;
    for (int idx : *verdict.witness) witness_forms.push_back(canonical_factor(gp.factors[static_cast<std::size_t>(idx)]).components);
    for (const auto& f : g.factors) g_forms.push_back(canonical_factor(f).components);
    std::sort(witness_forms.begin(), witness_forms.end());
    std::sort(g_forms.begin(), g_forms.end());
    CHECK(witness_forms == g_forms);
    // the complement verifies as a factorization of (lambda - 1) K_8
    Factorization rest = gp;
    rest.lambda = 2;
    std::vector<bool> used(gp.factors.size(), false);
    for (int idx : *verdict.witness) used[static_cast<std::size_t>(idx)] = true;
    rest.factors.clear();
    for (std::size_t i = 0; i < gp.factors.size(); ++i)
      if (!used[i]) rest.factors.push_back(gp.factors[i]);
    CHECK_FALSE(verify_factorization(rest).has_value());
  }
  SECTION("M is indecomposable by exhaustive search") {
    for (int mu1 : {1, 2}) {
      const auto verdict = decomposition_search(m, mu1);
      CHECK_FALSE(verdict.decomposable);
      CHECK(verdict.exhausted);
      CHECK(verdict.nodes <= 116280);  // C(21,7)
    }
    const auto full = full_decomposition_search(m);
    CHECK_FALSE(full.decomposable);
    CHECK(full.exhausted);
  }
  SECTION("complement symmetry: mu1 and lambda - mu1 agree") {
    for (const Factorization* phi : {&gp, &m}) {
      const bool d1 = decomposition_search(*phi, 1).decomposable;
      const bool d2 = decomposition_search(*phi, 2).decomposable;
      CHECK(d1 == d2);
    }
  }
  SECTION("lambda = 1 admits no valid mu1") {
    CHECK_THROWS_AS(decomposition_search(g, 1), std::invalid_argument);
    const auto verdict = full_decomposition_search(g);
    CHECK_FALSE(verdict.decomposable);
    CHECK(verdict.exhausted);
  }
  SECTION("node guard reports inconclusive, never a silent answer") {
    const auto verdict = decomposition_search(m, 1, 5);
    CHECK_FALSE(verdict.decomposable);
    CHECK_FALSE(verdict.exhausted);
    CHECK(verdict.inconclusive());
  }
}

TEST_CASE("certificate JSON round trip") {
  Factorization phi = build_affine_factorization(3, 2, 2).factorization;
  const nlohmann::json j = to_json(phi);
  CHECK(j.at("v") == 8);
  CHECK(j.at("lambda") == 3);
  CHECK(j.at("m") == 3);
  CHECK(j.at("labels").size() == 8);
  const Factorization back = factorization_from_json(j);
  CHECK_FALSE(verify_factorization(back).has_value());
  CHECK(to_json(back) == j);
  // canonical: factors sorted
  for (std::size_t i = 1; i < phi.factors.size(); ++i)
    CHECK(phi.factors[i - 1].components < phi.factors[i].components);
}
