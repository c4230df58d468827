#pragma once

// m-factors and m-factorizations of the complete multigraph lambda*K_v.
//
// Factors are restricted to the clique-component shape: an m-factor is a
// partition of the vertex set into components of size m+1, read as cliques
// K_{m+1}.  A factorization covers every vertex pair exactly lambda times.
// Canonical form (sorted vertices, sorted components, sorted factors) makes
// set equality representation equality, which is what the simplicity check
// and the byte-reproducible certificates rely on.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geofactor/search.hpp"

namespace geofactor {

struct Factor {
  int v = 0;
  int m = 0;
  std::vector<std::vector<int>> components;

  friend bool operator==(const Factor&, const Factor&) = default;
};

struct Factorization {
  int v = 0;
  int lambda = 0;
  int m = 0;
  std::vector<Factor> factors;
  std::vector<std::string> labels;  // one per vertex; may be empty
  std::string provenance;
};

struct Violation {
  std::string message;
};

inline Factor canonical_factor(Factor f) {
  for (auto& comp : f.components) std::sort(comp.begin(), comp.end());
  std::sort(f.components.begin(), f.components.end());
  return f;
}

inline void canonicalize(Factorization& phi) {
  for (auto& f : phi.factors) f = canonical_factor(std::move(f));
  std::sort(phi.factors.begin(), phi.factors.end(),
            [](const Factor& a, const Factor& b) { return a.components < b.components; });
}

inline std::optional<Violation> verify_factor(const Factor& f) {
  if (f.v <= 0) return Violation{"factor has no vertices"};
  if (f.m < 0) return Violation{"factor has negative degree"};
  std::vector<int> seen(static_cast<std::size_t>(f.v), 0);
  const int comp_size = f.m + 1;
  for (const auto& comp : f.components) {
    if (static_cast<int>(comp.size()) != comp_size)
      return Violation{"component of size " + std::to_string(comp.size()) + " instead of m+1 = " +
                       std::to_string(comp_size)};
    for (int x : comp) {
      if (x < 0 || x >= f.v) return Violation{"vertex " + std::to_string(x) + " out of range"};
      if (seen[static_cast<std::size_t>(x)]++)
        return Violation{"vertex " + std::to_string(x) + " lies in two components"};
    }
  }
  for (int x = 0; x < f.v; ++x)
    if (!seen[static_cast<std::size_t>(x)]) return Violation{"vertex " + std::to_string(x) + " is uncovered"};
  return std::nullopt;
}

namespace pair_detail {

inline int pair_index(int u, int w) {
  if (u > w) std::swap(u, w);
  return w * (w - 1) / 2 + u;
}

inline std::vector<int> factor_pairs(const Factor& f) {
  std::vector<int> pairs;
  for (const auto& comp : f.components)
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (std::size_t j = i + 1; j < comp.size(); ++j) pairs.push_back(pair_index(comp[i], comp[j]));
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace pair_detail

/// Exact edge-coverage check: every unordered vertex pair must be covered by
/// exactly lambda factor cliques.
inline std::optional<Violation> verify_factorization(const Factorization& phi) {
  if (phi.lambda <= 0) return Violation{"lambda must be positive"};
  for (std::size_t i = 0; i < phi.factors.size(); ++i) {
    const auto& f = phi.factors[i];
    if (f.v != phi.v || f.m != phi.m)
      return Violation{"factor " + std::to_string(i) + " has mismatched (v, m)"};
    if (auto bad = verify_factor(f)) {
      bad->message = "factor " + std::to_string(i) + ": " + bad->message;
      return bad;
    }
  }
  const std::size_t npairs = static_cast<std::size_t>(phi.v) * (phi.v - 1) / 2;
  std::vector<int> cov(npairs, 0);
  for (const auto& f : phi.factors)
    for (int pi : pair_detail::factor_pairs(f)) ++cov[static_cast<std::size_t>(pi)];
  for (int w = 1; w < phi.v; ++w)
    for (int u = 0; u < w; ++u) {
      const int c = cov[static_cast<std::size_t>(pair_detail::pair_index(u, w))];
      if (c != phi.lambda)
        return Violation{"pair {" + std::to_string(u) + "," + std::to_string(w) + "} covered " +
                         std::to_string(c) + " times, expected " + std::to_string(phi.lambda)};
    }
  return std::nullopt;
}

/// True iff no two factors have identical canonical forms.
inline bool is_simple(const Factorization& phi) {
  std::vector<std::vector<std::vector<int>>> forms;
  forms.reserve(phi.factors.size());
  for (const auto& f : phi.factors) forms.push_back(canonical_factor(f).components);
  std::sort(forms.begin(), forms.end());
  return std::adjacent_find(forms.begin(), forms.end()) == forms.end();
}

struct DecompositionVerdict {
  bool decomposable = false;
  std::optional<std::vector<int>> witness;  // factor indices realizing mu1
  bool exhausted = false;                   // search ran to completion
  std::uint64_t nodes = 0;

  bool inconclusive() const { return !decomposable && !exhausted; }
};

/// Complete backtracking search for a sub-multiset of factors covering every
/// pair exactly mu1 times.  Factors are tried in index order; the first
/// witness is deterministic.
inline DecompositionVerdict decomposition_search(const Factorization& phi, int mu1,
                                                 std::uint64_t max_nodes = 50'000'000) {
  if (mu1 < 1 || mu1 >= phi.lambda) throw std::invalid_argument("mu1 must satisfy 1 <= mu1 < lambda");
  MultiCoverProblem pb;
  pb.universe = phi.v * (phi.v - 1) / 2;
  pb.fold = mu1;
  pb.max_nodes = max_nodes;
  pb.sets.reserve(phi.factors.size());
  for (const auto& f : phi.factors) pb.sets.push_back(pair_detail::factor_pairs(f));
  MultiCoverSearch search(pb);
  const MultiCoverResult r = search.find_first();
  DecompositionVerdict verdict;
  verdict.nodes = r.nodes;
  switch (r.status) {
    case SearchStatus::found:
      verdict.decomposable = true;
      verdict.witness = r.witness;
      verdict.exhausted = true;
      break;
    case SearchStatus::exhausted:
      verdict.exhausted = true;
      break;
    case SearchStatus::node_limit:
      break;  // inconclusive
  }
  return verdict;
}

/// Verdict over all feasible mu1 (complement symmetry halves the range):
/// decomposable on first witness, indecomposable only when every mu1 was
/// exhausted.
inline DecompositionVerdict full_decomposition_search(const Factorization& phi,
                                                      std::uint64_t max_nodes = 50'000'000) {
  DecompositionVerdict verdict;
  verdict.exhausted = true;
  if (phi.lambda <= 1) return verdict;  // no valid mu1: vacuously indecomposable
  for (int mu1 = 1; 2 * mu1 <= phi.lambda; ++mu1) {
    DecompositionVerdict v = decomposition_search(phi, mu1, max_nodes);
    verdict.nodes += v.nodes;
    if (v.decomposable) {
      verdict.decomposable = true;
      verdict.witness = v.witness;
      return verdict;
    }
    if (!v.exhausted) verdict.exhausted = false;
  }
  return verdict;
}

// ---- certificate serialization ----

inline nlohmann::json to_json(const Factorization& phi) {
  nlohmann::json j;
  j["v"] = phi.v;
  j["lambda"] = phi.lambda;
  j["m"] = phi.m;
  j["labels"] = phi.labels;
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& f : phi.factors) factors.push_back(f.components);
  j["factors"] = std::move(factors);
  j["provenance"] = phi.provenance;
  return j;
}

inline Factorization factorization_from_json(const nlohmann::json& j) {
  Factorization phi;
  phi.v = j.at("v").get<int>();
  phi.lambda = j.at("lambda").get<int>();
  phi.m = j.at("m").get<int>();
  phi.labels = j.at("labels").get<std::vector<std::string>>();
  phi.provenance = j.value("provenance", std::string{});
  for (const auto& jf : j.at("factors")) {
    Factor f;
    f.v = phi.v;
    f.m = phi.m;
    f.components = jf.get<std::vector<std::vector<int>>>();
    phi.factors.push_back(std::move(f));
  }
  return phi;
}

}  // namespace geofactor
