#pragma once

// The 2-design layer: designs built from the i-spaces of PG(n,q) and
// AG(n,q), axiom validation, resolvability preconditions, and the bridge
// from a resolution to a (k-1)-factorization of lambda*K_v.
//
// Blocks are sorted point-index lists and block lists are sorted, so equal
// designs compare equal.  Note that parameter admissibility (the identities
// vr = bk and r(k-1) = lambda(v-1)) does not imply existence: for example no
// 2-(43,43,7,7,1) design exists, since it would be a projective plane of
// order 6.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "geofactor/factorization.hpp"
#include "geofactor/geometry.hpp"

namespace geofactor {

struct DesignParams {
  std::int64_t v = 0, b = 0, k = 0, r = 0, lambda = 0;

  /// vr = bk and r(k-1) = lambda(v-1).
  bool admissible() const { return v > 1 && v * r == b * k && r * (k - 1) == lambda * (v - 1); }

  friend bool operator==(const DesignParams&, const DesignParams&) = default;
};

struct Design {
  int v = 0;
  std::vector<std::vector<int>> blocks;  // sorted blocks, canonical order
  std::vector<std::string> labels;       // one per point; may be empty
};

/// Partition of the block indices into resolution classes.
struct Resolution {
  std::vector<std::vector<int>> classes;
};

struct DesignViolation {
  char axiom = '?';  // 'a' block size, 'b' replication, 'c' pair count, 'p' partition
  std::string message;
};

using ValidationResult = std::variant<DesignParams, DesignViolation>;

inline bool validation_ok(const ValidationResult& r) { return std::holds_alternative<DesignParams>(r); }

/// Checks axioms (a)-(c) and returns the parameters, or the first violated
/// axiom with a witness.
inline ValidationResult validate_design(const Design& d) {
  if (d.v <= 1 || d.blocks.empty()) return DesignViolation{'a', "design needs v > 1 points and at least one block"};
  const std::size_t k = d.blocks.front().size();
  if (k == 0) return DesignViolation{'a', "empty block"};
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    const auto& blk = d.blocks[i];
    if (blk.size() != k)
      return DesignViolation{'a', "block " + std::to_string(i) + " has size " + std::to_string(blk.size()) +
                                      ", expected " + std::to_string(k)};
    for (int x : blk)
      if (x < 0 || x >= d.v)
        return DesignViolation{'a', "block " + std::to_string(i) + " contains out-of-range point " + std::to_string(x)};
    for (std::size_t t = 1; t < blk.size(); ++t)
      if (blk[t] <= blk[t - 1])
        return DesignViolation{'a', "block " + std::to_string(i) + " is not a sorted set"};
  }
  std::vector<std::int64_t> rep(static_cast<std::size_t>(d.v), 0);
  for (const auto& blk : d.blocks)
    for (int x : blk) ++rep[static_cast<std::size_t>(x)];
  for (int x = 1; x < d.v; ++x)
    if (rep[static_cast<std::size_t>(x)] != rep[0])
      return DesignViolation{'b', "point " + std::to_string(x) + " has replication " +
                                      std::to_string(rep[static_cast<std::size_t>(x)]) + ", point 0 has " +
                                      std::to_string(rep[0])};
  std::vector<std::int64_t> pair_cov(static_cast<std::size_t>(d.v) * d.v, 0);
  for (const auto& blk : d.blocks)
    for (std::size_t i = 0; i < blk.size(); ++i)
      for (std::size_t j = i + 1; j < blk.size(); ++j)
        ++pair_cov[static_cast<std::size_t>(blk[i]) * d.v + blk[j]];
  const std::int64_t lambda = pair_cov[static_cast<std::size_t>(d.blocks[0][0]) * d.v + d.blocks[0][1]];
  for (int u = 0; u < d.v; ++u)
    for (int w = u + 1; w < d.v; ++w)
      if (pair_cov[static_cast<std::size_t>(u) * d.v + w] != lambda)
        return DesignViolation{'c', "pair {" + std::to_string(u) + "," + std::to_string(w) + "} lies in " +
                                        std::to_string(pair_cov[static_cast<std::size_t>(u) * d.v + w]) +
                                        " blocks, pair {" + std::to_string(d.blocks[0][0]) + "," +
                                        std::to_string(d.blocks[0][1]) + "} in " + std::to_string(lambda)};
  DesignParams p;
  p.v = d.v;
  p.b = static_cast<std::int64_t>(d.blocks.size());
  p.k = static_cast<std::int64_t>(k);
  p.r = rep[0];
  p.lambda = lambda;
  return p;
}

/// Closed-form parameters of PG^(i)(n,q).
inline DesignParams projective_design_params(int n, std::int64_t q, int i) {
  DesignParams p;
  p.v = gaussian_binomial(n + 1, 1, q);
  p.b = gaussian_binomial(n + 1, i + 1, q);
  p.k = gaussian_binomial(i + 1, 1, q);
  p.r = gaussian_binomial(n, i, q);
  p.lambda = gaussian_binomial(n - 1, i - 1, q);
  return p;
}

/// Closed-form parameters of AG^(i)(n,q).
inline DesignParams affine_design_params(int n, std::int64_t q, int i) {
  DesignParams p;
  std::int64_t qn = 1, qni = 1, qi = 1;
  for (int t = 0; t < n; ++t) qn *= q;
  for (int t = 0; t < n - i; ++t) qni *= q;
  for (int t = 0; t < i; ++t) qi *= q;
  p.v = qn;
  p.b = qni * gaussian_binomial(n, i, q);
  p.k = qi;
  p.r = gaussian_binomial(n, i, q);
  p.lambda = gaussian_binomial(n - 1, i - 1, q);
  return p;
}

enum class GeometryKind { projective, affine };

/// The design whose blocks are the i-spaces of PG(n,q) or AG(n,q).
inline Design design_from_geometry(GeometryKind kind, int n, FieldPtr field, int i) {
  if (i <= 0 || i >= n) throw std::invalid_argument("design dimension i must satisfy 0 < i < n");
  const SpacePtr space = ProjectiveSpace::make(n, std::move(field));
  Design d;
  if (kind == GeometryKind::projective) {
    d.v = space->point_count();
    d.labels = space->point_labels();
    for (const auto& s : enumerate_subspaces(*space, i)) d.blocks.push_back(subspace_points(*space, s));
  } else {
    const AffineModel model = AffineModel::standard(space);
    d.v = model.affine_count();
    d.labels = model.affine_labels();
    for (const auto& cls : model.parallel_classes(i))
      for (const auto& as : cls) d.blocks.push_back(as.affine_points);
  }
  for (auto& blk : d.blocks) std::sort(blk.begin(), blk.end());
  std::sort(d.blocks.begin(), d.blocks.end());
  return d;
}

inline Design design_from_geometry(GeometryKind kind, int n, std::int64_t q, int i) {
  return design_from_geometry(kind, n, field_of_order(q), i);
}

struct ResolvabilityReport {
  bool divisibility = false;  // lambda(v-1) = 0 mod (k-1)
  bool point_split = false;   // v = 0 mod k
  bool bose = false;          // b >= v + r - 1
  bool all() const { return divisibility && point_split && bose; }
};

inline ResolvabilityReport resolvability_preconditions(const DesignParams& p) {
  ResolvabilityReport rep;
  rep.divisibility = (p.k > 1) && (p.lambda * (p.v - 1)) % (p.k - 1) == 0;
  rep.point_split = p.v % p.k == 0;
  rep.bose = p.b >= p.v + p.r - 1;
  return rep;
}

/// The parallel-class resolution of AG^(i)(n,q); class c = indices of the
/// blocks in parallel class c under the canonical block order of
/// design_from_geometry.
inline Resolution affine_resolution(const Design& d, int n, FieldPtr field, int i) {
  const SpacePtr space = ProjectiveSpace::make(n, std::move(field));
  const AffineModel model = AffineModel::standard(space);
  std::map<std::vector<int>, int> block_index;
  for (std::size_t b = 0; b < d.blocks.size(); ++b) block_index[d.blocks[b]] = static_cast<int>(b);
  Resolution r;
  for (const auto& cls : model.parallel_classes(i)) {
    std::vector<int> idxs;
    for (const auto& as : cls) {
      auto key = as.affine_points;
      std::sort(key.begin(), key.end());
      idxs.push_back(block_index.at(key));
    }
    std::sort(idxs.begin(), idxs.end());
    r.classes.push_back(std::move(idxs));
  }
  std::sort(r.classes.begin(), r.classes.end());
  return r;
}

/// Lemma-style bridge: one (k-1)-factor per resolution class, components
/// being the blocks as cliques.  Throws when a class is not a point
/// partition; full verification is left to verify_factorization.
inline Factorization factorization_from_resolution(const Design& d, const Resolution& r) {
  if (d.blocks.empty()) throw std::invalid_argument("empty design");
  const int k = static_cast<int>(d.blocks.front().size());
  const auto params = validate_design(d);
  if (!validation_ok(params)) throw std::invalid_argument("factorization_from_resolution: invalid design");
  Factorization phi;
  phi.v = d.v;
  phi.m = k - 1;
  phi.lambda = static_cast<int>(std::get<DesignParams>(params).lambda);
  phi.labels = d.labels;
  for (const auto& cls : r.classes) {
    Factor f;
    f.v = d.v;
    f.m = k - 1;
    std::vector<int> seen(static_cast<std::size_t>(d.v), 0);
    for (int bi : cls) {
      const auto& blk = d.blocks.at(static_cast<std::size_t>(bi));
      for (int x : blk)
        if (seen[static_cast<std::size_t>(x)]++)
          throw std::invalid_argument("resolution class is not a partition: point " + std::to_string(x) +
                                      " repeated");
      f.components.push_back(blk);
    }
    for (int x = 0; x < d.v; ++x)
      if (!seen[static_cast<std::size_t>(x)])
        throw std::invalid_argument("resolution class misses point " + std::to_string(x));
    phi.factors.push_back(canonical_factor(std::move(f)));
  }
  // A single parallel class is a factor but not a factorization; lambda
  // bookkeeping only holds for a full resolution.  Callers verify.
  return phi;
}

}  // namespace geofactor
