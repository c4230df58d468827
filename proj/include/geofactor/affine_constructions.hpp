#pragma once

// Factorizations from affine spaces: the (q^i-1)-factorization F^i of
// lambda_i * K_{q^n} built from all (i-1)-spaces at infinity, its
// decomposability decision, the q=2 one-factorization G of K_{2^n}, and the
// two explicit one-factorizations of 3K_8 (the decomposable G' and the
// indecomposable M).
//
// Vertices are the affine points of AG(n,q) in canonical order (H_inf is
// x0 = 0), so all certificates here are byte-reproducible.  As an aside,
// one-factor refinements of the K_{2^i} components can never be chosen
// cyclically for i >= 3; the fixed schemes below sidestep that.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "geofactor/designs.hpp"
#include "geofactor/factorization.hpp"
#include "geofactor/geometry.hpp"
#include "geofactor/spreads.hpp"

namespace geofactor {

struct AffineFactorization {
  SpacePtr space;  // the ambient PG(n,q)
  Factorization factorization;
  // factor index -> the (i-1)-space of H_inf it comes from (same order as
  // factorization.factors).
  std::vector<Subspace> infinity_spaces;
  std::int64_t lambda_i = 0;
  std::int64_t factor_count = 0;
};

/// One (q^i-1)-factor per (i-1)-space of H_inf: its components are the
/// q^{n-i} parallel affine i-spaces through that space at infinity.
inline AffineFactorization build_affine_factorization(int n, FieldPtr field, int i,
                                                      std::int64_t max_points = ProjectiveSpace::kDefaultMaxPoints) {
  if (i <= 0 || i >= n) throw std::invalid_argument("need 0 < i < n");
  const SpacePtr space = ProjectiveSpace::make(n, std::move(field), max_points);
  const std::int64_t q = space->q();
  const AffineModel model = AffineModel::standard(space);

  AffineFactorization out;
  out.lambda_i = gaussian_binomial(n - 1, i - 1, q);
  out.factor_count = gaussian_binomial(n, i, q);

  std::int64_t qi = 1;
  for (int t = 0; t < i; ++t) qi *= q;

  Factorization phi;
  phi.v = model.affine_count();
  phi.m = static_cast<int>(qi - 1);
  phi.lambda = static_cast<int>(out.lambda_i);
  phi.labels = model.affine_labels();
  phi.provenance = "affine n=" + std::to_string(n) + " q=" + std::to_string(q) + " i=" + std::to_string(i);

  // parallel_classes(i) is keyed by the (i-1)-space at infinity; each class
  // becomes one factor.  Factors are sorted canonically together with their
  // infinity tags.
  std::vector<std::pair<Subspace, Factor>> tagged;
  for (const auto& cls : model.parallel_classes(i)) {
    Factor f;
    f.v = phi.v;
    f.m = phi.m;
    for (const auto& as : cls) f.components.push_back(as.affine_points);
    tagged.emplace_back(cls.front().trace_at_infinity, canonical_factor(std::move(f)));
  }
  std::sort(tagged.begin(), tagged.end(),
            [](const auto& a, const auto& b) { return a.second.components < b.second.components; });
  for (auto& [inf, f] : tagged) {
    out.infinity_spaces.push_back(std::move(inf));
    phi.factors.push_back(std::move(f));
  }
  if (static_cast<std::int64_t>(phi.factors.size()) != out.factor_count)
    throw std::logic_error("affine factorization has wrong factor count");
  out.factorization = std::move(phi);
  out.space = space;
  return out;
}

/// Factor indices of `af` whose (i-1)-space at infinity is one of the given
/// H_inf family members (subspaces of PG(n-1,q), lifted into PG(n,q) by
/// prepending the zero coordinate of the standard hyperplane x0 = 0).
inline std::vector<int> factors_for_infinity_members(const AffineFactorization& af,
                                                     const SubspaceFamily& hinf_family,
                                                     const std::vector<int>& members) {
  std::map<Subspace, int> factor_of;
  for (std::size_t i = 0; i < af.infinity_spaces.size(); ++i)
    factor_of[af.infinity_spaces[i]] = static_cast<int>(i);
  std::vector<int> out;
  out.reserve(members.size());
  for (int m : members) {
    const Subspace& small = hinf_family.member(m);
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& r : small.basis) {
      std::vector<std::int64_t> lifted(r.size() + 1, 0);
      std::copy(r.begin(), r.end(), lifted.begin() + 1);
      rows.push_back(std::move(lifted));
    }
    out.push_back(factor_of.at(span_rows(*af.space, std::move(rows))));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline AffineFactorization build_affine_factorization(int n, std::int64_t q, int i) {
  return build_affine_factorization(n, field_of_order(q), i);
}

enum class DecompKind { decomposable, indecomposable, inconclusive };

inline const char* to_string(DecompKind k) {
  switch (k) {
    case DecompKind::decomposable: return "decomposable";
    case DecompKind::indecomposable: return "indecomposable";
    case DecompKind::inconclusive: return "inconclusive";
  }
  return "?";
}

struct AffineDecomposability {
  DecompKind kind = DecompKind::inconclusive;
  std::string reasoning;
  bool by_closed_form = false;
  bool by_search = false;
  int witness_fold = 0;              // f of the witnessing fold spread, if any
  std::vector<int> witness_members;  // family indices of (i-1)-spaces of PG(n-1,q)
  std::uint64_t nodes = 0;
};

/// Decomposability of F^i per the fold-spread criterion: F^i is decomposable
/// iff PG(n-1,q) carries an f-fold (i-1)-spread (distinct members) with
/// 1 <= f < lambda_i.  Closed forms run first: lambda_i = 1 and i = n-1 give
/// indecomposable, a Singer fold spread for (l+1) | gcd(i,n) with a feasible
/// fold gives decomposable.  The exhaustive search runs as fallback, or
/// additionally as cross-check when requested; disagreement aborts loudly.
inline AffineDecomposability affine_decomposability(int n, FieldPtr field, int i,
                                                    std::uint64_t max_nodes = 50'000'000,
                                                    bool cross_check = true) {
  if (i <= 0 || i >= n) throw std::invalid_argument("need 0 < i < n");
  const std::int64_t q = field->order();
  const std::int64_t lambda_i = gaussian_binomial(n - 1, i - 1, q);
  AffineDecomposability out;

  if (lambda_i == 1) {
    out.kind = DecompKind::indecomposable;
    out.by_closed_form = true;
    out.reasoning = "lambda = 1: no valid split exists";
    return out;
  }

  std::int64_t qi = 1;
  for (int t = 0; t < i; ++t) qi *= q;

  const SpacePtr hinf = ProjectiveSpace::make(n - 1, field);
  std::optional<SubspaceFamily> family;
  const auto the_family = [&]() -> const SubspaceFamily& {
    if (!family) family = SubspaceFamily::build(hinf, i - 1);
    return *family;
  };

  // Closed-form decomposable: Singer fold spread for (l+1) | gcd(i,n) with
  // fold strictly below lambda_i; members must be distinct to select a
  // sub-factorization of the simple F^i.
  const int g = std::gcd(i, n);
  for (int l1 = 1; l1 <= g; ++l1) {
    if (g % l1 != 0) continue;
    std::int64_t ql1 = 1;
    for (int t = 0; t < l1; ++t) ql1 *= q;
    if ((qi - 1) % (ql1 - 1) != 0) continue;
    const std::int64_t f = (qi - 1) / (ql1 - 1);
    if (f < 1 || f >= lambda_i) continue;
    const SingerFoldSpread sfs = singer_fold_spread(the_family(), l1 - 1);
    if (!sfs.members_distinct()) continue;
    out.kind = DecompKind::decomposable;
    out.by_closed_form = true;
    out.witness_fold = sfs.spread.fold;
    out.witness_members = sfs.spread.members;
    out.reasoning = "Singer " + std::to_string(sfs.spread.fold) + "-fold " + std::to_string(i - 1) +
                    "-spread of PG(" + std::to_string(n - 1) + "," + std::to_string(q) + ")";
    break;
  }
  const bool closed_form_indecomposable = (i == n - 1);
  if (!cross_check) {
    if (out.kind == DecompKind::decomposable) return out;
    if (closed_form_indecomposable) {
      out.kind = DecompKind::indecomposable;
      out.by_closed_form = true;
      out.reasoning = "i = n-1: every fold (n-2)-spread uses all (n-2)-spaces";
      return out;
    }
  }

  // Search branch: try every fold below lambda_i (counting-infeasible folds
  // refute instantly inside fold_spread_search).
  out.by_search = true;
  DecompKind search_kind = DecompKind::indecomposable;
  int found_fold = 0;
  std::vector<int> found_members;
  for (int f = 1; f < lambda_i; ++f) {
    const FoldSearchResult r = fold_spread_search(the_family(), f, max_nodes);
    out.nodes += r.nodes;
    if (r.status == SearchStatus::found) {
      search_kind = DecompKind::decomposable;
      found_fold = f;
      found_members = r.members;
      break;
    }
    if (r.status == SearchStatus::node_limit) search_kind = DecompKind::inconclusive;
  }

  if (out.kind == DecompKind::decomposable) {
    if (search_kind != DecompKind::decomposable)
      throw std::logic_error("closed-form fold-spread witness exists but the search found none");
    return out;
  }
  if (closed_form_indecomposable && search_kind == DecompKind::decomposable)
    throw std::logic_error("closed-form indecomposability contradicted by a search witness");
  out.kind = search_kind;
  out.by_closed_form = closed_form_indecomposable;
  out.witness_fold = found_fold;
  out.witness_members = std::move(found_members);
  switch (search_kind) {
    case DecompKind::decomposable:
      out.reasoning = "search found a " + std::to_string(found_fold) + "-fold spread";
      break;
    case DecompKind::indecomposable:
      out.reasoning = closed_form_indecomposable ? "i = n-1 (closed form), confirmed by exhausted search"
                                                 : "exhausted search over all folds";
      break;
    case DecompKind::inconclusive:
      out.reasoning = "search hit the node limit";
      break;
  }
  return out;
}

inline AffineDecomposability affine_decomposability(int n, std::int64_t q, int i,
                                                    std::uint64_t max_nodes = 50'000'000,
                                                    bool cross_check = true) {
  return affine_decomposability(n, field_of_order(q), i, max_nodes, cross_check);
}

namespace affine_detail {

/// Affine points of AG(n,2) as bit vectors (coordinate t -> bit t-1), with
/// the inverse map.
struct BinaryPointTable {
  std::vector<std::uint32_t> vec_of;
  std::map<std::uint32_t, int> idx_of;

  static BinaryPointTable build(const ProjectiveSpace& space, const AffineModel& model) {
    BinaryPointTable t;
    const int n = space.dim();
    t.vec_of.resize(static_cast<std::size_t>(model.affine_count()));
    for (int a = 0; a < model.affine_count(); ++a) {
      const auto& coords = space.point(model.projective_index(a));
      std::uint32_t bits = 0;
      for (int c = 1; c <= n; ++c)
        if (coords[static_cast<std::size_t>(c)]) bits |= (1u << (c - 1));
      t.vec_of[static_cast<std::size_t>(a)] = bits;
      t.idx_of[bits] = a;
    }
    return t;
  }
};

}  // namespace affine_detail

/// The one-factorization G of K_{2^n}: the pair {b,c} lies in G_s iff b, c
/// and the infinity point s are collinear, i.e. the direction b xor c is the
/// vector of s.  Defined for q = 2 only.
inline Factorization one_factorization_G(int n) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  const SpacePtr space = ProjectiveSpace::make(n, Field::make(2, 1));
  const AffineModel model = AffineModel::standard(space);
  const auto table = affine_detail::BinaryPointTable::build(*space, model);
  const int v = model.affine_count();

  Factorization phi;
  phi.v = v;
  phi.m = 1;
  phi.lambda = 1;
  phi.labels = model.affine_labels();
  phi.provenance = "G one-factorization of K_" + std::to_string(v);
  for (std::uint32_t dir = 1; dir < (1u << n); ++dir) {
    Factor f;
    f.v = v;
    f.m = 1;
    for (int a = 0; a < v; ++a) {
      const int b = table.idx_of.at(table.vec_of[static_cast<std::size_t>(a)] ^ dir);
      if (a < b) f.components.push_back({a, b});
    }
    phi.factors.push_back(canonical_factor(std::move(f)));
  }
  std::sort(phi.factors.begin(), phi.factors.end(),
            [](const Factor& a, const Factor& b) { return a.components < b.components; });
  return phi;
}

/// The Fano labeling behind the 3K_8 constructions: point s of H_inf carries
/// the direction vector alpha^s in GF(8) = GF(2)[x]/(x^3+x+1), which makes
/// the triples L_j = (j, j+1, j+3) mod 7 exactly the lines of the plane.
struct FanoLabeling {
  std::array<std::uint32_t, 7> direction{};   // direction[s] = alpha^s as a 3-bit vector
  std::array<std::array<int, 3>, 7> lines{};  // L_j = {j, j+1, j+3} mod 7

  static FanoLabeling standard() {
    FanoLabeling fl;
    const FieldPtr F8 = Field::make(2, 3);
    for (int s = 0; s < 7; ++s)
      fl.direction[static_cast<std::size_t>(s)] = static_cast<std::uint32_t>(F8->exp(s));
    for (int j = 0; j < 7; ++j) fl.lines[static_cast<std::size_t>(j)] = {j, (j + 1) % 7, (j + 3) % 7};
    for (const auto& L : fl.lines) {
      std::uint32_t x = 0;
      for (int s : L) x ^= fl.direction[static_cast<std::size_t>(s)];
      if (x != 0) throw std::logic_error("Fano labeling triples are not lines");
    }
    return fl;
  }
};

enum class K8Variant { g_prime, m };

/// The two explicit one-factorizations of 3K_8 on the affine points of
/// AG(3,2); the anchor is the all-zero vector.
///   g_prime: for each Fano line L_j the three one-factors G_s, s in L_j;
///            every G_s recurs three times overall, so G' is not simple and
///            splits into three copies of G.
///   m:       for each L_j three one-factors M_j^t; M_j^t pairs the anchor
///            component of F_j along one direction of L_j and the opposite
///            component along the cyclically next one.
inline Factorization build_3k8_variant(K8Variant which) {
  const FanoLabeling fl = FanoLabeling::standard();
  const SpacePtr space = ProjectiveSpace::make(3, Field::make(2, 1));
  const AffineModel model = AffineModel::standard(space);
  const auto table = affine_detail::BinaryPointTable::build(*space, model);
  const int v = 8;

  Factorization phi;
  phi.v = v;
  phi.m = 1;
  phi.lambda = 3;
  phi.labels = model.affine_labels();
  phi.provenance = which == K8Variant::g_prime ? "3K8 variant G'" : "3K8 variant M";

  const Factorization G = one_factorization_G(3);
  std::map<std::uint32_t, const Factor*> g_by_dir;
  for (const auto& f : G.factors) {
    const std::uint32_t dir = table.vec_of[static_cast<std::size_t>(f.components[0][0])] ^
                              table.vec_of[static_cast<std::size_t>(f.components[0][1])];
    g_by_dir[dir] = &f;
  }

  for (int j = 0; j < 7; ++j) {
    const auto& L = fl.lines[static_cast<std::size_t>(j)];
    const std::uint32_t dj = fl.direction[static_cast<std::size_t>(L[0])];
    const std::uint32_t dj1 = fl.direction[static_cast<std::size_t>(L[1])];
    const std::uint32_t dj3 = fl.direction[static_cast<std::size_t>(L[2])];
    if (which == K8Variant::g_prime) {
      for (int s : L) phi.factors.push_back(*g_by_dir.at(fl.direction[static_cast<std::size_t>(s)]));
      continue;
    }
    // Components of the 3-factor F_j: the direction plane W_j = {0,dj,dj1,dj3}
    // (anchor side) and its complementary coset.
    std::vector<std::uint32_t> anchor_side{0u, dj, dj1, dj3};
    std::vector<std::uint32_t> other_side;
    for (std::uint32_t x = 0; x < 8; ++x)
      if (std::find(anchor_side.begin(), anchor_side.end(), x) == anchor_side.end()) other_side.push_back(x);
    const auto matching = [&](const std::vector<std::uint32_t>& side, std::uint32_t dir) {
      std::vector<std::vector<int>> edges;
      for (std::uint32_t x : side) {
        const std::uint32_t y = x ^ dir;
        const int xi = table.idx_of.at(x), yi = table.idx_of.at(y);
        if (xi < yi) edges.push_back({xi, yi});
      }
      return edges;
    };
    // Case lists: (anchor dir, other dir) = (d_j, d_{j+1}), (d_{j+1}, d_{j+3}), (d_{j+3}, d_j).
    const std::array<std::array<std::uint32_t, 2>, 3> cases = {{{dj, dj1}, {dj1, dj3}, {dj3, dj}}};
    for (const auto& cs : cases) {
      Factor f;
      f.v = v;
      f.m = 1;
      for (auto& e : matching(anchor_side, cs[0])) f.components.push_back(std::move(e));
      for (auto& e : matching(other_side, cs[1])) f.components.push_back(std::move(e));
      phi.factors.push_back(canonical_factor(std::move(f)));
    }
  }
  return phi;
}

}  // namespace geofactor
