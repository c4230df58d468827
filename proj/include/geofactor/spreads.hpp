#pragma once

// Spread engine: i-spreads, f-fold spreads, reguli, spread classification,
// packings, and the exhaustive searches behind decomposability results and
// packing counts.
//
// A SubspaceFamily pins down the universe (all k-subspaces of one space in
// canonical order); spreads, fold spreads and packings refer to members by
// family index, which keeps the search cores on integers and bitsets.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "geofactor/bits.hpp"
#include "geofactor/factorization.hpp"
#include "geofactor/field_model.hpp"
#include "geofactor/geometry.hpp"
#include "geofactor/search.hpp"

namespace geofactor {

/// All k-subspaces of a space, with point sets and incidence precomputed.
class SubspaceFamily {
 public:
  static SubspaceFamily build(SpacePtr space, int k, std::int64_t max_count = 1 << 22) {
    SubspaceFamily fam;
    fam.space_ = std::move(space);
    fam.k_ = k;
    fam.members_ = enumerate_subspaces(*fam.space_, k, max_count);
    fam.member_points_.reserve(fam.members_.size());
    fam.member_bits_.reserve(fam.members_.size());
    fam.through_point_.assign(static_cast<std::size_t>(fam.space_->point_count()), {});
    for (std::size_t i = 0; i < fam.members_.size(); ++i) {
      auto pts = subspace_points(*fam.space_, fam.members_[i]);
      Bits bits(fam.space_->point_count());
      for (int p : pts) {
        bits.set(p);
        fam.through_point_[static_cast<std::size_t>(p)].push_back(static_cast<int>(i));
      }
      fam.index_of_[fam.members_[i]] = static_cast<int>(i);
      fam.member_points_.push_back(std::move(pts));
      fam.member_bits_.push_back(std::move(bits));
    }
    return fam;
  }

  const ProjectiveSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  int k() const { return k_; }
  int size() const { return static_cast<int>(members_.size()); }
  const Subspace& member(int i) const { return members_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& points_of(int i) const { return member_points_.at(static_cast<std::size_t>(i)); }
  const Bits& bits_of(int i) const { return member_bits_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& through_point(int p) const { return through_point_.at(static_cast<std::size_t>(p)); }

  int index_of(const Subspace& s) const {
    const auto it = index_of_.find(s);
    if (it == index_of_.end()) throw std::logic_error("subspace not found in family");
    return it->second;
  }

  /// Lines j != i meeting member i, as a bitset over family indices.
  /// Built lazily on first use; only meaningful for k = 1 in PG(3,q).
  const std::vector<Bits>& meet_graph() const {
    if (meets_.empty()) {
      meets_.assign(members_.size(), Bits(size()));
      for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
          if (member_bits_[static_cast<std::size_t>(i)].intersects(member_bits_[static_cast<std::size_t>(j)])) {
            meets_[static_cast<std::size_t>(i)].set(j);
            meets_[static_cast<std::size_t>(j)].set(i);
          }
    }
    return meets_;
  }

 private:
  SpacePtr space_;
  int k_ = 0;
  std::vector<Subspace> members_;
  std::vector<std::vector<int>> member_points_;
  std::vector<Bits> member_bits_;
  std::vector<std::vector<int>> through_point_;
  std::map<Subspace, int> index_of_;
  mutable std::vector<Bits> meets_;
};

struct Spread {
  std::vector<int> members;  // family indices, sorted
};

struct FoldSpread {
  int fold = 1;
  std::vector<int> members;  // family indices, sorted; repeats allowed
};

/// Exact point-coverage check: every point of the space on exactly `fold`
/// members (counted with multiplicity).
inline std::optional<Violation> verify_fold_spread(const SubspaceFamily& fam, const std::vector<int>& members,
                                                   int fold) {
  std::vector<int> cov(static_cast<std::size_t>(fam.space().point_count()), 0);
  for (int m : members)
    for (int p : fam.points_of(m)) ++cov[static_cast<std::size_t>(p)];
  for (int p = 0; p < fam.space().point_count(); ++p)
    if (cov[static_cast<std::size_t>(p)] != fold)
      return Violation{"point " + std::to_string(p) + " covered " + std::to_string(cov[static_cast<std::size_t>(p)]) +
                       " times, expected " + std::to_string(fold)};
  return std::nullopt;
}

inline std::optional<Violation> verify_spread(const SubspaceFamily& fam, const std::vector<int>& members) {
  return verify_fold_spread(fam, members, 1);
}

/// Spread from field reduction: points of PG(n,q) modeled as cosets of
/// GF(q)^* in GF(q^{n+1})^*, members the cosets of GF(q^{i+1})^*.
/// Requires (i+1) | (n+1).
inline Spread field_reduction_spread(const SubspaceFamily& fam) {
  const int n = fam.space().dim();
  const int i = fam.k();
  if ((n + 1) % (i + 1) != 0)
    throw std::invalid_argument("field reduction needs (i+1) | (n+1): got i = " + std::to_string(i) +
                                ", n = " + std::to_string(n));
  const FieldModel model(fam.space().field_ptr(), n + 1);
  const Field& E = *model.extension();
  std::int64_t sub_order = 1;  // q^{i+1} - 1
  for (int t = 0; t <= i; ++t) sub_order *= fam.space().q();
  --sub_order;
  const std::int64_t cosets = (E.order() - 1) / sub_order;
  const std::int64_t step = cosets;  // generator of the subgroup of order sub_order is alpha^cosets
  Spread s;
  for (std::int64_t t = 0; t < cosets; ++t) {
    std::vector<std::vector<std::int64_t>> rows;
    std::int64_t x = E.exp(t);
    for (std::int64_t j = 0; j < sub_order; ++j) {
      rows.push_back(model.coords(x));
      x = E.mul(x, E.exp(step));
    }
    s.members.push_back(fam.index_of(span_rows(fam.space(), std::move(rows))));
  }
  std::sort(s.members.begin(), s.members.end());
  if (auto bad = verify_spread(fam, s.members))
    throw std::logic_error("field reduction produced an invalid spread: " + bad->message);
  return s;
}

struct SingerFoldSpread {
  FoldSpread spread;
  int target_fold = 0;
  int distinct_members = 0;
  bool members_distinct() const { return distinct_members == static_cast<int>(spread.members.size()); }
};

/// Orbit of a GF(q^{l+1})-closed subspace under the Singer cycle, taken over
/// one full set of coset representatives, as a multiset of i-spaces.  The
/// verified fold is authoritative; the target (q^{i+1}-1)/(q^{l+1}-1) is
/// reported alongside.  Requires (l+1) | gcd(i+1, n+1).
inline SingerFoldSpread singer_fold_spread(const SubspaceFamily& fam, int l) {
  const int n = fam.space().dim();
  const int i = fam.k();
  const std::int64_t q = fam.space().q();
  if (l < 0 || (i + 1) % (l + 1) != 0 || (n + 1) % (l + 1) != 0)
    throw std::invalid_argument("singer fold spread needs (l+1) | gcd(i+1, n+1)");
  const FieldPtr K = fam.space().field_ptr();
  const FieldModel model(K, n + 1);
  const Field& E = *model.extension();
  const FieldPtr L = Field::make(K->characteristic(), K->degree() * (l + 1));
  const SubfieldEmbedding embed_L(L, model.extension());
  const std::int64_t alpha = E.generator();

  // W = the GF(q^{l+1})-span of 1, alpha, ..., alpha^{d-1}, d = (i+1)/(l+1).
  const int d = (i + 1) / (l + 1);
  std::vector<std::int64_t> alpha_pow(static_cast<std::size_t>(d));
  {
    std::int64_t ap = 1;
    for (int j = 0; j < d; ++j) {
      alpha_pow[static_cast<std::size_t>(j)] = ap;
      ap = E.mul(ap, alpha);
    }
  }
  std::vector<std::int64_t> W;
  {
    std::vector<std::int64_t> c(static_cast<std::size_t>(d), 0);
    while (true) {
      std::int64_t x = 0;
      for (int j = 0; j < d; ++j)
        if (c[static_cast<std::size_t>(j)] != 0)
          x = E.add(x, E.mul(embed_L.apply(c[static_cast<std::size_t>(j)]), alpha_pow[static_cast<std::size_t>(j)]));
      if (x != 0) W.push_back(x);
      int pos = 0;
      for (; pos < d; ++pos) {
        if (++c[static_cast<std::size_t>(pos)] < L->order()) break;
        c[static_cast<std::size_t>(pos)] = 0;
      }
      if (pos == d) break;
    }
  }

  std::int64_t qi1 = 1, ql1 = 1;
  for (int t = 0; t <= i; ++t) qi1 *= q;
  for (int t = 0; t <= l; ++t) ql1 *= q;
  const std::int64_t orbit_len = (E.order() - 1) / (ql1 - 1);

  SingerFoldSpread out;
  out.target_fold = static_cast<int>((qi1 - 1) / (ql1 - 1));
  for (std::int64_t t = 0; t < orbit_len; ++t) {
    const std::int64_t at = E.exp(t);
    std::vector<std::vector<std::int64_t>> rows;
    rows.reserve(W.size());
    for (std::int64_t w : W) rows.push_back(model.coords(E.mul(at, w)));
    out.spread.members.push_back(fam.index_of(span_rows(fam.space(), std::move(rows))));
  }
  std::sort(out.spread.members.begin(), out.spread.members.end());
  {
    auto uniq = out.spread.members;
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    out.distinct_members = static_cast<int>(uniq.size());
  }
  out.spread.fold = out.target_fold;
  if (auto bad = verify_fold_spread(fam, out.spread.members, out.spread.fold))
    throw std::logic_error("singer orbit is not a " + std::to_string(out.spread.fold) +
                           "-fold spread: " + bad->message);
  return out;
}

struct Regulus {
  std::array<int, 3> generators{};
  std::vector<int> transversals;  // family indices, sorted; exactly q+1 of them
};

namespace regulus_detail {

inline Bits transversal_bits(const SubspaceFamily& lines, int a, int b, int c) {
  const auto& meets = lines.meet_graph();
  Bits t = meets[static_cast<std::size_t>(a)];
  t &= meets[static_cast<std::size_t>(b)];
  t &= meets[static_cast<std::size_t>(c)];
  return t;
}

}  // namespace regulus_detail

/// Transversal set of three pairwise skew lines in PG(3,q).
inline Regulus regulus(const SubspaceFamily& lines, int a, int b, int c) {
  if (lines.space().dim() != 3 || lines.k() != 1)
    throw std::invalid_argument("reguli live on lines of PG(3,q)");
  const std::array<int, 3> gen{a, b, c};
  for (int s = 0; s < 3; ++s)
    for (int t = s + 1; t < 3; ++t)
      if (gen[static_cast<std::size_t>(s)] == gen[static_cast<std::size_t>(t)] ||
          lines.bits_of(gen[static_cast<std::size_t>(s)]).intersects(lines.bits_of(gen[static_cast<std::size_t>(t)])))
        throw std::invalid_argument("regulus generators must be pairwise skew lines");
  Regulus r;
  r.generators = gen;
  r.transversals = regulus_detail::transversal_bits(lines, a, b, c).to_indices();
  if (static_cast<std::int64_t>(r.transversals.size()) != lines.space().q() + 1)
    throw std::logic_error("skew line triple with " + std::to_string(r.transversals.size()) +
                           " transversals; this cannot happen in PG(3,q)");
  return r;
}

enum class SpreadClass { regular, aregular, mixed };

inline const char* to_string(SpreadClass c) {
  switch (c) {
    case SpreadClass::regular: return "regular";
    case SpreadClass::aregular: return "aregular";
    case SpreadClass::mixed: return "mixed";
  }
  return "?";
}

/// For every member triple, form the regulus through it (the transversals of
/// its transversals) and test containment in the spread.  regular: always
/// contained; aregular: never contained; mixed otherwise.
inline SpreadClass classify_spread(const SubspaceFamily& lines, const std::vector<int>& members) {
  if (lines.space().dim() != 3 || lines.k() != 1)
    throw std::invalid_argument("spread classification applies to line spreads of PG(3,q)");
  Bits in_spread(lines.size());
  for (int m : members) in_spread.set(m);
  bool all_contained = true;
  bool any_contained = false;
  const std::size_t sz = members.size();
  for (std::size_t x = 0; x < sz; ++x)
    for (std::size_t y = x + 1; y < sz; ++y)
      for (std::size_t z = y + 1; z < sz; ++z) {
        const Bits t = regulus_detail::transversal_bits(lines, members[x], members[y], members[z]);
        const auto tidx = t.to_indices();
        if (static_cast<std::int64_t>(tidx.size()) != lines.space().q() + 1)
          throw std::logic_error("transversal count mismatch inside a spread");
        const Bits r = regulus_detail::transversal_bits(lines, tidx[0], tidx[1], tidx[2]);
        if (r.subset_of(in_spread))
          any_contained = true;
        else
          all_contained = false;
      }
  if (all_contained) return SpreadClass::regular;
  if (!any_contained) return SpreadClass::aregular;
  return SpreadClass::mixed;
}

struct SpreadEnumeration {
  std::vector<std::vector<int>> spreads;
  bool complete = false;
  std::uint64_t nodes = 0;
};

/// Exhaustive enumeration of all spreads of the family (exact cover of the
/// points).  Deterministic canonical order.
inline SpreadEnumeration enumerate_spreads(const SubspaceFamily& fam, std::uint64_t max_nodes = 50'000'000) {
  MultiCoverProblem pb;
  pb.universe = fam.space().point_count();
  pb.fold = 1;
  pb.max_nodes = max_nodes;
  pb.sets.reserve(static_cast<std::size_t>(fam.size()));
  for (int i = 0; i < fam.size(); ++i) pb.sets.push_back(fam.points_of(i));
  SpreadEnumeration out;
  MultiCoverSearch search(pb);
  const MultiCoverResult r = search.count_all([&out](const std::vector<int>& sol) {
    auto s = sol;
    std::sort(s.begin(), s.end());
    out.spreads.push_back(std::move(s));
  });
  out.complete = r.status != SearchStatus::node_limit;
  out.nodes = r.nodes;
  std::sort(out.spreads.begin(), out.spreads.end());
  return out;
}

struct FoldSearchResult {
  SearchStatus status = SearchStatus::exhausted;
  std::vector<int> members;  // nonempty iff status == found
  std::uint64_t nodes = 0;
};

/// Complete search for an f-fold k-spread with distinct members.  An
/// infeasible member count refutes without search.
inline FoldSearchResult fold_spread_search(const SubspaceFamily& fam, int fold,
                                           std::uint64_t max_nodes = 50'000'000) {
  FoldSearchResult out;
  const std::int64_t pts = fam.space().point_count();
  const std::int64_t per = static_cast<std::int64_t>(fam.points_of(0).size());
  if ((fold * pts) % per != 0 || (fold * pts) / per > fam.size()) {
    out.status = SearchStatus::exhausted;  // counting refutation
    return out;
  }
  MultiCoverProblem pb;
  pb.universe = static_cast<int>(pts);
  pb.fold = fold;
  pb.max_nodes = max_nodes;
  for (int i = 0; i < fam.size(); ++i) pb.sets.push_back(fam.points_of(i));
  MultiCoverSearch search(pb);
  const MultiCoverResult r = search.find_first();
  out.status = r.status;
  out.nodes = r.nodes;
  if (r.status == SearchStatus::found) {
    out.members = r.witness;
    std::sort(out.members.begin(), out.members.end());
  }
  return out;
}

struct Packing {
  std::vector<std::vector<int>> spreads;  // each sorted; spreads sorted
};

inline std::optional<Violation> verify_packing(const SubspaceFamily& fam, const Packing& p) {
  std::vector<int> used(static_cast<std::size_t>(fam.size()), 0);
  for (const auto& s : p.spreads) {
    if (auto bad = verify_spread(fam, s)) return bad;
    for (int m : s) ++used[static_cast<std::size_t>(m)];
  }
  for (int m = 0; m < fam.size(); ++m)
    if (used[static_cast<std::size_t>(m)] != 1)
      return Violation{"subspace " + std::to_string(m) + " used " + std::to_string(used[static_cast<std::size_t>(m)]) +
                       " times across spreads"};
  return std::nullopt;
}

namespace packing_detail {

inline Packing packing_from_selection(const SpreadEnumeration& all, const std::vector<int>& sel) {
  Packing p;
  for (int s : sel) p.spreads.push_back(all.spreads[static_cast<std::size_t>(s)]);
  std::sort(p.spreads.begin(), p.spreads.end());
  return p;
}

}  // namespace packing_detail

struct PackingSearchResult {
  SearchStatus status = SearchStatus::exhausted;
  Packing packing;                  // first solution when found
  std::uint64_t count = 0;          // labeled packings (count mode)
  std::uint64_t orbit_count = 0;    // PGL orbits on packings, when computed
  bool orbits_computed = false;
  std::uint64_t nodes = 0;
  std::uint64_t spread_count = 0;
};

namespace packing_detail {

inline MultiCoverProblem cover_problem(const SubspaceFamily& fam, const SpreadEnumeration& all,
                                       std::uint64_t max_nodes) {
  MultiCoverProblem pb;
  pb.universe = fam.size();
  pb.fold = 1;
  pb.max_nodes = max_nodes;
  pb.sets = all.spreads;
  return pb;
}

}  // namespace packing_detail

/// Lexicographically least packing (partition of all k-subspaces into
/// spreads), through exact cover over the full spread enumeration.
inline PackingSearchResult packing_find_one(const SubspaceFamily& fam, std::uint64_t max_nodes = 200'000'000) {
  PackingSearchResult out;
  const SpreadEnumeration all = enumerate_spreads(fam, max_nodes);
  out.spread_count = all.spreads.size();
  if (!all.complete) {
    out.status = SearchStatus::node_limit;
    return out;
  }
  const MultiCoverProblem pb = packing_detail::cover_problem(fam, all, max_nodes);
  MultiCoverSearch search(pb);
  const MultiCoverResult r = search.find_first();
  out.status = r.status;
  out.nodes = r.nodes + all.nodes;
  if (r.status == SearchStatus::found) out.packing = packing_detail::packing_from_selection(all, r.witness);
  return out;
}

/// Every invertible matrix mod scalars, as point permutations.  Feasible for
/// PG(3,2) (|PGL(4,2)| = 20160); guarded elsewhere.
inline std::vector<std::vector<int>> enumerate_pgl_point_permutations(const ProjectiveSpace& space,
                                                                      std::int64_t max_group = 25'000) {
  const int n = space.dim();
  const std::int64_t q = space.q();
  // |PGL(n+1,q)| = |GL(n+1,q)| / (q-1).
  BigInt gl = 1;
  {
    BigInt qn1 = 1;
    for (int t = 0; t <= n; ++t) qn1 *= q;
    BigInt qp = 1;
    for (int t = 0; t <= n; ++t) {
      gl *= (qn1 - qp);
      qp *= q;
    }
  }
  const BigInt pgl = gl / (q - 1);
  if (pgl > max_group) throw std::invalid_argument("PGL enumeration exceeds the configured limit");

  std::vector<std::vector<int>> perms;
  const int dim = n + 1;
  std::vector<std::vector<std::int64_t>> mat(static_cast<std::size_t>(dim),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0));
  std::vector<std::int64_t> cells(static_cast<std::size_t>(dim * dim), 0);
  std::map<std::vector<std::vector<std::int64_t>>, bool> seen;
  while (true) {
    for (int i = 0; i < dim * dim; ++i) mat[static_cast<std::size_t>(i / dim)][static_cast<std::size_t>(i % dim)] = cells[static_cast<std::size_t>(i)];
    auto copy = mat;
    if (linalg::rref(space.field(), copy) == dim) {
      Projectivity g = make_projectivity(space, mat);
      if (!seen.count(g.matrix)) {
        seen[g.matrix] = true;
        std::vector<int> perm(static_cast<std::size_t>(space.point_count()));
        for (int p = 0; p < space.point_count(); ++p) perm[static_cast<std::size_t>(p)] = apply_projectivity(space, g, p);
        perms.push_back(std::move(perm));
      }
    }
    std::size_t pos = 0;
    for (; pos < cells.size(); ++pos) {
      if (++cells[pos] < q) break;
      cells[pos] = 0;
    }
    if (pos == cells.size()) break;
  }
  if (BigInt(perms.size()) != pgl) throw std::logic_error("PGL enumeration count mismatch");
  return perms;
}

/// Family index of the member with the given sorted point set.
inline int point_set_index(const SubspaceFamily& fam, const std::vector<int>& pts) {
  // The span of the points is the member itself.
  return fam.index_of(span_points(fam.space(), pts));
}

/// Exact count of labeled packings, plus the number of PGL(n+1,q)-orbits when
/// with_orbits is set (only feasible where the group enumeration is).
inline PackingSearchResult packing_count_all(const SubspaceFamily& fam, bool with_orbits,
                                             std::uint64_t max_nodes = 200'000'000) {
  PackingSearchResult out;
  const SpreadEnumeration all = enumerate_spreads(fam, max_nodes);
  out.spread_count = all.spreads.size();
  if (!all.complete) {
    out.status = SearchStatus::node_limit;
    return out;
  }
  const MultiCoverProblem pb = packing_detail::cover_problem(fam, all, max_nodes);
  std::vector<std::vector<std::vector<int>>> packings;  // canonical: sorted spreads
  MultiCoverSearch search(pb);
  const MultiCoverResult r = search.count_all([&](const std::vector<int>& sel) {
    Packing p = packing_detail::packing_from_selection(all, sel);
    packings.push_back(std::move(p.spreads));
  });
  out.status = r.status;
  out.nodes = r.nodes + all.nodes;
  out.count = r.solution_count;
  if (r.status == SearchStatus::node_limit) return out;
  if (!packings.empty()) out.packing.spreads = packings.front();

  if (with_orbits) {
    const auto perms = enumerate_pgl_point_permutations(fam.space());
    // Image of a family member under a point permutation, via point sets.
    std::vector<std::vector<int>> member_image(perms.size(), std::vector<int>(static_cast<std::size_t>(fam.size())));
    for (std::size_t g = 0; g < perms.size(); ++g) {
      for (int m = 0; m < fam.size(); ++m) {
        std::vector<int> img;
        img.reserve(fam.points_of(m).size());
        for (int p : fam.points_of(m)) img.push_back(perms[g][static_cast<std::size_t>(p)]);
        std::sort(img.begin(), img.end());
        member_image[g][static_cast<std::size_t>(m)] = point_set_index(fam, img);
      }
    }
    std::map<std::vector<std::vector<int>>, int> index_of;
    for (std::size_t i = 0; i < packings.size(); ++i) index_of[packings[i]] = static_cast<int>(i);
    std::vector<bool> visited(packings.size(), false);
    for (std::size_t i = 0; i < packings.size(); ++i) {
      if (visited[i]) continue;
      ++out.orbit_count;
      for (std::size_t g = 0; g < perms.size(); ++g) {
        std::vector<std::vector<int>> img;
        img.reserve(packings[i].size());
        for (const auto& spread : packings[i]) {
          std::vector<int> s;
          s.reserve(spread.size());
          for (int m : spread) s.push_back(member_image[g][static_cast<std::size_t>(m)]);
          std::sort(s.begin(), s.end());
          img.push_back(std::move(s));
        }
        std::sort(img.begin(), img.end());
        const auto it = index_of.find(img);
        if (it == index_of.end()) throw std::logic_error("group image of a packing is not a packing");
        visited[static_cast<std::size_t>(it->second)] = true;
      }
    }
    out.orbits_computed = true;
  }
  return out;
}

struct RegulusFreeSearchResult {
  SearchStatus status = SearchStatus::exhausted;
  std::vector<int> members;
  std::uint64_t nodes = 0;
};

/// Backtracking search for a line spread containing no full regulus
/// (on-the-fly rejection: a partial spread that contains all q+1 lines of
/// some regulus is pruned).  Exhausting the tree refutes existence.
inline RegulusFreeSearchResult regulus_free_spread_search(const SubspaceFamily& lines,
                                                          std::uint64_t max_nodes = 200'000'000) {
  if (lines.space().dim() != 3 || lines.k() != 1)
    throw std::invalid_argument("regulus-free search applies to line spreads of PG(3,q)");
  lines.meet_graph();
  const int npts = lines.space().point_count();
  const std::size_t spread_size = static_cast<std::size_t>(npts) / lines.points_of(0).size();

  RegulusFreeSearchResult out;
  Bits covered(npts);
  Bits chosen_bits(lines.size());
  std::vector<int> chosen;
  bool aborted = false;

  // Adding `cand` may complete a regulus only if the regulus through
  // (cand, a, b) has all transversal-transversals inside the new partial.
  auto completes_regulus = [&](int cand) {
    for (std::size_t x = 0; x < chosen.size(); ++x)
      for (std::size_t y = x + 1; y < chosen.size(); ++y) {
        const Bits t = regulus_detail::transversal_bits(lines, cand, chosen[x], chosen[y]);
        const auto tidx = t.to_indices();
        Bits r = regulus_detail::transversal_bits(lines, tidx[0], tidx[1], tidx[2]);
        r.reset(cand);
        if (r.subset_of(chosen_bits)) return true;
      }
    return false;
  };

  std::function<bool()> dfs = [&]() -> bool {
    if (++out.nodes > max_nodes) {
      aborted = true;
      return true;
    }
    if (chosen.size() == spread_size) return true;
    int p = 0;
    while (covered.test(p)) ++p;
    for (int cand : lines.through_point(p)) {
      if (lines.bits_of(cand).intersects(covered)) continue;
      if (chosen.size() >= 2 && completes_regulus(cand)) continue;
      covered |= lines.bits_of(cand);
      chosen.push_back(cand);
      chosen_bits.set(cand);
      if (dfs()) return true;
      chosen_bits.reset(cand);
      chosen.pop_back();
      for (int pt : lines.points_of(cand)) covered.reset(pt);
    }
    return false;
  };

  const bool found = dfs();
  if (aborted)
    out.status = SearchStatus::node_limit;
  else if (found) {
    out.status = SearchStatus::found;
    out.members = chosen;
    std::sort(out.members.begin(), out.members.end());
  } else {
    out.status = SearchStatus::exhausted;
  }
  return out;
}

// ---- serialization ----

inline nlohmann::json spread_to_json(const SubspaceFamily& fam, const std::vector<int>& members, int fold) {
  nlohmann::json j;
  j["ambient"] = {fam.space().dim(), fam.space().q()};
  j["dim"] = fam.k();
  j["fold"] = fold;
  nlohmann::json mem = nlohmann::json::array();
  for (int m : members) mem.push_back(fam.member(m).basis);
  j["members"] = std::move(mem);
  return j;
}

}  // namespace geofactor
