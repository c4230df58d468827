#pragma once

// Subgeometries PG(n,q) of PG(n,q^k): the Singer-coset partition, exhaustive
// subgeometry and partition enumeration at desk scale, the exact counting
// bundle s / theta / p0 / rho0 / S_e / lambda, the m-factorization of
// lambda*K_v built from all partitions, the number-theoretic divides
// predicate, and the divisibility constraints behind the indecomposability
// statement.
//
// Two independent representations deliberately cross-validate: the
// discrete-log coset model constructs partitions, while the frame-based
// validator checks each class against a from-scratch reconstruction.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geofactor/factorization.hpp"
#include "geofactor/field_model.hpp"
#include "geofactor/galois.hpp"
#include "geofactor/geometry.hpp"
#include "geofactor/search.hpp"

namespace geofactor {

/// A copy of PG(n,q) inside PG(n,q^k), as a sorted point-index set.
struct Subgeometry {
  std::vector<int> points;
};

/// Frame-based validator: locate a frame inside the point set, reconstruct
/// the subgeometry it generates (coordinates in the embedded subfield), and
/// require set equality.  Independent of the coset construction.
inline std::optional<Violation> validate_subgeometry(const ProjectiveSpace& space, const FieldPtr& subfield,
                                                     const std::vector<int>& pts) {
  const Field& K = space.field();
  const int n = space.dim();
  if (subfield->characteristic() != K.characteristic() || K.degree() % subfield->degree() != 0)
    return Violation{"subfield does not embed into the coordinate field"};
  const std::int64_t q = subfield->order();
  BigInt expect = 0;
  {
    BigInt qp = 1;
    for (int i = 0; i <= n; ++i) {
      expect += qp;
      qp *= q;
    }
  }
  if (BigInt(pts.size()) != expect)
    return Violation{"subgeometry candidate has " + std::to_string(pts.size()) + " points"};

  // Greedy frame: n+1 independent points of the set...
  std::vector<std::vector<std::int64_t>> basis;
  std::vector<int> basis_pts;
  for (int p : pts) {
    auto rows = basis;
    rows.push_back(space.point(p));
    if (linalg::rref(K, rows) == static_cast<int>(basis.size()) + 1) {
      basis.push_back(space.point(p));
      basis_pts.push_back(p);
      if (static_cast<int>(basis.size()) == n + 1) break;
    }
  }
  if (static_cast<int>(basis.size()) != n + 1) return Violation{"candidate spans no frame (rank deficient)"};

  // ...plus a unit point with all coordinates nonzero in that basis.
  std::vector<std::vector<std::int64_t>> binv_rows(basis);
  // Invert the basis matrix to solve for coordinates.
  const int dim = n + 1;
  std::vector<std::vector<std::int64_t>> aug(static_cast<std::size_t>(dim),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(2 * dim), 0));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(dim + i)] = 1;
  }
  if (linalg::rref(K, aug) != dim) return Violation{"frame basis is singular"};
  std::vector<std::vector<std::int64_t>> binv(static_cast<std::size_t>(dim),
                                              std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) binv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(dim + j)];

  std::vector<std::int64_t> unit_coords;
  for (int p : pts) {
    const auto c = linalg::vec_mat(K, space.point(p), binv);
    bool all_nonzero = true;
    for (auto x : c) all_nonzero &= (x != 0);
    if (all_nonzero) {
      unit_coords = c;
      break;
    }
  }
  if (unit_coords.empty()) return Violation{"no unit point completes a frame inside the candidate"};

  // Scale basis rows by the unit coordinates and reconstruct.
  const SubfieldEmbedding embed(subfield, space.field_ptr());
  std::vector<std::vector<std::int64_t>> scaled(basis);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      scaled[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          K.mul(unit_coords[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);

  std::set<int> generated;
  const SpacePtr small = ProjectiveSpace::make(n, subfield);
  for (const auto& y : small->points()) {
    std::vector<std::int64_t> lifted(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) lifted[static_cast<std::size_t>(i)] = embed.apply(y[static_cast<std::size_t>(i)]);
    generated.insert(space.point_index(linalg::vec_mat(K, lifted, scaled)));
  }
  std::set<int> given(pts.begin(), pts.end());
  if (generated != given) return Violation{"candidate differs from the subgeometry its frame generates"};
  return std::nullopt;
}

struct SingerPartition {
  SpacePtr space;                        // PG(n, q^k)
  FieldPtr subfield;                     // GF(q)
  std::vector<std::vector<int>> classes; // theta classes of sorted point indices
};

/// Partition of PG(n,q^k) into subgeometries PG(n,q) via multiplicative
/// cosets: points are GF(q^{k(n+1)})^*/GF(q^k)^*, the canonical class is the
/// image of GF(q^{n+1})^*, and the classes are its alpha^t translates.
/// Exists iff gcd(k, n+1) = 1.
inline SingerPartition singer_partition(int n, FieldPtr base_q, int k) {
  if (k < 2) throw std::invalid_argument("need k >= 2");
  if (std::gcd(k, n + 1) != 1)
    throw std::invalid_argument("singer partition requires gcd(k, n+1) = 1: got k = " + std::to_string(k) +
                                ", n = " + std::to_string(n));
  const int p = base_q->characteristic();
  const int eq = base_q->degree();
  const FieldPtr K = Field::make(p, eq * k);            // GF(q^k)
  const FieldPtr Fsub = Field::make(p, eq * (n + 1));   // GF(q^{n+1})
  const SpacePtr space = ProjectiveSpace::make(n, K);
  const FieldModel model(K, n + 1);                     // E = GF(q^{k(n+1)})
  const Field& E = *model.extension();
  const SubfieldEmbedding embed_F(Fsub, model.extension());

  const BigInt theta = (BigInt(E.order()) - 1) * (base_q->order() - 1) /
                       ((BigInt(K->order()) - 1) * (Fsub->order() - 1));
  SingerPartition out;
  out.space = space;
  out.subfield = base_q;
  for (std::int64_t t = 0; t < theta; ++t) {
    const std::int64_t at = E.exp(t);
    std::set<int> cls;
    for (std::int64_t f = 1; f < Fsub->order(); ++f)
      cls.insert(model.point_of(*space, E.mul(at, embed_F.apply(f))));
    out.classes.emplace_back(cls.begin(), cls.end());
  }
  // Disjointness and coverage.
  std::vector<int> cov(static_cast<std::size_t>(space->point_count()), 0);
  for (const auto& cls : out.classes)
    for (int pt : cls) ++cov[static_cast<std::size_t>(pt)];
  for (int pt = 0; pt < space->point_count(); ++pt)
    if (cov[static_cast<std::size_t>(pt)] != 1) throw std::logic_error("singer classes do not partition the points");
  // Every class must validate as a subgeometry against the independent
  // frame-based reconstruction.
  for (const auto& cls : out.classes)
    if (auto bad = validate_subgeometry(*space, base_q, cls))
      throw std::logic_error("singer class fails subgeometry validation: " + bad->message);
  return out;
}

/// Exhaustive subgeometry enumeration by frame completion: every ordered
/// independent (n+1)-tuple extended by every admissible unit point generates
/// one subgeometry; distinct results are collected in canonical order.
inline std::vector<Subgeometry> enumerate_subgeometries(const SpacePtr& space, const FieldPtr& subfield,
                                                        std::int64_t max_frames = 50'000'000) {
  const Field& K = space->field();
  const int n = space->dim();
  const int dim = n + 1;
  const SubfieldEmbedding embed(subfield, space->field_ptr());
  const SpacePtr small = ProjectiveSpace::make(n, subfield);

  {
    BigInt frames = 1;
    for (int t = 0; t < dim + 1; ++t) frames *= space->point_count();
    if (frames > max_frames) throw std::invalid_argument("frame enumeration exceeds the configured limit");
  }

  std::set<std::vector<int>> found;
  std::vector<int> basis_pts;
  std::vector<std::vector<std::int64_t>> basis;

  const std::function<void()> extend = [&]() {
    if (static_cast<int>(basis_pts.size()) == dim) {
      // Invert the basis once; then each unit candidate is one solve.
      std::vector<std::vector<std::int64_t>> aug(static_cast<std::size_t>(dim),
                                                 std::vector<std::int64_t>(static_cast<std::size_t>(2 * dim), 0));
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(dim + i)] = 1;
      }
      if (linalg::rref(K, aug) != dim) throw std::logic_error("independent basis failed to invert");
      std::vector<std::vector<std::int64_t>> binv(static_cast<std::size_t>(dim),
                                                  std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0));
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) binv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(dim + j)];
      for (int u = 0; u < space->point_count(); ++u) {
        const auto c = linalg::vec_mat(K, space->point(u), binv);
        bool all_nonzero = true;
        for (auto x : c) all_nonzero &= (x != 0);
        if (!all_nonzero) continue;
        std::vector<std::vector<std::int64_t>> scaled(basis);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            scaled[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                K.mul(c[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        std::set<int> gen;
        for (const auto& y : small->points()) {
          std::vector<std::int64_t> lifted(static_cast<std::size_t>(dim));
          for (int i = 0; i < dim; ++i) lifted[static_cast<std::size_t>(i)] = embed.apply(y[static_cast<std::size_t>(i)]);
          gen.insert(space->point_index(linalg::vec_mat(K, lifted, scaled)));
        }
        found.emplace(gen.begin(), gen.end());
      }
      return;
    }
    for (int p = 0; p < space->point_count(); ++p) {
      auto rows = basis;
      rows.push_back(space->point(p));
      if (linalg::rref(K, rows) != static_cast<int>(basis.size()) + 1) continue;
      basis.push_back(space->point(p));
      basis_pts.push_back(p);
      extend();
      basis.pop_back();
      basis_pts.pop_back();
    }
  };
  extend();

  std::vector<Subgeometry> out;
  out.reserve(found.size());
  for (auto& pts : found) out.push_back(Subgeometry{pts});
  return out;
}

struct PartitionEnumeration {
  std::vector<std::vector<int>> partitions;  // each: sorted indices into the subgeometry list
  bool complete = false;
  std::uint64_t nodes = 0;
};

/// All partitions of the point set into subgeometries, by exact cover over
/// the enumerated subgeometries.
inline PartitionEnumeration enumerate_subgeometry_partitions(const ProjectiveSpace& space,
                                                             const std::vector<Subgeometry>& subs,
                                                             std::uint64_t max_nodes = 50'000'000) {
  MultiCoverProblem pb;
  pb.universe = space.point_count();
  pb.fold = 1;
  pb.max_nodes = max_nodes;
  pb.sets.reserve(subs.size());
  for (const auto& s : subs) pb.sets.push_back(s.points);
  PartitionEnumeration out;
  MultiCoverSearch search(pb);
  const MultiCoverResult r = search.count_all([&out](const std::vector<int>& sol) {
    auto s = sol;
    std::sort(s.begin(), s.end());
    out.partitions.push_back(std::move(s));
  });
  out.complete = r.status != SearchStatus::node_limit;
  out.nodes = r.nodes;
  std::sort(out.partitions.begin(), out.partitions.end());
  return out;
}

/// The exact count bundle of the subgeometry constructions.  All identities
/// are checked on construction; a failure aborts loudly.
struct CountBundle {
  int n = 0, k = 0;
  std::int64_t q = 0;
  BigInt s;       // subgeometries PG(n,q) in PG(n,q^k)
  BigInt theta;   // classes per partition
  BigInt p0;      // cyclic projectivities giving distinct partitions (gcd(k,n+1)=1)
  BigInt rho0;    // partitions through a fixed subgeometry
  BigInt S_e;     // subgeometries through two fixed points
  BigInt lambda;  // multigraph multiplicity of the induced factorization
  BigInt v;       // points of PG(n,q^k)
  BigInt m;       // factor degree q(q^n-1)/(q-1)
};

inline CountBundle count_bundle(int n, std::int64_t q, int k) {
  CountBundle cb;
  cb.n = n;
  cb.k = k;
  cb.q = q;
  const BigInt Q = q;
  const auto qpow = [&](std::int64_t e) {
    BigInt r = 1;
    for (std::int64_t t = 0; t < e; ++t) r *= Q;
    return r;
  };
  const std::int64_t choose2 = static_cast<std::int64_t>(n + 1) * n / 2;

  cb.s = qpow(choose2 * (k - 1));
  for (int i = 2; i <= n + 1; ++i) {
    const BigInt num = qpow(static_cast<std::int64_t>(k) * i) - 1;
    const BigInt den = qpow(i) - 1;
    if (num % den != 0) throw std::logic_error("s(n,q,q^k) product is not integral");
    cb.s *= num / den;
  }
  cb.v = (qpow(static_cast<std::int64_t>(k) * (n + 1)) - 1) / (qpow(k) - 1);
  cb.m = Q * (qpow(n) - 1) / (Q - 1);

  if (std::gcd(k, n + 1) == 1) {
    {
      const BigInt num = (qpow(static_cast<std::int64_t>(k) * (n + 1)) - 1) * (Q - 1);
      const BigInt den = (qpow(k) - 1) * (qpow(n + 1) - 1);
      if (num % den != 0) throw std::logic_error("theta is not integral");
      cb.theta = num / den;
    }
    {
      BigInt prod = 1;
      for (int i = 1; i <= n; ++i) prod *= qpow(static_cast<std::int64_t>(k) * i) - 1;
      const BigInt num = qpow(static_cast<std::int64_t>(k) * choose2) * prod;
      if (num % (n + 1) != 0) throw std::logic_error("p0 is not integral");
      cb.p0 = num / (n + 1);
    }
    {
      BigInt prod = 1;
      for (int i = 1; i <= n; ++i) prod *= qpow(i) - 1;
      const BigInt num = qpow(choose2) * prod;
      if (num % (n + 1) != 0) throw std::logic_error("rho0 is not integral");
      cb.rho0 = num / (n + 1);
    }
    {
      BigInt prod = 1;
      for (int i = 1; i <= n - 1; ++i) {
        const BigInt num = qpow(static_cast<std::int64_t>(k) * i) - 1;
        const BigInt den = qpow(i) - 1;
        if (num % den != 0) throw std::logic_error("S_e product is not integral");
        prod *= num / den;
      }
      const BigInt num = qpow(choose2 * (k - 1)) * (qpow(k) - 1) * prod;
      const BigInt den = qpow(k - 1) * (Q - 1);
      if (num % den != 0) throw std::logic_error("S_e is not integral");
      cb.S_e = num / den;
    }
    cb.lambda = cb.S_e * cb.rho0;
    // Direct closed form for lambda must agree with S_e * rho0.
    {
      BigInt prod = 1;
      for (int i = 1; i <= n - 1; ++i) prod *= qpow(static_cast<std::int64_t>(k) * i) - 1;
      const BigInt num = qpow(static_cast<std::int64_t>(k) * choose2) * (qpow(k) - 1) * (qpow(n) - 1) * prod;
      const BigInt den = qpow(k - 1) * (n + 1) * (Q - 1);
      if (num % den != 0 || num / den != cb.lambda)
        throw std::logic_error("lambda closed form disagrees with S_e * rho0");
    }
    // Incidence double count p0 * theta = s * rho0.
    if (cb.p0 * cb.theta != cb.s * cb.rho0) throw std::logic_error("p0 * theta != s * rho0");
    // Factor double count: lambda * C(v,2) = C(m+1,2) * theta * p0.
    if (cb.lambda * cb.v * (cb.v - 1) != (cb.m + 1) * cb.m * cb.theta * cb.p0)
      throw std::logic_error("lambda double count fails");
  }
  return cb;
}

/// The m-factorization of lambda*K_v with one factor per partition of
/// PG(n,q^k) into subgeometries; lambda is recovered from the edge-count
/// identity and confirmed by full verification.
inline Factorization build_subgeometry_factorization(int n, FieldPtr base_q, int k,
                                                     std::uint64_t max_nodes = 50'000'000,
                                                     std::int64_t max_frames = 50'000'000) {
  const SingerPartition sp = singer_partition(n, base_q, k);  // also validates preconditions
  const SpacePtr space = sp.space;
  const auto subs = enumerate_subgeometries(space, base_q, max_frames);
  const auto parts = enumerate_subgeometry_partitions(*space, subs, max_nodes);
  if (!parts.complete) throw std::invalid_argument("partition enumeration hit the node limit");
  const std::int64_t f = static_cast<std::int64_t>(parts.partitions.size());
  if (f == 0) throw std::logic_error("no partitions found despite singer partition existing");

  const std::int64_t v = space->point_count();
  const std::int64_t class_size = static_cast<std::int64_t>(subs.front().points.size());
  const std::int64_t m = class_size - 1;
  const std::int64_t theta = v / class_size;
  // lambda * C(v,2) = C(m+1,2) * theta * f
  const BigInt num = BigInt(m + 1) * m / 2 * theta * f;
  const BigInt den = BigInt(v) * (v - 1) / 2;
  if (num % den != 0) throw std::logic_error("edge-count identity gives non-integral lambda");
  const BigInt lambda_big = num / den;

  Factorization phi;
  phi.v = static_cast<int>(v);
  phi.m = static_cast<int>(m);
  phi.lambda = static_cast<int>(lambda_big);
  phi.labels = space->point_labels();
  phi.provenance = "subgeo n=" + std::to_string(n) + " q=" + std::to_string(base_q->order()) +
                   " k=" + std::to_string(k);
  for (const auto& part : parts.partitions) {
    Factor fac;
    fac.v = phi.v;
    fac.m = phi.m;
    for (int si : part) fac.components.push_back(subs[static_cast<std::size_t>(si)].points);
    phi.factors.push_back(canonical_factor(std::move(fac)));
  }
  std::sort(phi.factors.begin(), phi.factors.end(),
            [](const Factor& a, const Factor& b) { return a.components < b.components; });
  return phi;
}

/// (x^{rs}-1)(x-1) / ((x^r-1)(x^s-1)) is an integer iff gcd(r,s) = 1;
/// decided by exact arithmetic.
inline bool divides_predicate(std::int64_t x, int r, int s) {
  if (x <= 1 || r < 1 || s < 1) throw std::invalid_argument("need x > 1 and r, s >= 1");
  const auto xpow = [&](std::int64_t e) {
    BigInt out = 1;
    for (std::int64_t t = 0; t < e; ++t) out *= x;
    return out;
  };
  const BigInt num = (xpow(static_cast<std::int64_t>(r) * s) - 1) * (x - 1);
  const BigInt den = (xpow(r) - 1) * (xpow(s) - 1);
  return num % den == 0;
}

struct AdmissibleLambdaReport {
  BigInt d;
  BigInt lambda_divisor;  // (q^n-1)/(d(q-1)) must divide lambda
  BigInt f_divisor;       // q^{k-1}(q^{kn}-1)/(d(q^k-1)) must divide f
  bool lambda_ok = false;
  bool f_ok = false;
  bool checked_against_instance = false;
};

/// Divisibility constraints on any m-factorization of lambda*K_v whose
/// factors split into theta complete graphs on subgeometry point counts.
/// Preconditions: gcd(k,n+1) = 1 and gcd(k,n) != 1.
inline AdmissibleLambdaReport admissible_lambda(int n, std::int64_t q, int k,
                                                std::optional<BigInt> lambda = std::nullopt,
                                                std::optional<BigInt> f = std::nullopt) {
  if (std::gcd(k, n + 1) != 1) throw std::invalid_argument("admissible_lambda requires gcd(k, n+1) = 1");
  if (std::gcd(k, n) == 1) throw std::invalid_argument("admissible_lambda requires gcd(k, n) != 1");
  const BigInt Q = q;
  const auto qpow = [&](std::int64_t e) {
    BigInt r = 1;
    for (std::int64_t t = 0; t < e; ++t) r *= Q;
    return r;
  };
  AdmissibleLambdaReport rep;
  const BigInt a = (qpow(static_cast<std::int64_t>(k) * n) - 1) / (qpow(k) - 1);
  const BigInt b = (qpow(n) - 1) / (Q - 1);
  rep.d = boost::multiprecision::gcd(a, b);
  if (b % rep.d != 0 || (qpow(k - 1) * a) % rep.d != 0) throw std::logic_error("divisor arithmetic failed");
  rep.lambda_divisor = b / rep.d;
  rep.f_divisor = qpow(k - 1) * a / rep.d;
  if (lambda && f) {
    rep.lambda_ok = (*lambda % rep.lambda_divisor == 0);
    rep.f_ok = (*f % rep.f_divisor == 0);
    rep.checked_against_instance = true;
  }
  return rep;
}

}  // namespace geofactor
