#pragma once

// PG(n,q) and AG(n,q): canonical point and subspace enumeration, span/meet,
// projectivities, the hyperplane-at-infinity split and parallel classes.
//
// Canonical forms are chosen so that set equality of geometric objects is
// representation equality: points are normalized to leading coordinate 1,
// subspaces are stored as reduced row echelon bases, projectivities are
// scaled so their first nonzero entry is 1.  Points are indexed once per
// (n,q) in lexicographic order of normalized coordinate tuples, and all
// downstream certificates use those integer indices.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geofactor/galois.hpp"

namespace geofactor {

using BigInt = boost::multiprecision::cpp_int;

/// Gaussian binomial [n k]_q as an exact integer; 0 when k < 0 or k > n.
inline BigInt gaussian_binomial_big(int n, int k, std::int64_t q) {
  if (k < 0 || k > n) return 0;
  BigInt num = 1, den = 1;
  BigInt qn = 1, qk = 1;
  for (int i = 0; i < n; ++i) qn *= q;
  for (int i = 0; i < k; ++i) qk *= q;
  BigInt qpow = 1;
  for (int i = 0; i < k; ++i) {
    num *= (qn - qpow);
    den *= (qk - qpow);
    qpow *= q;
  }
  return num / den;
}

inline std::int64_t gaussian_binomial(int n, int k, std::int64_t q) {
  const BigInt v = gaussian_binomial_big(n, k, q);
  if (v > std::numeric_limits<std::int64_t>::max())
    throw std::overflow_error("gaussian binomial does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

/// Coordinates of a projective point: field element indices, length n+1,
/// normalized so the first nonzero entry is 1.
using PointCoords = std::vector<std::int64_t>;

class ProjectiveSpace;
using SpacePtr = std::shared_ptr<const ProjectiveSpace>;

/// A k-dimensional subspace of PG(n,q), held as an RREF basis matrix.
struct Subspace {
  int n = 0;
  std::int64_t q = 0;
  int k = -1;  // projective dimension; -1 denotes the empty subspace
  std::vector<std::vector<std::int64_t>> basis;  // (k+1) x (n+1), RREF

  bool empty() const { return k < 0; }
  friend bool operator==(const Subspace&, const Subspace&) = default;
  friend bool operator<(const Subspace& a, const Subspace& b) {
    if (a.k != b.k) return a.k < b.k;
    return a.basis < b.basis;
  }
};

struct Projectivity {
  int n = 0;
  std::int64_t q = 0;
  std::vector<std::vector<std::int64_t>> matrix;  // (n+1) x (n+1), first nonzero entry scaled to 1

  friend bool operator==(const Projectivity&, const Projectivity&) = default;
  friend bool operator<(const Projectivity& a, const Projectivity& b) { return a.matrix < b.matrix; }
};

class ProjectiveSpace : public std::enable_shared_from_this<ProjectiveSpace> {
 public:
  static constexpr std::int64_t kDefaultMaxPoints = 1 << 16;

  static SpacePtr make(int n, FieldPtr field, std::int64_t max_points = kDefaultMaxPoints) {
    return SpacePtr(new ProjectiveSpace(n, std::move(field), max_points));
  }

  static SpacePtr make(int n, int p, int e, std::int64_t max_points = kDefaultMaxPoints) {
    return make(n, Field::make(p, e), max_points);
  }

  int dim() const { return n_; }
  std::int64_t q() const { return field_->order(); }
  const Field& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }

  int point_count() const { return static_cast<int>(points_.size()); }
  const std::vector<PointCoords>& points() const { return points_; }
  const PointCoords& point(int idx) const { return points_.at(static_cast<std::size_t>(idx)); }

  PointCoords normalize(PointCoords v) const {
    for (auto c : v) {
      if (c != 0) {
        if (c != 1) {
          const std::int64_t s = field_->inv(c);
          for (auto& x : v) x = field_->mul(x, s);
        }
        return v;
      }
    }
    throw std::invalid_argument("cannot normalize the zero vector");
  }

  int point_index(const PointCoords& v) const {
    const auto it = index_.find(normalize(v));
    if (it == index_.end()) throw std::logic_error("point not found in enumeration");
    return it->second;
  }

  /// Label "(c0:c1:...:cn)" with field elements printed as integer indices.
  std::string point_label(int idx) const {
    const auto& v = point(idx);
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ':';
      s += std::to_string(v[i]);
    }
    s += ')';
    return s;
  }

  std::vector<std::string> point_labels() const {
    std::vector<std::string> out;
    out.reserve(points_.size());
    for (int i = 0; i < point_count(); ++i) out.push_back(point_label(i));
    return out;
  }

 private:
  ProjectiveSpace(int n, FieldPtr field, std::int64_t max_points) : n_(n), field_(std::move(field)) {
    if (n < 1) throw std::invalid_argument("projective dimension must be >= 1");
    const std::int64_t q = field_->order();
    BigInt expect = 0;
    {
      BigInt qp = 1;
      for (int i = 0; i <= n; ++i) {
        expect += qp;
        qp *= q;
      }
    }
    if (expect > max_points) throw std::invalid_argument("point count exceeds the configured limit");

    // Lexicographic odometer over coordinate tuples; keep the tuples that are
    // already normalized.  These appear in lexicographic order.
    PointCoords v(static_cast<std::size_t>(n + 1), 0);
    while (true) {
      int first_nonzero = -1;
      for (int i = 0; i <= n; ++i) {
        if (v[static_cast<std::size_t>(i)] != 0) {
          first_nonzero = i;
          break;
        }
      }
      if (first_nonzero >= 0 && v[static_cast<std::size_t>(first_nonzero)] == 1) {
        index_.emplace(v, static_cast<int>(points_.size()));
        points_.push_back(v);
      }
      int pos = n;
      while (pos >= 0) {
        if (++v[static_cast<std::size_t>(pos)] < q) break;
        v[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }

  int n_;
  FieldPtr field_;
  std::vector<PointCoords> points_;
  std::map<PointCoords, int> index_;
};

namespace linalg {

/// In-place reduction to RREF; returns the rank.  Rows are vectors over the
/// space's field, compared and scaled through field index arithmetic.
inline int rref(const Field& F, std::vector<std::vector<std::int64_t>>& rows) {
  const int nrows = static_cast<int>(rows.size());
  if (nrows == 0) return 0;
  const int ncols = static_cast<int>(rows[0].size());
  int rank = 0;
  for (int col = 0; col < ncols && rank < nrows; ++col) {
    int pivot = -1;
    for (int r = rank; r < nrows; ++r) {
      if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[static_cast<std::size_t>(rank)], rows[static_cast<std::size_t>(pivot)]);
    auto& prow = rows[static_cast<std::size_t>(rank)];
    const std::int64_t s = F.inv(prow[static_cast<std::size_t>(col)]);
    for (auto& x : prow) x = F.mul(x, s);
    for (int r = 0; r < nrows; ++r) {
      if (r == rank) continue;
      auto& row = rows[static_cast<std::size_t>(r)];
      const std::int64_t f = row[static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (int c = 0; c < ncols; ++c) {
        row[static_cast<std::size_t>(c)] =
            F.sub(row[static_cast<std::size_t>(c)], F.mul(f, prow[static_cast<std::size_t>(c)]));
      }
    }
    ++rank;
  }
  rows.resize(static_cast<std::size_t>(rank));
  return rank;
}

inline std::vector<std::vector<std::int64_t>> mat_mul(const Field& F,
                                                      const std::vector<std::vector<std::int64_t>>& A,
                                                      const std::vector<std::vector<std::int64_t>>& B) {
  const std::size_t n = A.size(), m = B[0].size(), inner = B.size();
  std::vector<std::vector<std::int64_t>> C(n, std::vector<std::int64_t>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      const std::int64_t a = A[i][k];
      if (a == 0) continue;
      for (std::size_t j = 0; j < m; ++j) C[i][j] = F.add(C[i][j], F.mul(a, B[k][j]));
    }
  return C;
}

inline std::vector<std::int64_t> vec_mat(const Field& F, const std::vector<std::int64_t>& v,
                                         const std::vector<std::vector<std::int64_t>>& M) {
  const std::size_t m = M[0].size();
  std::vector<std::int64_t> r(m, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m; ++j) r[j] = F.add(r[j], F.mul(v[i], M[i][j]));
  }
  return r;
}

}  // namespace linalg

inline void check_same_ambient(const ProjectiveSpace& space, const Subspace& s) {
  if (s.n != space.dim() || s.q != space.q())
    throw std::invalid_argument("subspace ambient (n,q) does not match the space");
}

/// Span of arbitrary row vectors, as a canonical Subspace.
inline Subspace span_rows(const ProjectiveSpace& space, std::vector<std::vector<std::int64_t>> rows) {
  const int rank = linalg::rref(space.field(), rows);
  Subspace s;
  s.n = space.dim();
  s.q = space.q();
  s.k = rank - 1;
  s.basis = std::move(rows);
  return s;
}

inline Subspace span_points(const ProjectiveSpace& space, const std::vector<int>& point_idxs) {
  std::vector<std::vector<std::int64_t>> rows;
  rows.reserve(point_idxs.size());
  for (int p : point_idxs) rows.push_back(space.point(p));
  return span_rows(space, std::move(rows));
}

inline Subspace span(const ProjectiveSpace& space, const Subspace& a, const Subspace& b) {
  check_same_ambient(space, a);
  check_same_ambient(space, b);
  auto rows = a.basis;
  rows.insert(rows.end(), b.basis.begin(), b.basis.end());
  return span_rows(space, std::move(rows));
}

/// Row-space intersection.  The result has k = -1 when the meet is empty.
inline Subspace meet(const ProjectiveSpace& space, const Subspace& a, const Subspace& b) {
  check_same_ambient(space, a);
  check_same_ambient(space, b);
  const Field& F = space.field();
  const int ra = a.k + 1, rb = b.k + 1;
  // Kernel of (x,y) -> x*A + y*B; each kernel vector yields x*A in the meet.
  // Row-reduce the stacked matrix [A;B] augmented with an identity to track
  // the combinations that vanish.
  const int rows_n = ra + rb;
  const int cols_n = space.dim() + 1;
  std::vector<std::vector<std::int64_t>> aug(static_cast<std::size_t>(rows_n),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(cols_n + rows_n), 0));
  for (int i = 0; i < ra; ++i) {
    for (int c = 0; c < cols_n; ++c) aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = a.basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols_n + i)] = 1;
  }
  for (int i = 0; i < rb; ++i) {
    for (int c = 0; c < cols_n; ++c) aug[static_cast<std::size_t>(ra + i)][static_cast<std::size_t>(c)] = b.basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    aug[static_cast<std::size_t>(ra + i)][static_cast<std::size_t>(cols_n + ra + i)] = 1;
  }
  // Eliminate on the first cols_n columns only.
  int rank = 0;
  for (int col = 0; col < cols_n && rank < rows_n; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows_n; ++r)
      if (aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(aug[static_cast<std::size_t>(rank)], aug[static_cast<std::size_t>(pivot)]);
    auto& prow = aug[static_cast<std::size_t>(rank)];
    const std::int64_t s = F.inv(prow[static_cast<std::size_t>(col)]);
    for (auto& x : prow) x = F.mul(x, s);
    for (int r = 0; r < rows_n; ++r) {
      if (r == rank) continue;
      auto& row = aug[static_cast<std::size_t>(r)];
      const std::int64_t f = row[static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (std::size_t c = 0; c < row.size(); ++c) row[c] = F.sub(row[c], F.mul(f, prow[c]));
    }
    ++rank;
  }
  // Rows past `rank` vanish on the geometry columns; their multipliers give
  // kernel vectors (x,y).  Recover x*A for each.
  std::vector<std::vector<std::int64_t>> meet_rows;
  for (int r = rank; r < rows_n; ++r) {
    std::vector<std::int64_t> x(static_cast<std::size_t>(ra));
    for (int i = 0; i < ra; ++i) x[static_cast<std::size_t>(i)] = aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(cols_n + i)];
    std::vector<std::int64_t> vec(static_cast<std::size_t>(cols_n), 0);
    for (int i = 0; i < ra; ++i) {
      if (x[static_cast<std::size_t>(i)] == 0) continue;
      for (int c = 0; c < cols_n; ++c)
        vec[static_cast<std::size_t>(c)] = F.add(vec[static_cast<std::size_t>(c)],
                                                 F.mul(x[static_cast<std::size_t>(i)], a.basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]));
    }
    meet_rows.push_back(std::move(vec));
  }
  return span_rows(space, std::move(meet_rows));
}

/// All k-subspaces in canonical order (sorted RREF bases).  The count equals
/// [n+1 choose k+1]_q.
inline std::vector<Subspace> enumerate_subspaces(const ProjectiveSpace& space, int k,
                                                 std::int64_t max_count = 1 << 22) {
  const int n = space.dim();
  if (k < 0 || k > n) throw std::invalid_argument("subspace dimension out of range");
  const std::int64_t q = space.q();
  const BigInt total = gaussian_binomial_big(n + 1, k + 1, q);
  if (total > max_count) throw std::invalid_argument("subspace enumeration exceeds the configured limit");

  const int rows_n = k + 1, cols_n = n + 1;
  std::vector<Subspace> out;
  out.reserve(static_cast<std::size_t>(total));

  // Schubert cells: choose pivot columns, then run an odometer over the free
  // entries (entries right of the row's pivot, outside other pivot columns).
  std::vector<int> pivots(static_cast<std::size_t>(rows_n));
  for (int i = 0; i < rows_n; ++i) pivots[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols_n), false);
    for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<std::pair<int, int>> free_cells;
    for (int r = 0; r < rows_n; ++r)
      for (int c = pivots[static_cast<std::size_t>(r)] + 1; c < cols_n; ++c)
        if (!is_pivot[static_cast<std::size_t>(c)]) free_cells.emplace_back(r, c);

    std::vector<std::int64_t> vals(free_cells.size(), 0);
    while (true) {
      Subspace s;
      s.n = n;
      s.q = q;
      s.k = k;
      s.basis.assign(static_cast<std::size_t>(rows_n), std::vector<std::int64_t>(static_cast<std::size_t>(cols_n), 0));
      for (int r = 0; r < rows_n; ++r) s.basis[static_cast<std::size_t>(r)][static_cast<std::size_t>(pivots[static_cast<std::size_t>(r)])] = 1;
      for (std::size_t i = 0; i < free_cells.size(); ++i)
        s.basis[static_cast<std::size_t>(free_cells[i].first)][static_cast<std::size_t>(free_cells[i].second)] = vals[i];
      out.push_back(std::move(s));
      std::size_t pos = 0;
      for (; pos < vals.size(); ++pos) {
        if (++vals[pos] < q) break;
        vals[pos] = 0;
      }
      if (pos == vals.size()) break;
    }

    // next pivot combination (lexicographic)
    int i = rows_n - 1;
    while (i >= 0 && pivots[static_cast<std::size_t>(i)] == cols_n - rows_n + i) --i;
    if (i < 0) break;
    ++pivots[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < rows_n; ++j) pivots[static_cast<std::size_t>(j)] = pivots[static_cast<std::size_t>(j - 1)] + 1;
  }

  std::sort(out.begin(), out.end());
  if (BigInt(out.size()) != total) throw std::logic_error("subspace enumeration count mismatch");
  return out;
}

/// Sorted indices of the points lying in s.
inline std::vector<int> subspace_points(const ProjectiveSpace& space, const Subspace& s) {
  check_same_ambient(space, s);
  if (s.empty()) return {};
  const std::int64_t q = space.q();
  const int rows_n = s.k + 1;
  std::vector<int> pts;
  // Normalized coefficient tuples over the basis rows = points of PG(k,q).
  std::vector<std::int64_t> mu(static_cast<std::size_t>(rows_n), 0);
  while (true) {
    int first_nonzero = -1;
    for (int i = 0; i < rows_n; ++i)
      if (mu[static_cast<std::size_t>(i)] != 0) {
        first_nonzero = i;
        break;
      }
    if (first_nonzero >= 0 && mu[static_cast<std::size_t>(first_nonzero)] == 1) {
      const auto vec = linalg::vec_mat(space.field(), mu, s.basis);
      pts.push_back(space.point_index(vec));
    }
    int pos = rows_n - 1;
    while (pos >= 0) {
      if (++mu[static_cast<std::size_t>(pos)] < q) break;
      mu[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

inline bool subspace_contains_point(const ProjectiveSpace& space, const Subspace& s, int point_idx) {
  auto rows = s.basis;
  rows.push_back(space.point(point_idx));
  return linalg::rref(space.field(), rows) == s.k + 1;
}

inline Projectivity make_projectivity(const ProjectiveSpace& space,
                                      std::vector<std::vector<std::int64_t>> matrix) {
  const int n = space.dim();
  if (static_cast<int>(matrix.size()) != n + 1)
    throw std::invalid_argument("projectivity matrix has wrong dimensions");
  for (const auto& row : matrix)
    if (static_cast<int>(row.size()) != n + 1) throw std::invalid_argument("projectivity matrix has wrong dimensions");
  {
    auto copy = matrix;
    if (linalg::rref(space.field(), copy) != n + 1) throw std::invalid_argument("projectivity matrix is singular");
  }
  // Canonical scaling: first nonzero entry in reading order becomes 1.
  const Field& F = space.field();
  std::int64_t lead = 0;
  for (const auto& row : matrix) {
    for (auto x : row)
      if (x != 0) {
        lead = x;
        break;
      }
    if (lead != 0) break;
  }
  if (lead != 1) {
    const std::int64_t s = F.inv(lead);
    for (auto& row : matrix)
      for (auto& x : row) x = F.mul(x, s);
  }
  Projectivity g;
  g.n = n;
  g.q = space.q();
  g.matrix = std::move(matrix);
  return g;
}

inline Projectivity identity_projectivity(const ProjectiveSpace& space) {
  const int n = space.dim();
  std::vector<std::vector<std::int64_t>> m(static_cast<std::size_t>(n + 1),
                                           std::vector<std::int64_t>(static_cast<std::size_t>(n + 1), 0));
  for (int i = 0; i <= n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  return make_projectivity(space, std::move(m));
}

/// apply(compose(g,h), x) == apply(g, apply(h, x)).
inline Projectivity compose(const ProjectiveSpace& space, const Projectivity& g, const Projectivity& h) {
  if (g.n != space.dim() || h.n != space.dim() || g.q != space.q() || h.q != space.q())
    throw std::invalid_argument("projectivity ambient mismatch");
  return make_projectivity(space, linalg::mat_mul(space.field(), h.matrix, g.matrix));
}

inline Projectivity inverse_of(const ProjectiveSpace& space, const Projectivity& g) {
  const Field& F = space.field();
  const int dim = space.dim() + 1;
  std::vector<std::vector<std::int64_t>> aug(static_cast<std::size_t>(dim),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(2 * dim), 0));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j)
      aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          g.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(dim + i)] = 1;
  }
  if (linalg::rref(F, aug) != dim) throw std::invalid_argument("projectivity is singular");
  std::vector<std::vector<std::int64_t>> inv(static_cast<std::size_t>(dim),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(dim + j)];
  return make_projectivity(space, std::move(inv));
}

inline int apply_projectivity(const ProjectiveSpace& space, const Projectivity& g, int point_idx) {
  if (g.n != space.dim() || g.q != space.q()) throw std::invalid_argument("projectivity ambient mismatch");
  return space.point_index(linalg::vec_mat(space.field(), space.point(point_idx), g.matrix));
}

inline Subspace apply_projectivity(const ProjectiveSpace& space, const Projectivity& g, const Subspace& s) {
  if (g.n != space.dim() || g.q != space.q()) throw std::invalid_argument("projectivity ambient mismatch");
  check_same_ambient(space, s);
  std::vector<std::vector<std::int64_t>> rows;
  rows.reserve(s.basis.size());
  for (const auto& r : s.basis) rows.push_back(linalg::vec_mat(space.field(), r, g.matrix));
  return span_rows(space, std::move(rows));
}

/// An affine d-space: the projective d-space minus its points at infinity.
struct AffineSubspace {
  Subspace projective;
  Subspace trace_at_infinity;      // (d-1)-space inside H_inf
  std::vector<int> affine_points;  // affine indices, sorted
};

/// AG(n,q) carved out of PG(n,q) by a chosen hyperplane at infinity.
class AffineModel {
 public:
  AffineModel(SpacePtr space, Subspace hinf) : space_(std::move(space)), hinf_(std::move(hinf)) {
    check_same_ambient(*space_, hinf_);
    if (hinf_.k != space_->dim() - 1) throw std::invalid_argument("hyperplane at infinity must have dimension n-1");
    proj_to_affine_.assign(static_cast<std::size_t>(space_->point_count()), -1);
    const auto inf_pts = subspace_points(*space_, hinf_);
    std::vector<bool> at_inf(static_cast<std::size_t>(space_->point_count()), false);
    for (int pt : inf_pts) at_inf[static_cast<std::size_t>(pt)] = true;
    for (int pt = 0; pt < space_->point_count(); ++pt) {
      if (!at_inf[static_cast<std::size_t>(pt)]) {
        proj_to_affine_[static_cast<std::size_t>(pt)] = static_cast<int>(affine_points_.size());
        affine_points_.push_back(pt);
      }
    }
  }

  /// Default model: H_inf is the hyperplane x0 = 0.
  static AffineModel standard(SpacePtr space) {
    const int n = space->dim();
    std::vector<std::vector<std::int64_t>> rows;
    for (int i = 1; i <= n; ++i) {
      std::vector<std::int64_t> row(static_cast<std::size_t>(n + 1), 0);
      row[static_cast<std::size_t>(i)] = 1;
      rows.push_back(std::move(row));
    }
    Subspace hinf = span_rows(*space, std::move(rows));
    return AffineModel(std::move(space), std::move(hinf));
  }

  const ProjectiveSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const Subspace& hyperplane_at_infinity() const { return hinf_; }

  int affine_count() const { return static_cast<int>(affine_points_.size()); }
  /// Projective index of affine point a.
  int projective_index(int a) const { return affine_points_.at(static_cast<std::size_t>(a)); }
  /// Affine index of a projective point, or -1 when it lies at infinity.
  int affine_index(int proj) const { return proj_to_affine_.at(static_cast<std::size_t>(proj)); }

  std::vector<std::string> affine_labels() const {
    std::vector<std::string> out;
    out.reserve(affine_points_.size());
    for (int pt : affine_points_) out.push_back(space_->point_label(pt));
    return out;
  }

  /// All affine d-spaces, grouped into parallel classes keyed by the
  /// (d-1)-space at infinity.  Classes and members are canonically ordered.
  std::vector<std::vector<AffineSubspace>> parallel_classes(int d) const {
    if (d < 1 || d >= space_->dim()) throw std::invalid_argument("affine subspace dimension out of range");
    std::map<Subspace, std::vector<AffineSubspace>> classes;
    for (const auto& s : enumerate_subspaces(*space_, d)) {
      Subspace trace = meet(*space_, s, hinf_);
      if (trace.k == d) continue;  // lies inside H_inf
      if (trace.k != d - 1) throw std::logic_error("unexpected trace dimension");
      AffineSubspace as;
      as.projective = s;
      as.trace_at_infinity = trace;
      for (int pt : subspace_points(*space_, s)) {
        const int a = affine_index(pt);
        if (a >= 0) as.affine_points.push_back(a);
      }
      std::sort(as.affine_points.begin(), as.affine_points.end());
      classes[std::move(trace)].push_back(std::move(as));
    }
    std::vector<std::vector<AffineSubspace>> out;
    out.reserve(classes.size());
    for (auto& [key, members] : classes) {
      std::sort(members.begin(), members.end(),
                [](const AffineSubspace& a, const AffineSubspace& b) { return a.projective < b.projective; });
      out.push_back(std::move(members));
    }
    return out;
  }

 private:
  SpacePtr space_;
  Subspace hinf_;
  std::vector<int> affine_points_;
  std::vector<int> proj_to_affine_;
};

}  // namespace geofactor
