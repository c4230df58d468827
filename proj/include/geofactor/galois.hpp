#pragma once

// Exact arithmetic in GF(p^e).
//
// Fields are immutable after construction and shared via FieldPtr.  Elements
// are referred to by their integer index: the element with coefficient vector
// (c0, c1, ..., c_{e-1}) has index c0 + c1*p + ... + c_{e-1}*p^{e-1}, so 0 is
// the zero element and 1 is the multiplicative identity.  The defining
// modulus is the lexicographically least monic irreducible (coefficients
// compared low-degree-first), which makes every field, its generator and all
// derived tables reproducible across runs.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace geofactor {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// An element tagged with its owning field (p, e).  Cross-field operations
/// are errors, never coercions.
struct FieldElement {
  int p = 0;
  int e = 0;
  std::int64_t idx = 0;

  bool is_zero() const { return idx == 0; }
  friend bool operator==(const FieldElement&, const FieldElement&) = default;
  friend auto operator<=>(const FieldElement&, const FieldElement&) = default;
};

namespace poly_detail {

// Dense polynomials over GF(p), coefficients ascending by degree.
using Poly = std::vector<int>;

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b, int p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = static_cast<int>((c[i + j] + static_cast<std::int64_t>(a[i]) * b[j]) % p);
  }
  trim(c);
  return c;
}

// Remainder of a modulo a monic divisor.
inline Poly mod_monic(Poly a, const Poly& m, int p) {
  trim(a);
  const int dm = static_cast<int>(m.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= dm) {
    const int shift = static_cast<int>(a.size()) - 1 - dm;
    const int lead = a.back();
    for (int i = 0; i <= dm; ++i) {
      a[shift + i] = ((a[shift + i] - static_cast<std::int64_t>(lead) * m[i]) % p + p) % p;
    }
    trim(a);
  }
  return a;
}

inline bool divides_monic(const Poly& d, const Poly& f, int p) {
  return mod_monic(f, d, p).empty();
}

// Trial division by every monic polynomial of degree 1..deg(f)/2.
inline bool is_irreducible(const Poly& f, int p) {
  const int deg = static_cast<int>(f.size()) - 1;
  if (deg <= 0) return false;
  if (deg == 1) return true;
  for (int d = 1; 2 * d <= deg; ++d) {
    std::int64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::int64_t code = 0; code < count; ++code) {
      Poly g(d + 1, 0);
      std::int64_t c = code;
      for (int i = 0; i < d; ++i) {
        g[i] = static_cast<int>(c % p);
        c /= p;
      }
      g[d] = 1;
      if (divides_monic(g, f, p)) return false;
    }
  }
  return true;
}

}  // namespace poly_detail

/// GF(p^e).  Construct through Field::make, which caches one instance per
/// (p, e) pair; all operations are pure.
class Field {
 public:
  static constexpr std::int64_t kDefaultMaxOrder = std::int64_t{1} << 20;
  static constexpr std::int64_t kTableLimit = std::int64_t{1} << 16;

  static FieldPtr make(int p, int e, std::int64_t max_order = kDefaultMaxOrder) {
    if (e < 1) throw std::invalid_argument("field degree must be >= 1");
    if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime: got " + std::to_string(p));
    std::int64_t q = 1;
    for (int i = 0; i < e; ++i) {
      q *= p;
      if (q > max_order) throw std::invalid_argument("field order p^e exceeds the configured limit");
    }
    static std::mutex mu;
    static std::map<std::pair<int, int>, FieldPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, e}];
    if (!slot) slot = FieldPtr(new Field(p, e, q));
    return slot;
  }

  int characteristic() const { return p_; }
  int degree() const { return e_; }
  std::int64_t order() const { return q_; }
  /// Modulus coefficients c0..ce (monic, ce = 1).
  const std::vector<int>& modulus() const { return modulus_; }
  std::int64_t generator() const { return generator_; }

  // ---- index-space arithmetic (fast path) ----

  std::int64_t add(std::int64_t a, std::int64_t b) const {
    if (p_ == 2) return a ^ b;
    std::int64_t r = 0, pw = 1;
    for (int i = 0; i < e_; ++i) {
      const int da = static_cast<int>((a / pw) % p_);
      const int db = static_cast<int>((b / pw) % p_);
      r += static_cast<std::int64_t>((da + db) % p_) * pw;
      pw *= p_;
    }
    return r;
  }

  std::int64_t neg(std::int64_t a) const {
    if (p_ == 2) return a;
    std::int64_t r = 0, pw = 1;
    for (int i = 0; i < e_; ++i) {
      const int da = static_cast<int>((a / pw) % p_);
      r += static_cast<std::int64_t>((p_ - da) % p_) * pw;
      pw *= p_;
    }
    return r;
  }

  std::int64_t sub(std::int64_t a, std::int64_t b) const { return add(a, neg(b)); }

  std::int64_t mul(std::int64_t a, std::int64_t b) const {
    if (a == 0 || b == 0) return 0;
    if (!log_.empty()) {
      std::int64_t s = log_[static_cast<std::size_t>(a)] + log_[static_cast<std::size_t>(b)];
      if (s >= q_ - 1) s -= q_ - 1;
      return exp_[static_cast<std::size_t>(s)];
    }
    return mul_raw(a, b);
  }

  std::int64_t inv(std::int64_t a) const {
    if (a == 0) throw std::domain_error("division by zero in GF(" + std::to_string(q_) + ")");
    if (!log_.empty()) {
      const std::int64_t l = log_[static_cast<std::size_t>(a)];
      return exp_[static_cast<std::size_t>((q_ - 1 - l) % (q_ - 1))];
    }
    return pow(a, q_ - 2);
  }

  std::int64_t div(std::int64_t a, std::int64_t b) const { return mul(a, inv(b)); }

  std::int64_t pow(std::int64_t a, std::int64_t k) const {
    if (k < 0) throw std::invalid_argument("negative exponent");
    if (a == 0) return k == 0 ? 1 : 0;
    if (q_ > 2) k %= (q_ - 1);
    std::int64_t r = 1, base = a;
    while (k > 0) {
      if (k & 1) r = mul(r, base);
      base = mul(base, base);
      k >>= 1;
    }
    return r;
  }

  std::int64_t frobenius(std::int64_t a) const { return pow(a, p_); }

  /// Discrete log base the fixed generator; a must be nonzero.
  std::int64_t log(std::int64_t a) const {
    if (a == 0) throw std::domain_error("discrete log of zero");
    if (!log_.empty()) return log_[static_cast<std::size_t>(a)];
    std::int64_t x = 1;
    for (std::int64_t k = 0; k < q_ - 1; ++k) {
      if (x == a) return k;
      x = mul_raw(x, generator_);
    }
    throw std::logic_error("discrete log table walk failed");
  }

  std::int64_t exp(std::int64_t k) const {
    k %= (q_ - 1);
    if (k < 0) k += q_ - 1;
    if (!exp_.empty()) return exp_[static_cast<std::size_t>(k)];
    return pow(generator_, k);
  }

  // ---- coefficient views ----

  std::vector<int> coeffs(std::int64_t a) const {
    std::vector<int> c(static_cast<std::size_t>(e_));
    for (int i = 0; i < e_; ++i) {
      c[static_cast<std::size_t>(i)] = static_cast<int>(a % p_);
      a /= p_;
    }
    return c;
  }

  std::int64_t from_coeffs(const std::vector<int>& c) const {
    if (static_cast<int>(c.size()) != e_) throw std::invalid_argument("coefficient list has wrong length");
    std::int64_t r = 0, pw = 1;
    for (int i = 0; i < e_; ++i) {
      const int ci = c[static_cast<std::size_t>(i)];
      if (ci < 0 || ci >= p_) throw std::invalid_argument("coefficient out of range [0,p)");
      r += ci * pw;
      pw *= p_;
    }
    return r;
  }

  // ---- checked element API ----

  FieldElement element(std::int64_t idx) const {
    if (idx < 0 || idx >= q_) throw std::invalid_argument("element index out of range");
    return FieldElement{p_, e_, idx};
  }

  FieldElement zero() const { return element(0); }
  FieldElement one() const { return element(1); }
  FieldElement generator_element() const { return element(generator_); }

  FieldElement add(FieldElement a, FieldElement b) const { return element(add(own(a), own(b))); }
  FieldElement sub(FieldElement a, FieldElement b) const { return element(sub(own(a), own(b))); }
  FieldElement mul(FieldElement a, FieldElement b) const { return element(mul(own(a), own(b))); }
  FieldElement div(FieldElement a, FieldElement b) const { return element(div(own(a), own(b))); }
  std::int64_t discrete_log(FieldElement a) const { return log(own(a)); }

  /// Multiplicative order of a nonzero element.
  std::int64_t element_order(std::int64_t a) const {
    if (a == 0) throw std::domain_error("order of zero");
    std::int64_t ord = q_ - 1;
    for (std::int64_t f : prime_factors(q_ - 1)) {
      while (ord % f == 0 && pow(a, ord / f) == 1) ord /= f;
    }
    return ord;
  }

  static bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  static std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> fs;
    for (std::int64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        fs.push_back(d);
        while (n % d == 0) n /= d;
      }
    }
    if (n > 1) fs.push_back(n);
    return fs;
  }

 private:
  Field(int p, int e, std::int64_t q) : p_(p), e_(e), q_(q) {
    modulus_ = find_modulus();
    generator_ = find_generator();
    if (q_ <= kTableLimit) build_tables();
  }

  std::int64_t own(FieldElement a) const {
    if (a.p != p_ || a.e != e_)
      throw std::invalid_argument("field mismatch: element of GF(" + std::to_string(a.p) + "^" +
                                  std::to_string(a.e) + ") used in GF(" + std::to_string(p_) + "^" +
                                  std::to_string(e_) + ")");
    return a.idx;
  }

  // Lexicographically least monic irreducible of degree e, low-degree
  // coefficients compared first.
  poly_detail::Poly find_modulus() const {
    std::int64_t count = 1;
    for (int i = 0; i < e_; ++i) count *= p_;
    for (std::int64_t code = 0; code < count; ++code) {
      poly_detail::Poly f(static_cast<std::size_t>(e_) + 1, 0);
      std::int64_t c = code;
      for (int i = 0; i < e_; ++i) {
        f[static_cast<std::size_t>(i)] = static_cast<int>(c % p_);
        c /= p_;
      }
      f[static_cast<std::size_t>(e_)] = 1;
      if (poly_detail::is_irreducible(f, p_)) return f;
    }
    throw std::logic_error("no irreducible polynomial found; this cannot happen");
  }

  std::int64_t find_generator() const {
    const auto factors = prime_factors(q_ - 1);
    for (std::int64_t a = 1; a < q_; ++a) {
      bool primitive = true;
      for (std::int64_t f : factors) {
        if (pow_raw(a, (q_ - 1) / f) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) return a;
    }
    throw std::logic_error("no primitive element found; this cannot happen");
  }

  std::int64_t mul_raw(std::int64_t a, std::int64_t b) const {
    poly_detail::Poly fa = to_poly(a), fb = to_poly(b);
    poly_detail::Poly prod = poly_detail::mul(fa, fb, p_);
    prod = poly_detail::mod_monic(std::move(prod), modulus_, p_);
    return from_poly(prod);
  }

  std::int64_t pow_raw(std::int64_t a, std::int64_t k) const {
    std::int64_t r = 1, base = a;
    while (k > 0) {
      if (k & 1) r = mul_raw(r, base);
      base = mul_raw(base, base);
      k >>= 1;
    }
    return r;
  }

  poly_detail::Poly to_poly(std::int64_t a) const {
    poly_detail::Poly f;
    while (a > 0) {
      f.push_back(static_cast<int>(a % p_));
      a /= p_;
    }
    return f;
  }

  std::int64_t from_poly(const poly_detail::Poly& f) const {
    std::int64_t r = 0, pw = 1;
    for (int v : f) {
      r += v * pw;
      pw *= p_;
    }
    return r;
  }

  void build_tables() {
    exp_.assign(static_cast<std::size_t>(q_ - 1), 0);
    log_.assign(static_cast<std::size_t>(q_), -1);
    std::int64_t x = 1;
    for (std::int64_t k = 0; k < q_ - 1; ++k) {
      exp_[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(x);
      log_[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(k);
      x = mul_raw(x, generator_);
    }
    if (x != 1) throw std::logic_error("generator order mismatch while building tables");
  }

  int p_;
  int e_;
  std::int64_t q_;
  poly_detail::Poly modulus_;
  std::int64_t generator_ = 0;
  std::vector<std::int32_t> exp_;
  std::vector<std::int32_t> log_;
};

/// Field homomorphism GF(p^a) -> GF(p^b) for a | b, realized by sending the
/// subfield's root of its own modulus to the least root of that modulus in
/// the superfield.  The image is exactly the set of x with x^(p^a) = x.
class SubfieldEmbedding {
 public:
  SubfieldEmbedding(FieldPtr sub, FieldPtr sup) : sub_(std::move(sub)), sup_(std::move(sup)) {
    if (sub_->characteristic() != sup_->characteristic())
      throw std::invalid_argument("subfield embedding: characteristic mismatch");
    if (sup_->degree() % sub_->degree() != 0)
      throw std::invalid_argument("subfield embedding: degree " + std::to_string(sub_->degree()) +
                                  " does not divide " + std::to_string(sup_->degree()));
    const std::int64_t root = find_root();
    fwd_.assign(static_cast<std::size_t>(sub_->order()), 0);
    rev_.assign(static_cast<std::size_t>(sup_->order()), -1);
    std::vector<std::int64_t> root_pow(static_cast<std::size_t>(sub_->degree()));
    std::int64_t rp = 1;
    for (int i = 0; i < sub_->degree(); ++i) {
      root_pow[static_cast<std::size_t>(i)] = rp;
      rp = sup_->mul(rp, root);
    }
    for (std::int64_t a = 0; a < sub_->order(); ++a) {
      const auto c = sub_->coeffs(a);
      std::int64_t img = 0;
      for (int i = 0; i < sub_->degree(); ++i) {
        // c[i] lies in the prime field, whose index is the same in both fields.
        img = sup_->add(img, sup_->mul(c[static_cast<std::size_t>(i)], root_pow[static_cast<std::size_t>(i)]));
      }
      fwd_[static_cast<std::size_t>(a)] = img;
      rev_[static_cast<std::size_t>(img)] = a;
    }
  }

  const FieldPtr& sub() const { return sub_; }
  const FieldPtr& sup() const { return sup_; }

  std::int64_t apply(std::int64_t sub_idx) const { return fwd_.at(static_cast<std::size_t>(sub_idx)); }

  /// -1 when sup_idx is not in the image.
  std::int64_t preimage(std::int64_t sup_idx) const { return rev_.at(static_cast<std::size_t>(sup_idx)); }

  bool in_image(std::int64_t sup_idx) const { return preimage(sup_idx) >= 0; }

  FieldElement apply(FieldElement a) const {
    if (a.p != sub_->characteristic() || a.e != sub_->degree())
      throw std::invalid_argument("subfield embedding applied to foreign element");
    return sup_->element(apply(a.idx));
  }

 private:
  std::int64_t find_root() const {
    const auto& m = sub_->modulus();
    for (std::int64_t x = 0; x < sup_->order(); ++x) {
      std::int64_t v = 0;
      for (std::size_t i = m.size(); i-- > 0;) {
        v = sup_->add(sup_->mul(v, x), m[i]);
      }
      if (v == 0) return x;
    }
    throw std::logic_error("modulus has no root in the superfield; this cannot happen");
  }

  FieldPtr sub_;
  FieldPtr sup_;
  std::vector<std::int64_t> fwd_;
  std::vector<std::int64_t> rev_;
};

inline FieldPtr make_field(int p, int e, std::int64_t max_order = Field::kDefaultMaxOrder) {
  return Field::make(p, e, max_order);
}

/// The field of order q, for q a prime power; throws otherwise.
inline FieldPtr field_of_order(std::int64_t q, std::int64_t max_order = Field::kDefaultMaxOrder) {
  if (q < 2) throw std::invalid_argument("field order must be at least 2");
  for (std::int64_t p = 2; p * p <= q; ++p) {
    if (q % p != 0) continue;
    std::int64_t w = q;
    int e = 0;
    while (w % p == 0) {
      w /= p;
      ++e;
    }
    if (w != 1) throw std::invalid_argument(std::to_string(q) + " is not a prime power");
    return Field::make(static_cast<int>(p), e, max_order);
  }
  return Field::make(static_cast<int>(q), 1, max_order);  // q itself is prime
}

}  // namespace geofactor
