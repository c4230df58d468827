#pragma once

#include <cstdint>
#include <vector>

namespace geofactor {

/// Fixed-width bitset sized at runtime; the search cores use these for
/// incidence rows and membership masks.
class Bits {
 public:
  Bits() = default;
  explicit Bits(int n) : n_(n), w_((static_cast<std::size_t>(n) + 63) / 64, 0) {}

  int size() const { return n_; }

  void set(int i) { w_[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { w_[static_cast<std::size_t>(i) >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (w_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1; }

  Bits& operator&=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  Bits& operator|=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }

  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }

  bool intersects(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  int count() const {
    int c = 0;
    for (std::uint64_t w : w_) c += __builtin_popcountll(w);
    return c;
  }

  std::vector<int> to_indices() const {
    std::vector<int> out;
    for (std::size_t wi = 0; wi < w_.size(); ++wi) {
      std::uint64_t w = w_[wi];
      while (w) {
        const int b = __builtin_ctzll(w);
        out.push_back(static_cast<int>(wi * 64) + b);
        w &= w - 1;
      }
    }
    return out;
  }

  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace geofactor
