#pragma once

// The field model of PG(m-1, Q): the extension field E = GF(Q^m) viewed as a
// K-vector space with basis 1, alpha, ..., alpha^{m-1}, where K = GF(Q) and
// alpha is E's primitive element.  Multiplication by alpha is a Singer cycle
// on the points, and subfields of E become subspaces; all the cyclic
// constructions (field-reduction spreads, fold spreads, subgeometry
// partitions) are orbits of subgroups in this picture.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "geofactor/galois.hpp"
#include "geofactor/geometry.hpp"

namespace geofactor {

class FieldModel {
 public:
  /// K = base field of the geometry, m = vector-space dimension over K, so
  /// projective dimension is m-1.
  FieldModel(FieldPtr base, int m)
      : K_(std::move(base)),
        m_(m),
        E_(Field::make(K_->characteristic(), K_->degree() * m)),
        embed_(K_, E_) {
    const std::int64_t Q = K_->order();
    const std::int64_t alpha = E_->generator();
    std::vector<std::int64_t> alpha_pow(static_cast<std::size_t>(m_));
    std::int64_t ap = 1;
    for (int j = 0; j < m_; ++j) {
      alpha_pow[static_cast<std::size_t>(j)] = ap;
      ap = E_->mul(ap, alpha);
    }
    std::int64_t codes = 1;
    for (int j = 0; j < m_; ++j) codes *= Q;
    if (codes != E_->order()) throw std::logic_error("field model size mismatch");
    to_element_.assign(static_cast<std::size_t>(codes), 0);
    to_tuple_.assign(static_cast<std::size_t>(codes), -1);
    for (std::int64_t code = 0; code < codes; ++code) {
      std::int64_t c = code, x = 0;
      for (int j = 0; j < m_; ++j) {
        const std::int64_t cj = c % Q;
        c /= Q;
        if (cj != 0) x = E_->add(x, E_->mul(embed_.apply(cj), alpha_pow[static_cast<std::size_t>(j)]));
      }
      to_element_[static_cast<std::size_t>(code)] = x;
      if (to_tuple_[static_cast<std::size_t>(x)] != -1)
        throw std::logic_error("powers of alpha are not a basis; this cannot happen");
      to_tuple_[static_cast<std::size_t>(x)] = code;
    }
  }

  const FieldPtr& base() const { return K_; }
  const FieldPtr& extension() const { return E_; }
  const SubfieldEmbedding& embedding() const { return embed_; }
  int vector_dim() const { return m_; }

  /// Coordinates over K (length m) of an extension-field element.
  std::vector<std::int64_t> coords(std::int64_t e_idx) const {
    std::int64_t code = to_tuple_.at(static_cast<std::size_t>(e_idx));
    const std::int64_t Q = K_->order();
    std::vector<std::int64_t> c(static_cast<std::size_t>(m_));
    for (int j = 0; j < m_; ++j) {
      c[static_cast<std::size_t>(j)] = code % Q;
      code /= Q;
    }
    return c;
  }

  std::int64_t element(const std::vector<std::int64_t>& coords) const {
    const std::int64_t Q = K_->order();
    std::int64_t code = 0, pw = 1;
    for (int j = 0; j < m_; ++j) {
      code += coords.at(static_cast<std::size_t>(j)) * pw;
      pw *= Q;
    }
    return to_element_.at(static_cast<std::size_t>(code));
  }

  /// Point of PG(m-1, Q) represented by a nonzero extension element.
  int point_of(const ProjectiveSpace& space, std::int64_t e_idx) const {
    if (e_idx == 0) throw std::invalid_argument("zero element has no projective point");
    return space.point_index(coords(e_idx));
  }

 private:
  FieldPtr K_;
  int m_;
  FieldPtr E_;
  SubfieldEmbedding embed_;
  std::vector<std::int64_t> to_element_;
  std::vector<std::int64_t> to_tuple_;
};

}  // namespace geofactor
