#pragma once

// Certificate documents: the JSON shapes emitted and checked by the CLI.
// Factorization certificates carry the full factor lists; spread documents
// carry basis matrices; count documents carry exact integers as decimal
// strings (cubic counts overflow 64 bits well inside the supported range).
// Everything is canonically ordered so a rebuild is byte-identical.

#include <nlohmann/json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geofactor/cubic_factorizations.hpp"
#include "geofactor/designs.hpp"
#include "geofactor/factorization.hpp"
#include "geofactor/spreads.hpp"
#include "geofactor/subgeometry_factorizations.hpp"

namespace geofactor {

inline std::string big_str(const BigInt& x) { return x.str(); }

/// The factorization induced by a packing: one factor per spread, components
/// being the member point sets as cliques.  For a line packing of PG(3,2)
/// this is the 2-factorization of K_15 into triangle factors.
inline Factorization packing_factorization(const SubspaceFamily& fam, const Packing& p,
                                           const std::string& provenance) {
  const int n = fam.space().dim();
  const std::int64_t q = fam.space().q();
  const int i = fam.k();
  Factorization phi;
  phi.v = fam.space().point_count();
  phi.m = static_cast<int>(fam.points_of(0).size()) - 1;
  phi.lambda = static_cast<int>(gaussian_binomial(n - 1, i - 1, q));
  phi.labels = fam.space().point_labels();
  phi.provenance = provenance;
  for (const auto& spread : p.spreads) {
    Factor f;
    f.v = phi.v;
    f.m = phi.m;
    for (int m : spread) f.components.push_back(fam.points_of(m));
    phi.factors.push_back(canonical_factor(std::move(f)));
  }
  std::sort(phi.factors.begin(), phi.factors.end(),
            [](const Factor& a, const Factor& b) { return a.components < b.components; });
  return phi;
}

/// Kirkman's fifteen schoolgirls: the verified 2-factorization of K_15 from
/// the lexicographically least line packing of PG(3,2).
inline Factorization kirkman_factorization() {
  const SpacePtr space = ProjectiveSpace::make(3, Field::make(2, 1));
  const SubspaceFamily lines = SubspaceFamily::build(space, 1);
  const PackingSearchResult res = packing_find_one(lines);
  if (res.status != SearchStatus::found) throw std::logic_error("PG(3,2) packing search failed");
  if (auto bad = verify_packing(lines, res.packing)) throw std::logic_error("kirkman packing invalid: " + bad->message);
  return packing_factorization(lines, res.packing, "kirkman packing PG(3,2)");
}

inline nlohmann::json cubic_document(const SubspaceFamily& lines, const TwistedCubic& cubic,
                                     const CubicSpread& spread) {
  nlohmann::json j;
  j["q"] = cubic.q();
  nlohmann::json pts = nlohmann::json::array();
  for (int p : cubic.param_points) pts.push_back(p);
  j["cubic"] = {{"param_points", std::move(pts)}, {"labels", cubic.space->point_labels()}};
  nlohmann::json sj = spread_to_json(lines, spread.members, 1);
  nlohmann::json tags = nlohmann::json::array();
  for (auto t : spread.tags) tags.push_back(to_string(t));
  sj["tags"] = std::move(tags);
  j["spread"] = std::move(sj);
  const Factor f = cubic_factor(lines, spread);
  j["factor"] = {{"v", f.v}, {"m", f.m}, {"components", f.components}};
  j["provenance"] = "cubic q=" + std::to_string(cubic.q());
  return j;
}

inline nlohmann::json counts_cubic_json(const CubicCounts& cc, std::int64_t q) {
  nlohmann::json j;
  j["q"] = q;
  j["num_cubics"] = big_str(cc.num_cubics);
  j["c_ell"] = big_str(cc.c_ell);
  j["pgl4_order"] = big_str(cc.pgl4_order);
  j["orbit_stabilizer_ok"] = cc.orbit_stabilizer_ok;
  j["quotient_identity_ok"] = cc.quotient_identity_ok;
  j["within_hypothesis"] = cc.within_hypothesis;
  return j;
}

inline nlohmann::json counts_subgeo_json(const CountBundle& cb) {
  nlohmann::json j;
  j["n"] = cb.n;
  j["q"] = cb.q;
  j["k"] = cb.k;
  j["s"] = big_str(cb.s);
  j["theta"] = big_str(cb.theta);
  j["p0"] = big_str(cb.p0);
  j["rho0"] = big_str(cb.rho0);
  j["S_e"] = big_str(cb.S_e);
  j["lambda"] = big_str(cb.lambda);
  j["v"] = big_str(cb.v);
  j["m"] = big_str(cb.m);
  return j;
}

inline nlohmann::json counts_design_json(const DesignParams& p) {
  nlohmann::json j;
  j["v"] = p.v;
  j["b"] = p.b;
  j["k"] = p.k;
  j["r"] = p.r;
  j["lambda"] = p.lambda;
  j["admissible"] = p.admissible();
  const auto rep = resolvability_preconditions(p);
  j["resolvability"] = {{"divisibility", rep.divisibility}, {"point_split", rep.point_split}, {"bose", rep.bose}};
  return j;
}

inline std::string render(const nlohmann::json& j) { return j.dump(1) + "\n"; }

inline void write_document(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << render(j);
}

inline nlohmann::json read_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

enum class DocumentKind { factorization, spread, cubic_doc, unknown };

inline DocumentKind document_kind(const nlohmann::json& j) {
  if (j.contains("factors") && j.contains("lambda")) return DocumentKind::factorization;
  if (j.contains("members") && j.contains("ambient")) return DocumentKind::spread;
  if (j.contains("cubic") && j.contains("spread") && j.contains("factor")) return DocumentKind::cubic_doc;
  return DocumentKind::unknown;
}

/// Checks a spread document from scratch: rebuilds the space, re-spans every
/// member basis, and recounts point coverage against the declared fold.
inline std::optional<Violation> verify_spread_document(const nlohmann::json& j) {
  const int n = j.at("ambient").at(0).get<int>();
  const std::int64_t q = j.at("ambient").at(1).get<std::int64_t>();
  const int k = j.at("dim").get<int>();
  const int fold = j.at("fold").get<int>();
  const SpacePtr space = ProjectiveSpace::make(n, field_of_order(q));
  std::vector<int> cov(static_cast<std::size_t>(space->point_count()), 0);
  for (const auto& jm : j.at("members")) {
    const auto rows = jm.get<std::vector<std::vector<std::int64_t>>>();
    const Subspace s = span_rows(*space, rows);
    if (s.k != k) return Violation{"member has dimension " + std::to_string(s.k) + ", expected " + std::to_string(k)};
    for (int p : subspace_points(*space, s)) ++cov[static_cast<std::size_t>(p)];
  }
  for (int p = 0; p < space->point_count(); ++p)
    if (cov[static_cast<std::size_t>(p)] != fold)
      return Violation{"point " + std::to_string(p) + " covered " + std::to_string(cov[static_cast<std::size_t>(p)]) +
                       " times, expected " + std::to_string(fold)};
  return std::nullopt;
}

inline std::optional<Violation> verify_cubic_document(const nlohmann::json& j) {
  if (auto bad = verify_spread_document(j.at("spread"))) return bad;
  const auto& jf = j.at("factor");
  Factor f;
  f.v = jf.at("v").get<int>();
  f.m = jf.at("m").get<int>();
  f.components = jf.at("components").get<std::vector<std::vector<int>>>();
  return verify_factor(f);
}

}  // namespace geofactor
