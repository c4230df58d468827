// geofactor: build, verify and search the factorization certificates.
//
// Exit codes: 0 ok/valid, 1 usage error, 2 invalid certificate or refuted
// claim, 3 inconclusive (a search guard was hit).

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "geofactor/affine_constructions.hpp"
#include "geofactor/certificates.hpp"
#include "geofactor/cubic_factorizations.hpp"
#include "geofactor/designs.hpp"
#include "geofactor/factorization.hpp"
#include "geofactor/spreads.hpp"
#include "geofactor/subgeometry_factorizations.hpp"

namespace {

using namespace geofactor;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInconclusive = 3;

struct Options {
  std::string output;
  std::string format = "json";
};

void emit(const nlohmann::json& j, const Options& opt, const std::string& summary) {
  if (!opt.output.empty()) write_document(j, opt.output);
  if (opt.format == "summary")
    std::cout << summary << "\n";
  else if (opt.output.empty())
    std::cout << render(j);
}

std::string describe(const Factorization& phi) {
  std::ostringstream os;
  os << phi.m << "-factorization of " << phi.lambda << "K_" << phi.v << " with " << phi.factors.size()
     << " factors";
  return os.str();
}

int cmd_build_affine(int n, std::int64_t q, int i, std::int64_t max_points, const Options& opt) {
  const AffineFactorization af = build_affine_factorization(n, field_of_order(q), i, max_points);
  if (auto bad = verify_factorization(af.factorization)) {
    std::cerr << "internal error: built factorization invalid: " << bad->message << "\n";
    return kExitInvalid;
  }
  emit(to_json(af.factorization), opt, describe(af.factorization));
  return kExitOk;
}

int cmd_build_k8(const std::string& variant, const Options& opt) {
  Factorization phi;
  if (variant == "gprime")
    phi = build_3k8_variant(K8Variant::g_prime);
  else if (variant == "m")
    phi = build_3k8_variant(K8Variant::m);
  else if (variant == "g")
    phi = one_factorization_G(3);
  else {
    std::cerr << "unknown variant '" << variant << "' (expected gprime, m or g)\n";
    return kExitUsage;
  }
  if (auto bad = verify_factorization(phi)) {
    std::cerr << "internal error: built factorization invalid: " << bad->message << "\n";
    return kExitInvalid;
  }
  emit(to_json(phi), opt, describe(phi) + (is_simple(phi) ? " (simple)" : " (not simple)"));
  return kExitOk;
}

int cmd_build_cubic(std::int64_t q, const std::vector<std::int64_t>& matrix, const Options& opt) {
  const SpacePtr space = ProjectiveSpace::make(3, field_of_order(q));
  Projectivity frame = identity_projectivity(*space);
  if (!matrix.empty()) {
    if (matrix.size() != 16) {
      std::cerr << "--matrix needs 16 entries (row major 4x4)\n";
      return kExitUsage;
    }
    std::vector<std::vector<std::int64_t>> m(4, std::vector<std::int64_t>(4));
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = matrix[static_cast<std::size_t>(4 * r + c)];
    frame = make_projectivity(*space, std::move(m));
  }
  const TwistedCubic cubic = make_twisted_cubic(space, frame);
  const SubspaceFamily lines = SubspaceFamily::build(space, 1);
  const CubicSpread spread = cubic_spread(lines, cubic);
  const auto sig = spread.signature();
  std::ostringstream os;
  os << "cubic spread of PG(3," << q << "): " << spread.members.size() << " lines, signature (" << sig[0] << ","
     << sig[1] << "," << sig[2] << "); q-factor of K_" << space->point_count();
  emit(cubic_document(lines, cubic, spread), opt, os.str());
  return kExitOk;
}

int cmd_build_subgeo(int n, std::int64_t q, int k, const Options& opt) {
  const Factorization phi = build_subgeometry_factorization(n, field_of_order(q), k);
  if (auto bad = verify_factorization(phi)) {
    std::cerr << "internal error: built factorization invalid: " << bad->message << "\n";
    return kExitInvalid;
  }
  emit(to_json(phi), opt, describe(phi));
  return kExitOk;
}

int cmd_build_kirkman(const Options& opt) {
  const Factorization phi = kirkman_factorization();
  if (auto bad = verify_factorization(phi)) {
    std::cerr << "internal error: built factorization invalid: " << bad->message << "\n";
    return kExitInvalid;
  }
  emit(to_json(phi), opt, describe(phi) + " (KTS(15))");
  return kExitOk;
}

int cmd_verify(const std::string& path) {
  const nlohmann::json j = read_document(path);
  switch (document_kind(j)) {
    case DocumentKind::factorization: {
      const Factorization phi = factorization_from_json(j);
      if (auto bad = verify_factorization(phi)) {
        std::cerr << "invalid: " << bad->message << "\n";
        return kExitInvalid;
      }
      std::cout << "valid: " << describe(phi) << (is_simple(phi) ? ", simple" : ", not simple") << "\n";
      return kExitOk;
    }
    case DocumentKind::spread: {
      if (auto bad = verify_spread_document(j)) {
        std::cerr << "invalid: " << bad->message << "\n";
        return kExitInvalid;
      }
      std::cout << "valid: fold-" << j.at("fold").get<int>() << " spread with " << j.at("members").size()
                << " members\n";
      return kExitOk;
    }
    case DocumentKind::cubic_doc: {
      if (auto bad = verify_cubic_document(j)) {
        std::cerr << "invalid: " << bad->message << "\n";
        return kExitInvalid;
      }
      std::cout << "valid: cubic spread document\n";
      return kExitOk;
    }
    case DocumentKind::unknown:
      break;
  }
  std::cerr << "unrecognized document shape\n";
  return kExitInvalid;
}

int cmd_decompose(const std::string& path, int mu1, std::uint64_t max_nodes) {
  const Factorization phi = factorization_from_json(read_document(path));
  if (auto bad = verify_factorization(phi)) {
    std::cerr << "invalid certificate: " << bad->message << "\n";
    return kExitInvalid;
  }
  DecompositionVerdict verdict;
  if (mu1 > 0)
    verdict = decomposition_search(phi, mu1, max_nodes);
  else
    verdict = full_decomposition_search(phi, max_nodes);
  if (verdict.decomposable) {
    std::cout << "decomposable (witness of " << verdict.witness->size() << " factors, " << verdict.nodes
              << " nodes)\n";
    return kExitOk;
  }
  if (verdict.exhausted) {
    std::cout << "indecomposable (exhausted, " << verdict.nodes << " nodes)\n";
    return kExitOk;
  }
  std::cout << "inconclusive (node limit hit after " << verdict.nodes << " nodes)\n";
  return kExitInconclusive;
}

int status_exit(SearchStatus s, bool found_is_ok = true) {
  switch (s) {
    case SearchStatus::found: return found_is_ok ? kExitOk : kExitInvalid;
    case SearchStatus::exhausted: return kExitInvalid;  // refuted
    case SearchStatus::node_limit: return kExitInconclusive;
  }
  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constructions, certificates and searches for factorizations of complete multigraphs from finite geometries"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("-o,--output", opt.output, "write the JSON document to this path");
  app.add_option("--format", opt.format, "output format: json or summary")
      ->check(CLI::IsMember({"json", "summary"}));
  std::uint64_t max_nodes = 50'000'000;
  app.add_option("--max-nodes", max_nodes, "search node guard");
  std::int64_t max_points = ProjectiveSpace::kDefaultMaxPoints;
  app.add_option("--max-points", max_points, "geometry size guard (points per space)");

  int n = 0, i = 0, k = 0, fold = 0, mu1 = 0;
  std::int64_t q = 0;
  std::string variant, path, kind = "projective", mode = "find-one";
  std::vector<std::int64_t> matrix;
  bool with_orbits = false, regulus_free = false, classify = false;

  auto* build = app.add_subcommand("build", "build a certificate");
  auto* b_aff = build->add_subcommand("affine", "factorization of lambda_i K_{q^n} from AG(n,q)");
  b_aff->add_option("--n", n)->required();
  b_aff->add_option("--q", q)->required();
  b_aff->add_option("--i", i)->required();
  auto* b_k8 = build->add_subcommand("k8", "the explicit one-factorizations of 3K_8 (and G of K_8)");
  b_k8->add_option("--variant", variant, "gprime | m | g")->required();
  auto* b_cubic = build->add_subcommand("cubic", "twisted cubic, induced spread and q-factor");
  b_cubic->add_option("--q", q)->required();
  b_cubic->add_option("--matrix", matrix, "16 entries of a frame projectivity (row major)");
  auto* b_sub = build->add_subcommand("subgeo", "factorization from subgeometry partitions of PG(n,q^k)");
  b_sub->add_option("--n", n)->required();
  b_sub->add_option("--q", q)->required();
  b_sub->add_option("--k", k)->required();
  auto* b_kirk = build->add_subcommand("kirkman", "2-factorization of K_15 from a line packing of PG(3,2)");

  auto* verify = app.add_subcommand("verify", "verify a certificate file");
  verify->add_option("file", path)->required();

  auto* decompose = app.add_subcommand("decompose", "decide decomposability of a factorization certificate");
  decompose->add_option("file", path)->required();
  decompose->add_option("--mu1", mu1, "test a single mu1 instead of all");

  auto* search = app.add_subcommand("search", "exhaustive searches");
  auto* s_spread = search->add_subcommand("spread", "spreads of i-subspaces");
  s_spread->add_option("--n", n)->required();
  s_spread->add_option("--q", q)->required();
  s_spread->add_option("--i", i)->required();
  s_spread->add_option("--mode", mode, "find-one | count-all");
  s_spread->add_flag("--regulus-free", regulus_free, "search for a spread containing no regulus (lines of PG(3,q))");
  s_spread->add_flag("--classify", classify, "classify enumerated line spreads of PG(3,q)");
  auto* s_fold = search->add_subcommand("fold-spread", "f-fold spreads with distinct members");
  s_fold->add_option("--n", n)->required();
  s_fold->add_option("--q", q)->required();
  s_fold->add_option("--i", i)->required();
  s_fold->add_option("--f", fold)->required();
  auto* s_pack = search->add_subcommand("packing", "packings (partitions of all i-subspaces into spreads)");
  s_pack->add_option("--n", n)->required();
  s_pack->add_option("--q", q)->required();
  s_pack->add_option("--i", i)->required();
  s_pack->add_option("--mode", mode, "find-one | count-all");
  s_pack->add_flag("--orbits", with_orbits, "also count PGL orbits (feasible for PG(3,2))");

  auto* counts = app.add_subcommand("counts", "exact count tables");
  auto* c_cubic = counts->add_subcommand("cubic", "twisted cubic counts and identities");
  c_cubic->add_option("--q", q)->required();
  auto* c_sub = counts->add_subcommand("subgeo", "subgeometry count bundle");
  c_sub->add_option("--n", n)->required();
  c_sub->add_option("--q", q)->required();
  c_sub->add_option("--k", k)->required();
  auto* c_design = counts->add_subcommand("design", "design parameters of PG^(i)(n,q) / AG^(i)(n,q)");
  c_design->add_option("--kind", kind, "projective | affine")->check(CLI::IsMember({"projective", "affine"}));
  c_design->add_option("--n", n)->required();
  c_design->add_option("--q", q)->required();
  c_design->add_option("--i", i)->required();

  // global options (-o, --format, --max-nodes) may follow the subcommand
  for (CLI::App* s : {build, b_aff, b_k8, b_cubic, b_sub, b_kirk, verify, decompose, search, s_spread, s_fold,
                      s_pack, counts, c_cubic, c_sub, c_design})
    s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (b_aff->parsed()) return cmd_build_affine(n, q, i, max_points, opt);
    if (b_k8->parsed()) return cmd_build_k8(variant, opt);
    if (b_cubic->parsed()) return cmd_build_cubic(q, matrix, opt);
    if (b_sub->parsed()) return cmd_build_subgeo(n, q, k, opt);
    if (b_kirk->parsed()) return cmd_build_kirkman(opt);
    if (verify->parsed()) return cmd_verify(path);
    if (decompose->parsed()) return cmd_decompose(path, mu1, max_nodes);

    if (s_spread->parsed()) {
      const SpacePtr space = ProjectiveSpace::make(n, field_of_order(q), max_points);
      const SubspaceFamily fam = SubspaceFamily::build(space, i);
      if (regulus_free) {
        const auto r = regulus_free_spread_search(fam, max_nodes);
        nlohmann::json j{{"status", r.status == SearchStatus::found
                                        ? "found"
                                        : (r.status == SearchStatus::exhausted ? "refuted" : "inconclusive")},
                         {"nodes", r.nodes}};
        if (r.status == SearchStatus::found) j["spread"] = spread_to_json(fam, r.members, 1);
        emit(j, opt, "regulus-free spread: " + j.at("status").get<std::string>());
        return r.status == SearchStatus::found ? kExitOk
                                               : (r.status == SearchStatus::exhausted ? kExitInvalid : kExitInconclusive);
      }
      if (mode == "count-all") {
        const auto en = enumerate_spreads(fam, max_nodes);
        nlohmann::json j{{"count", en.spreads.size()}, {"complete", en.complete}, {"nodes", en.nodes}};
        if (classify) {
          int reg = 0, areg = 0, mix = 0;
          for (const auto& s : en.spreads) {
            switch (classify_spread(fam, s)) {
              case SpreadClass::regular: ++reg; break;
              case SpreadClass::aregular: ++areg; break;
              case SpreadClass::mixed: ++mix; break;
            }
          }
          j["classification"] = {{"regular", reg}, {"aregular", areg}, {"mixed", mix}};
        }
        emit(j, opt, "spreads: " + std::to_string(en.spreads.size()) + (en.complete ? "" : " (incomplete)"));
        return en.complete ? kExitOk : kExitInconclusive;
      }
      const auto r = fold_spread_search(fam, 1, max_nodes);
      if (r.status == SearchStatus::found)
        emit(spread_to_json(fam, r.members, 1), opt, "spread with " + std::to_string(r.members.size()) + " members");
      else
        std::cout << (r.status == SearchStatus::exhausted ? "no spread exists (exhausted)\n" : "inconclusive\n");
      return status_exit(r.status);
    }
    if (s_fold->parsed()) {
      const SpacePtr space = ProjectiveSpace::make(n, field_of_order(q), max_points);
      const SubspaceFamily fam = SubspaceFamily::build(space, i);
      const auto r = fold_spread_search(fam, fold, max_nodes);
      if (r.status == SearchStatus::found)
        emit(spread_to_json(fam, r.members, fold), opt,
             std::to_string(fold) + "-fold spread with " + std::to_string(r.members.size()) + " members");
      else
        std::cout << (r.status == SearchStatus::exhausted ? "no fold spread exists (exhausted)\n" : "inconclusive\n");
      return status_exit(r.status);
    }
    if (s_pack->parsed()) {
      const SpacePtr space = ProjectiveSpace::make(n, field_of_order(q), max_points);
      const SubspaceFamily fam = SubspaceFamily::build(space, i);
      if (mode == "count-all") {
        const auto r = packing_count_all(fam, with_orbits, max_nodes);
        if (r.status == SearchStatus::node_limit) {
          std::cout << "inconclusive\n";
          return kExitInconclusive;
        }
        nlohmann::json j{{"count", r.count}, {"spread_count", r.spread_count}, {"nodes", r.nodes}};
        if (r.orbits_computed) j["pgl_orbits"] = r.orbit_count;
        emit(j, opt,
             "packings: " + std::to_string(r.count) +
                 (r.orbits_computed ? " in " + std::to_string(r.orbit_count) + " PGL orbits" : ""));
        return kExitOk;
      }
      const auto r = packing_find_one(fam, max_nodes);
      if (r.status == SearchStatus::found) {
        const Factorization phi = packing_factorization(
            fam, r.packing, "packing n=" + std::to_string(n) + " q=" + std::to_string(q) + " i=" + std::to_string(i));
        emit(to_json(phi), opt, describe(phi));
      } else {
        std::cout << (r.status == SearchStatus::exhausted ? "no packing exists (exhausted)\n" : "inconclusive\n");
      }
      return status_exit(r.status);
    }

    if (c_cubic->parsed()) {
      emit(counts_cubic_json(cubic_counts(q), q), opt,
           "num_cubics = " + cubic_counts(q).num_cubics.str() + ", c_ell = " + cubic_counts(q).c_ell.str());
      return kExitOk;
    }
    if (c_sub->parsed()) {
      const CountBundle cb = count_bundle(n, q, k);
      emit(counts_subgeo_json(cb), opt,
           "s = " + cb.s.str() + ", theta = " + cb.theta.str() + ", p0 = " + cb.p0.str() + ", lambda = " +
               cb.lambda.str());
      return kExitOk;
    }
    if (c_design->parsed()) {
      const DesignParams p = kind == "projective" ? projective_design_params(n, q, i) : affine_design_params(n, q, i);
      emit(counts_design_json(p), opt,
           "2-(" + std::to_string(p.v) + "," + std::to_string(p.b) + "," + std::to_string(p.k) + "," +
               std::to_string(p.r) + "," + std::to_string(p.lambda) + ")");
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  std::cerr << "no subcommand matched\n";
  return kExitUsage;
}
