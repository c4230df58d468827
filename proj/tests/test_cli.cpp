#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(GEOFACTOR_BIN) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("geofactor_cli_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("build, verify, tamper round trip") {
  const fs::path cert = temp_file("f2.json");
  const RunResult built = run("build affine --n 3 --q 2 --i 2 -o " + cert.string());
  CHECK(built.exit_code == 0);

  CHECK(run("verify " + cert.string()).exit_code == 0);

  // corrupt one vertex index
  auto j = nlohmann::json::parse(slurp(cert));
  j["factors"][0][0][0] = (j["factors"][0][0][0].get<int>() + 1) % 8;
  {
    std::ofstream out(cert);
    out << j.dump(1) << "\n";
  }
  CHECK(run("verify " + cert.string()).exit_code == 2);
  fs::remove(cert);
}

TEST_CASE("certificates are byte-identical across builds") {
  for (const std::string& spec :
       {std::string("build affine --n 3 --q 2 --i 2"), std::string("build k8 --variant m"),
        std::string("build kirkman"), std::string("build cubic --q 5"),
        std::string("build subgeo --n 1 --q 2 --k 3")}) {
    const fs::path a = temp_file("a.json"), b = temp_file("b.json");
    CHECK(run(spec + " -o " + a.string()).exit_code == 0);
    CHECK(run(spec + " -o " + b.string()).exit_code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
    fs::remove(a);
    fs::remove(b);
  }
}

TEST_CASE("decompose subcommand") {
  const fs::path m = temp_file("m.json"), gp = temp_file("gp.json");
  REQUIRE(run("build k8 --variant m -o " + m.string()).exit_code == 0);
  REQUIRE(run("build k8 --variant gprime -o " + gp.string()).exit_code == 0);

  const RunResult rm = run("decompose " + m.string());
  CHECK(rm.exit_code == 0);
  CHECK(rm.out.find("indecomposable (exhausted") != std::string::npos);

  const RunResult rg = run("decompose " + gp.string());
  CHECK(rg.exit_code == 0);
  CHECK(rg.out.find("decomposable (witness") != std::string::npos);

  const RunResult limited = run("decompose --max-nodes 5 " + m.string());
  CHECK(limited.exit_code == 3);
  CHECK(limited.out.find("inconclusive") != std::string::npos);
  fs::remove(m);
  fs::remove(gp);
}

TEST_CASE("kirkman certificate: 7 factors of 5 triangles") {
  const fs::path cert = temp_file("kirkman.json");
  REQUIRE(run("build kirkman -o " + cert.string()).exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(cert));
  CHECK(j.at("v") == 15);
  CHECK(j.at("lambda") == 1);
  CHECK(j.at("m") == 2);
  REQUIRE(j.at("factors").size() == 7);
  for (const auto& f : j.at("factors")) {
    CHECK(f.size() == 5);
    for (const auto& comp : f) CHECK(comp.size() == 3);
  }
  CHECK(run("verify " + cert.string()).exit_code == 0);
  fs::remove(cert);
}

TEST_CASE("cubic document verifies") {
  const fs::path cert = temp_file("cubic.json");
  REQUIRE(run("build cubic --q 5 -o " + cert.string()).exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(cert));
  CHECK(j.at("spread").at("members").size() == 26);
  CHECK(j.at("factor").at("v") == 156);
  CHECK(run("verify " + cert.string()).exit_code == 0);
  fs::remove(cert);
}

TEST_CASE("counts subcommands") {
  const RunResult design = run("counts design --kind projective --n 3 --q 2 --i 1");
  CHECK(design.exit_code == 0);
  {
    const auto j = nlohmann::json::parse(design.out);
    CHECK(j.at("v") == 15);
    CHECK(j.at("b") == 35);
    CHECK(j.at("lambda") == 1);
    CHECK(j.at("resolvability").at("bose") == true);
  }
  const RunResult subgeo = run("counts subgeo --n 2 --q 2 --k 2");
  CHECK(subgeo.exit_code == 0);
  {
    const auto j = nlohmann::json::parse(subgeo.out);
    CHECK(j.at("s") == "360");
    CHECK(j.at("p0") == "960");
    CHECK(j.at("lambda") == "288");
  }
  const RunResult cubic = run("counts cubic --q 49");
  CHECK(cubic.exit_code == 0);
  {
    const auto j = nlohmann::json::parse(cubic.out);
    CHECK(j.at("num_cubics") == "191579569734320409600");
    CHECK(j.at("orbit_stabilizer_ok") == true);
  }
}

TEST_CASE("search subcommands") {
  const RunResult spreads = run("search spread --n 3 --q 2 --i 1 --mode count-all");
  CHECK(spreads.exit_code == 0);
  CHECK(nlohmann::json::parse(spreads.out).at("count") == 56);

  const RunResult folds = run("search fold-spread --n 2 --q 2 --i 1 --f 3");
  CHECK(folds.exit_code == 0);
  CHECK(nlohmann::json::parse(folds.out).at("members").size() == 7);

  // spread documents round-trip through verify
  const fs::path doc = temp_file("fold.json");
  REQUIRE(run("search fold-spread --n 2 --q 2 --i 1 --f 3 -o " + doc.string()).exit_code == 0);
  CHECK(run("verify " + doc.string()).exit_code == 0);
  auto j = nlohmann::json::parse(slurp(doc));
  j["fold"] = 2;  // wrong fold must be rejected
  {
    std::ofstream out(doc);
    out << j.dump(1) << "\n";
  }
  CHECK(run("verify " + doc.string()).exit_code == 2);
  fs::remove(doc);

  // refuted fold spread exits 2
  CHECK(run("search fold-spread --n 2 --q 2 --i 1 --f 1").exit_code == 2);

  const RunResult packing = run("search packing --n 3 --q 2 --i 1 --mode find-one");
  CHECK(packing.exit_code == 0);
  CHECK(nlohmann::json::parse(packing.out).at("factors").size() == 7);

  // regulus-free search is refuted for PG(3,3)
  CHECK(run("search spread --n 3 --q 3 --i 1 --regulus-free").exit_code == 2);

  const RunResult census = run("search spread --n 3 --q 2 --i 1 --mode count-all --classify");
  CHECK(census.exit_code == 0);
  CHECK(nlohmann::json::parse(census.out).at("classification").at("regular") == 56);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("build affine --n 3").exit_code == 1);      // missing required options
  CHECK(run("frobnicate").exit_code == 1);              // unknown subcommand
  CHECK(run("build k8 --variant nope").exit_code == 1); // bad variant
  CHECK(run("build affine --n 3 --q 6 --i 1").exit_code == 1);  // 6 is not a prime power
}

TEST_CASE("summary format prints a one-line description") {
  const RunResult r = run("--format summary build affine --n 3 --q 2 --i 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("3-factorization of 3K_8") != std::string::npos);
}
