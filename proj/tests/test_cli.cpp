#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "isoform/document.hpp"
#include "isoform/error.hpp"

using namespace isoform;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("isoform_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string cli_path() {
  const char* p = std::getenv("ISOFORM_CLI");
  return p != nullptr ? p : "";
}

int run_cli(const std::string& args) {
  const int rc = std::system((cli_path() + " " + args + " 2>/dev/null").c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("matrix file round trip is bit exact") {
  TempDir dir;
  MatrixFileDocument doc;
  doc.dim = 2;
  doc.label = "roundtrip";
  ComplexMatrix m(2, 2);
  m(0, 0) = cd(1.0 / 3.0, -2.0 / 7.0);
  m(0, 1) = cd(0.1, 1e-17);
  m(1, 0) = cd(-4.0, 5.0);
  m(1, 1) = cd(std::sqrt(2.0), -std::sqrt(3.0));
  doc.matrices.emplace_back("g0", m);
  const std::string path = dir.file("doc.json");
  write_document(matrix_file_to_json(doc), path);

  const MatrixFileDocument back = read_matrix_file(path);
  REQUIRE(back.matrices.size() == 1);
  const ComplexMatrix& r = back.matrices[0].second;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(r(i, j).real() == m(i, j).real());
      CHECK(r(i, j).imag() == m(i, j).imag());
    }
}

TEST_CASE("read_matrix_file rejects malformed documents") {
  TempDir dir;
  const std::string path = dir.file("bad.json");
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  try {
    (void)read_matrix_file(path);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(e.exit_code() == 2);
  }

  {
    std::ofstream out(path);
    out << R"({"format_version":1,"dim":2,"matrices":[]})";
  }
  CHECK_THROWS_AS((void)read_matrix_file(path), Error);

  {
    std::ofstream out(path);
    out << R"({"format_version":1,"dim":2,"matrices":[[[ [1,0],[0,0] ]]]})";
  }
  CHECK_THROWS_AS((void)read_matrix_file(path), Error);  // wrong shape
}

TEST_CASE("error kinds map to the documented exit codes") {
  CHECK(Error(ErrorKind::parse, "").exit_code() == 2);
  CHECK(Error(ErrorKind::convergence, "").exit_code() == 3);
  CHECK(Error(ErrorKind::construction, "").exit_code() == 4);
  CHECK(Error(ErrorKind::precondition, "").exit_code() == 4);
  CHECK(Error(ErrorKind::hypothesis, "").exit_code() == 5);
}

TEST_CASE("cli closure on the matrix-unit generators" *
          doctest::skip(std::getenv("ISOFORM_CLI") == nullptr)) {
  TempDir dir;
  const std::string gen = dir.file("gens.json");
  const std::string out = dir.file("closure.json");
  REQUIRE(run_cli("gen-corpus --kind s0 --m 2 --group trivial -o " + gen) == 0);
  REQUIRE(run_cli("closure -i " + gen + " -o " + out) == 0);
  const json doc = json::parse(slurp(out));
  CHECK(doc["kind"] == "closure");
  CHECK(doc["closure"]["size"] == 5);
  CHECK(doc["closure"]["saturated"] == true);

  // A capped run is not an error, just unsaturated.
  const std::string ex = dir.file("ex26.json");
  REQUIRE(run_cli("gen-corpus --kind example26 --t 1 -o " + ex) == 0);
  REQUIRE(run_cli("closure -i " + ex + " --cap 100 --eq-tol 1e-6 -o " + out) ==
          0);
  const json doc2 = json::parse(slurp(out));
  CHECK(doc2["closure"]["saturated"] == false);
  CHECK(doc2["closure"]["size"] == 100);
}

TEST_CASE("cli analyze emits verdicts and exit 0 regardless of them" *
          doctest::skip(std::getenv("ISOFORM_CLI") == nullptr)) {
  TempDir dir;
  const std::string gen = dir.file("gens.json");
  const std::string out = dir.file("analysis.json");
  REQUIRE(run_cli("gen-corpus --kind conjugated-s1 --m 2 --group c4 --seed 7 -o " +
                  gen) == 0);
  REQUIRE(run_cli("analyze -i " + gen + " -o " + out) == 0);
  const json doc = json::parse(slurp(out));
  CHECK(doc["kind"] == "analysis");
  CHECK(doc["irreducible"]["verdict"] == true);
  CHECK(doc["condition_ii"]["verdict"] == true);
  CHECK(doc["condition_iii"]["verdict"] == true);
  CHECK(doc["tolerances"]["eq_tol"].get<double>() == 1e-9);

  // A reducible triangular pair: analyze still exits 0, verdict false,
  // witness present in the document.
  const std::string tri = dir.file("tri.json");
  {
    json j;
    j["format_version"] = 1;
    j["dim"] = 2;
    j["label"] = "triangular";
    j["matrices"] = json::array();
    j["matrices"].push_back(
        {{"name", "a"},
         {"entries", json::parse("[[[1,0],[1,0]],[[0,0],[1,0]]]")}});
    j["matrices"].push_back(
        {{"name", "b"},
         {"entries", json::parse("[[[1,0],[0,0]],[[0,0],[2,0]]]")}});
    std::ofstream o(tri);
    o << j.dump();
  }
  REQUIRE(run_cli("analyze -i " + tri + " -o " + out) == 0);
  const json doc2 = json::parse(slurp(out));
  CHECK(doc2["irreducible"]["verdict"] == false);
  CHECK_FALSE(doc2["irreducible"]["witness"].is_null());
}

TEST_CASE("cli similarize success and failure exit codes" *
          doctest::skip(std::getenv("ISOFORM_CLI") == nullptr)) {
  TempDir dir;
  const std::string gen = dir.file("gens.json");
  const std::string out = dir.file("sim.json");
  REQUIRE(run_cli("gen-corpus --kind conjugated-s1 --m 2 --group trivial "
                  "--seed 3 -o " + gen) == 0);
  REQUIRE(run_cli("similarize -i " + gen + " -o " + out) == 0);
  const json doc = json::parse(slurp(out));
  CHECK(doc["similarity"]["m"] == 2);
  CHECK(doc["similarity"]["k"] == 1);
  CHECK(doc["similarity"]["verification"]["all_partial_isometries"] == true);

  // Failing condition (ii): exit 4.
  const std::string bad = dir.file("bad.json");
  {
    json j;
    j["format_version"] = 1;
    j["dim"] = 2;
    j["label"] = "halfspectrum";
    j["matrices"] = json::array();
    j["matrices"].push_back(
        {{"name", "a"},
         {"entries", json::parse("[[[1,0],[0,0]],[[0,0],[0.5,0]]]")}});
    std::ofstream o(bad);
    o << j.dump();
  }
  CHECK(run_cli("similarize -i " + bad + " -o " + out) == 4);

  // Truncation-induced spanning failure: exit 5. Generators span the full
  // algebra but the capped closure misses the second minimal idempotent.
  const std::string span = dir.file("span.json");
  {
    json j;
    j["format_version"] = 1;
    j["dim"] = 2;
    j["label"] = "trunc";
    j["matrices"] = json::array();
    auto add = [&](const std::string& name, const std::string& entries) {
      j["matrices"].push_back({{"name", name}, {"entries", json::parse(entries)}});
    };
    add("e11", "[[[1,0],[0,0]],[[0,0],[0,0]]]");
    add("e12", "[[[0,0],[1,0]],[[0,0],[0,0]]]");
    add("e21", "[[[0,0],[0,0]],[[1,0],[0,0]]]");
    add("swap", "[[[0,0],[1,0]],[[1,0],[0,0]]]");
    add("id", "[[[1,0],[0,0]],[[0,0],[1,0]]]");
    std::ofstream o(span);
    o << j.dump();
  }
  CHECK(run_cli("similarize -i " + span + " -o " + out + " --cap 5") == 5);

  // Malformed input: exit 2.
  const std::string broken = dir.file("broken.json");
  {
    std::ofstream o(broken);
    o << "{";
  }
  CHECK(run_cli("similarize -i " + broken + " -o " + out) == 2);
}

TEST_CASE("cli gen-corpus example26 and determinism" *
          doctest::skip(std::getenv("ISOFORM_CLI") == nullptr)) {
  TempDir dir;
  const std::string a = dir.file("a.json"), b = dir.file("b.json");
  REQUIRE(run_cli("gen-corpus --kind example26 --t 1 -o " + a) == 0);
  const json doc = json::parse(slurp(a));
  CHECK(doc["matrices"].size() == 2);

  REQUIRE(run_cli("gen-corpus --kind conjugated-s1 --m 2 --group c4 --seed 11 -o " +
                  a) == 0);
  REQUIRE(run_cli("gen-corpus --kind conjugated-s1 --m 2 --group c4 --seed 11 -o " +
                  b) == 0);
  CHECK(slurp(a) == slurp(b));

  CHECK(run_cli("gen-corpus --kind bogus -o " + a) == 2);
  CHECK(run_cli("gen-corpus --kind s0 --group bogus -o " + a) == 2);
}
