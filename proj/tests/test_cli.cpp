#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "cloakspec/cli.hpp"
#include "cloakspec/mesh.hpp"

using namespace cloakspec;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cloakspec_cli_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  std::size_t entries() const {
    return static_cast<std::size_t>(std::distance(fs::directory_iterator(path), fs::directory_iterator()));
  }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

bool one_error_line(const std::string& err, const std::string& kind) {
  return err.rfind("error: " + kind + ": ", 0) == 0 && err.find('\n') == err.size() - 1;
}

}  // namespace

TEST_CASE("mesh command writes a valid mesh") {
  TempDir dir;
  const std::string out = dir.file("m.json");
  const Result r = run({"mesh", "--shape", "disk", "--radius", "2", "--h", "0.1", "--interface", "1", "--out", out});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  const Mesh m = mesh_from_json(slurp(out));
  CHECK_NOTHROW(validate(m));
  CHECK(m.num_triangles() > 0);
  bool tags[2] = {false, false};
  for (int t : m.region_tag) tags[t] = true;
  CHECK(tags[0]);
  CHECK(tags[1]);

  CHECK(run({"mesh", "--shape", "ellipse", "--a", "1.3", "--b", "0.8", "--h", "0.1", "--out", dir.file("e.json")}).code == 0);
  CHECK(run({"mesh", "--shape", "annulus", "--radius", "2", "--interface", "1", "--h", "0.1", "--out", dir.file("a.json")}).code == 0);
  CHECK(mesh_from_json(slurp(dir.file("a.json"))).inner_boundary.has_value());
}

TEST_CASE("sweep command") {
  TempDir dir;
  const std::string out = dir.file("s.csv");
  const Result r = run({"sweep", "--eps", "0.4,0.2,0.1,0.05", "--omega", "1", "--modes", "8", "--target-g", "iso:3",
                        "--target-q", "2", "--out", out, "--dump-dtn"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(slurp(out));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"epsilon", "dtn_error", "dofs", "omega", "modes"});
  for (int i = 2; i <= 4; ++i) CHECK(std::stod(rows[i][1]) < std::stod(rows[i - 1][1]));
  const auto dump = nlohmann::json::parse(slurp(out + ".dtn.json"));
  CHECK(dump["runs"].size() == 4);
  CHECK(dump["reference"]["entries"].size() == 17);
}

TEST_CASE("ite command matches the oracle minimum") {
  TempDir dir;
  const std::string out = dir.file("ite.json");
  REQUIRE(run({"ite", "--q", "4", "--count", "6", "--h", "0.03", "--out", out}).code == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["problem"] == "ite");
  const double smallest = j["omegas"][0].get<double>();
  CHECK(std::abs(smallest - 2.404825557695773 / 2.0) / (2.404825557695773 / 2.0) <= 0.015);
  CHECK(j["oracle_comparison"]["all_matched"] == true);
}

TEST_CASE("other commands produce their reports") {
  TempDir dir;
  REQUIRE(run({"dtn", "--omega", "1", "--modes", "8", "--out", dir.file("d.json")}).code == 0);
  const auto d = nlohmann::json::parse(slurp(dir.file("d.json")));
  CHECK(d["dtn_error_vs_free"].get<double>() <= 0.02);

  REQUIRE(run({"schiffer", "--shape", "disk", "--radius", "1", "--h", "0.05", "--lambda-max", "40", "--out",
               dir.file("s.json")}).code == 0);
  const auto s = nlohmann::json::parse(slurp(dir.file("s.json")));
  CHECK(s["problem"] == "schiffer");
  CHECK(s["candidates"].size() == 1);

  REQUIRE(run({"resonance", "--shape", "disk", "--radius", "1", "--h", "0.05", "--count", "8", "--out",
               dir.file("r.json")}).code == 0);
  const auto r = nlohmann::json::parse(slurp(dir.file("r.json")));
  CHECK(r["zero_index"] == 0);
  CHECK(r["oracle_comparison"]["all_matched"] == true);

  REQUIRE(run({"pushforward", "--map", "cloak", "--format", "csv", "--out", dir.file("p.csv")}).code == 0);
  CHECK(csv_rows(slurp(dir.file("p.csv"))).size() > 2);
  REQUIRE(run({"resonance", "--h", "0.05", "--map", "bump:0.15", "--seed", "3", "--out", dir.file("rb.json")}).code == 0);
}

TEST_CASE("exit codes and diagnostics") {
  TempDir dir;
  const std::string out = dir.file("x.json");

  Result r = run({"mesh", "--shape", "disk", "--radius", "1", "--h", "0.5", "--out", out});
  CHECK(r.code == 2);
  CHECK(one_error_line(r.err, "parameter"));

  r = run({"mesh", "--shape", "hexagon", "--h", "0.1", "--out", out});
  CHECK(r.code == 2);
  r = run({"dtn", "--map", "nonsense", "--out", out});
  CHECK(r.code == 2);
  CHECK(one_error_line(r.err, "parameter"));
  r = run({"sweep", "--eps", "0.4,1.5", "--out", out});
  CHECK(r.code == 2);
  r = run({"frobnicate"});
  CHECK(r.code == 2);
  r = run({});
  CHECK(r.code == 2);
  r = run({"mesh", "--shape", "disk"});  // --out is required
  CHECK(r.code == 2);

  r = run({"schiffer", "--h", "0.25", "--lambda-max", "1000", "--out", out});
  CHECK(r.code == 4);
  CHECK(one_error_line(r.err, "resolution"));

  // the singular cloak coefficients cannot be assembled: numerical failure
  r = run({"dtn", "--radius", "2", "--h", "0.25", "--modes", "2", "--map", "cloak", "--out", out});
  CHECK(r.code == 3);
  CHECK(one_error_line(r.err, "assembly"));
  CHECK(!fs::exists(out));
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("no partial output after a failure") {
  TempDir dir;
  const std::string out = dir.file("fail.json");
  CHECK(run({"schiffer", "--h", "0.25", "--lambda-max", "1000", "--out", out}).code == 4);
  CHECK(run({"dtn", "--map", "cloak", "--out", out}).code != 0);
  CHECK(dir.entries() == 0);

  // unwritable destination: error, and no temporary left behind
  const std::string bad = dir.file("missing/sub/out.json");
  const Result r = run({"mesh", "--shape", "disk", "--radius", "1", "--h", "0.25", "--out", bad});
  CHECK(r.code == 2);
  CHECK(one_error_line(r.err, "io"));
  CHECK(dir.entries() == 0);

  // a failing rerun leaves an existing file untouched
  const std::string keep = dir.file("keep.json");
  REQUIRE(run({"mesh", "--shape", "disk", "--radius", "1", "--h", "0.25", "--out", keep}).code == 0);
  const std::string before = slurp(keep);
  CHECK(run({"mesh", "--shape", "disk", "--radius", "1", "--h", "0.9", "--out", keep}).code == 2);
  CHECK(slurp(keep) == before);
  CHECK(dir.entries() == 1);
}

TEST_CASE("determinism: identical runs give identical bytes") {
  TempDir dir;
  const std::vector<std::vector<std::string>> commands = {
      {"mesh", "--shape", "ellipse", "--a", "1.3", "--b", "0.8", "--h", "0.1"},
      {"dtn", "--map", "bump:0.15:2", "--omega", "1", "--modes", "8", "--h", "0.1"},
      {"resonance", "--h", "0.05", "--map", "bump:0.1:1", "--count", "6"},
      {"pushforward", "--map", "regcloak:0.3", "--format", "json"},
  };
  int k = 0;
  for (auto cmd : commands) {
    CAPTURE(cmd[0]);
    const std::string a = dir.file("a" + std::to_string(k)), b = dir.file("b" + std::to_string(k));
    ++k;
    auto ca = cmd, cb = cmd;
    ca.insert(ca.end(), {"--out", a});
    cb.insert(cb.end(), {"--out", b});
    REQUIRE(run(ca).code == 0);
    REQUIRE(run(cb).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
  }
}
