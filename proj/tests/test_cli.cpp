#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "riemann/cli.hpp"

using namespace riemann;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path root;
  Workspace() : root(fs::temp_directory_path() / "riemann_cli_test") {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }

  std::string write(const char* name, const std::string& text) const {
    std::ofstream(root / name) << text;
    return (root / name).string();
  }
  std::string read(const std::string& dir, const char* name) const {
    std::ifstream in(root / dir / name);
    return {std::istreambuf_iterator<char>(in), {}};
  }
  RunConfig config(const std::string& domain, const char* out) const {
    RunConfig cfg;
    cfg.domain = domain;
    cfg.out = (root / out).string();
    return cfg;
  }
};

const char* kDisc = R"({"type":"disc","center":[0,0],"radius":1})";

}  // namespace

TEST_CASE("solve on the unit disc writes fields, map and summary") {
  Workspace ws;
  std::ostringstream log;
  const RunConfig cfg = ws.config(ws.write("disc.json", kDisc), "solve");
  REQUIRE(run(Command::Solve, cfg, log) == kExitOk);
  const auto summary = nlohmann::json::parse(ws.read("solve", "summary.json"));
  CHECK(summary.at("boundary_modulus").at("max").get<double>() <= 0.1);
  CHECK(summary.at("N") == 6);
  CHECK(ws.read("solve", "g.csv").rfind("x,y,value\n", 0) == 0);
  CHECK(ws.read("solve", "map.csv").rfind("x,y,g,gconj,reH,imH\n", 0) == 0);
  for (const auto& entry : fs::directory_iterator(ws.root / "solve")) {
    CHECK(entry.path().extension() != ".tmp");
  }
}

TEST_CASE("verify on the unit disc reaches ok_fraction 1") {
  Workspace ws;
  std::ostringstream log;
  const RunConfig cfg = ws.config(ws.write("disc.json", kDisc), "verify");
  REQUIRE(run(Command::Verify, cfg, log) == kExitOk);
  const auto report = nlohmann::json::parse(ws.read("verify", "verification.json"));
  CHECK(report.at("sweep").at("ok_fraction").get<double>() == 1.0);
  CHECK(report.at("sweep").at("K") == 20);
  CHECK(report.at("sweep").at("r").get<double>() == 0.7);
  CHECK(report.at("sweep").at("seed") == 0);
}

TEST_CASE("outputs are byte-identical across runs") {
  Workspace ws;
  std::ostringstream log;
  const std::string domain = ws.write("l.json",
      R"({"type":"polygon","vertices":[[-0.5,-0.5],[1.5,-0.5],[1.5,0.5],[0.5,0.5],[0.5,1.5],[-0.5,1.5]]})");
  for (const char* out : {"a", "b"}) {
    RunConfig cfg = ws.config(domain, out);
    cfg.level = 4;
    cfg.probes = 5;
    REQUIRE(run(Command::Solve, cfg, log) == kExitOk);
    REQUIRE(run(Command::Verify, cfg, log) == kExitOk);
    REQUIRE(run(Command::Plot, cfg, log) == kExitOk);
    REQUIRE(run(Command::Barrier, cfg, log) == kExitOk);
  }
  for (const char* name : {"g.csv", "map.csv", "summary.json", "verification.json", "grid.svg", "barrier.json"}) {
    CAPTURE(name);
    CHECK(ws.read("a", name) == ws.read("b", name));
    CHECK_FALSE(ws.read("a", name).empty());
  }
}

TEST_CASE("barrier on the unit disc covers 8 rim probes") {
  Workspace ws;
  std::ostringstream log;
  const RunConfig cfg = ws.config(ws.write("disc.json", kDisc), "barrier");
  REQUIRE(run(Command::Barrier, cfg, log) == kExitOk);
  const auto report = nlohmann::json::parse(ws.read("barrier", "barrier.json"));
  REQUIRE(report.at("barriers").size() == 8);
  for (const auto& b : report.at("barriers")) {
    CHECK(b.at("checks").at("subharmonic") == true);
    CHECK(b.at("checks").at("negative") == true);
    CHECK(b.at("checks").at("limit_zero") == true);
  }
}

TEST_CASE("counterexample profile") {
  Workspace ws;
  std::ostringstream log;
  RunConfig cfg;
  cfg.out = (ws.root / "cx").string();
  REQUIRE(run(Command::Counterexample, cfg, log) == kExitOk);
  const auto report = nlohmann::json::parse(ws.read("cx", "counterexample.json"));
  CHECK(report.at("increasing") == true);
  const auto& last = report.at("levels").back();
  CHECK(last.at("N") == 6);
  CHECK(last.at("difference").get<double>() <= 0.05);
  CHECK(report.at("profile").at("points").size() > 10);
}

TEST_CASE("configuration guards and error exit codes") {
  Workspace ws;
  std::ostringstream log;
  const std::string disc = ws.write("disc.json", kDisc);

  RunConfig cfg = ws.config(disc, "bad");
  cfg.level = 0;
  CHECK(run(Command::Solve, cfg, log) == kExitInput);
  cfg.level = 11;
  CHECK(run(Command::Solve, cfg, log) == kExitInput);
  cfg = ws.config(disc, "bad");
  cfg.radius = 1.0;
  CHECK(run(Command::Verify, cfg, log) == kExitInput);
  cfg = ws.config(disc, "bad");
  cfg.probes = 0;
  CHECK(run(Command::Verify, cfg, log) == kExitInput);
  cfg = ws.config(ws.write("broken.json", "{"), "bad");
  CHECK(run(Command::Solve, cfg, log) == kExitInput);
  cfg = ws.config((ws.root / "missing.json").string(), "bad");
  CHECK(run(Command::Solve, cfg, log) == kExitInput);
  cfg = ws.config("", "bad");
  CHECK(run(Command::Plot, cfg, log) == kExitInput);

  // A disc too small for any level-1 cell.
  cfg = ws.config(ws.write("tiny.json", R"({"type":"disc","center":[0,0],"radius":0.1})"), "bad");
  cfg.level = 1;
  CHECK(run(Command::Solve, cfg, log) == kExitInput);
  CHECK_FALSE(fs::exists(ws.root / "bad" / "summary.json"));
}

TEST_CASE("exit codes by error class") {
  CHECK(exit_code(ErrorCode::MalformedSpec) == kExitInput);
  CHECK(exit_code(ErrorCode::OriginOnBoundary) == kExitInput);
  CHECK(exit_code(ErrorCode::NoConvergence) == kExitNumerical);
  CHECK(exit_code(ErrorCode::ClosureFailure) == kExitNumerical);
  CHECK(exit_code(ErrorCode::Indeterminate) == kExitIndeterminate);
  CHECK(parse_command("plot") == Command::Plot);
  CHECK_FALSE(parse_command("draw"));
}
