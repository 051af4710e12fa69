#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "fpct/io.hpp"

using namespace fpct;
namespace fs = std::filesystem;

namespace {

// Exit code of the installed CLI binary run with `args`, stdout/stderr muted.
int run_cli(const std::string& args) {
  const std::string cmd = std::string(FPCT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fpct-cli-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_config(const fs::path& dir, const std::string& text) {
  const std::string path = (dir / "config.json").string();
  write_file(path, text);
  return path;
}

// Value following the LAST `"key":` occurrence (jsonl summaries come last).
double last_number_field(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\":";
  const size_t pos = text.rfind(needle);
  REQUIRE(pos != std::string::npos);
  return std::strtod(text.c_str() + pos + needle.size(), nullptr);
}

const char* kMultiJobConfig = R"({
  "schema": 1,
  "seed": 3,
  "media": {
    "unit": {"kind": "constant", "d": 2, "c": 1.0},
    "sym":  {"kind": "hyperplane-symmetric", "d": 1,
             "distribution": {"kind": "finite-atoms", "atoms": [1.0, 2.0],
                              "probs": [0.5, 0.5]}},
    "rand": {"kind": "iid-edges", "d": 2,
             "distribution": {"kind": "uniform-interval", "lo": 1.0, "hi": 2.0}}
  },
  "jobs": [
    {"command": "estimate-m", "name": "speed", "format": "csv", "medium": "unit",
     "n": [8, 16], "seeds": 3},
    {"command": "estimate-m", "name": "randm", "medium": "rand", "n": [4, 8], "seeds": 2},
    {"command": "sym-minimize", "name": "law", "medium": "sym", "p": [1.0]}
  ]
})";

}  // namespace

TEST_CASE("estimate-m on a homogeneous medium emits an exact CSV and a manifest") {
  const fs::path dir = fresh_dir("exact");
  const std::string cfg = write_config(dir, R"({
    "schema": 1,
    "media": {"unit": {"kind": "constant", "d": 2, "c": 1.0}},
    "jobs": [{"command": "estimate-m", "name": "speed", "format": "csv",
              "medium": "unit", "n": [8, 16], "seeds": 3}]
  })");
  const fs::path out = dir / "out";
  CHECK(run_cli("--config " + cfg + " --out " + out.string()) == 0);

  // A homogeneous medium travels at exactly speed c, so the scaled passage
  // time is 1 with zero spread and the CSV bytes are fully determined.
  const std::string csv = read_file((out / "speed.csv").string());
  CHECK(csv ==
        "direction,n_max,seeds,estimate,half_width\n"
        "1 0,16,3,1,0\n");

  const std::string manifest = read_file((out / "run-manifest.json").string());
  CHECK(manifest.find("\"schema\":1") != std::string::npos);
  CHECK(manifest.find("\"version\":\"0.1.0\"") != std::string::npos);
  CHECK(manifest.find("\"config_digest\":\"") != std::string::npos);
  CHECK(manifest.find("\"status\":\"ok\"") != std::string::npos);
}

TEST_CASE("reruns and worker counts do not change output bytes") {
  const fs::path dir = fresh_dir("determinism");
  const std::string cfg = write_config(dir, kMultiJobConfig);
  const fs::path out1 = dir / "serial";
  const fs::path out2 = dir / "pooled";
  const fs::path out3 = dir / "again";
  CHECK(run_cli("--config " + cfg + " --jobs 1 --out " + out1.string()) == 0);
  CHECK(run_cli("--config " + cfg + " --jobs 3 --out " + out2.string()) == 0);
  CHECK(run_cli("--config " + cfg + " --jobs 1 --out " + out3.string()) == 0);

  for (const char* file : {"speed.csv", "randm.jsonl", "law.jsonl"}) {
    const std::string a = read_file((out1 / file).string());
    CHECK(a == read_file((out2 / file).string()));
    CHECK(a == read_file((out3 / file).string()));
    CHECK_FALSE(a.empty());
  }
}

TEST_CASE("sym-minimize reports the effective constant and corrector status") {
  const fs::path dir = fresh_dir("symmin");
  const std::string cfg = write_config(dir, R"({
    "schema": 1,
    "media": {"sym": {"kind": "hyperplane-symmetric", "d": 1,
                      "distribution": {"kind": "finite-atoms", "atoms": [1.0, 2.0],
                                       "probs": [0.5, 0.5]}}},
    "jobs": [{"command": "sym-minimize", "name": "law", "medium": "sym", "p": [1.0]}]
  })");
  const fs::path out = dir / "out";
  CHECK(run_cli("--config " + cfg + " --out " + out.string()) == 0);

  const std::string body = read_file((out / "law.jsonl").string());
  CHECK(body.find("\"status\":\"corrector-at-termination\"") != std::string::npos);
  CHECK(body.find("\"infsup_bounds\":[") != std::string::npos);
  CHECK(last_number_field(body, "hbar") == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("validate jobs run selected built-in criteria") {
  const fs::path dir = fresh_dir("validate");
  const std::string cfg = write_config(dir, R"({
    "schema": 1,
    "jobs": [{"command": "validate", "name": "check", "criteria": [1]}]
  })");
  const fs::path out = dir / "out";
  CHECK(run_cli("--config " + cfg + " --out " + out.string()) == 0);
  const std::string body = read_file((out / "check.jsonl").string());
  CHECK(body.find("homogeneous-exactness") != std::string::npos);
  CHECK(body.find("\"passed\":true") != std::string::npos);
}

TEST_CASE("explicit seeds make reruns reproducible") {
  const fs::path dir = fresh_dir("seeded");
  const std::string cfg = write_config(dir, R"({
    "schema": 1,
    "media": {"rand": {"kind": "iid-edges", "d": 2,
                       "distribution": {"kind": "uniform-interval", "lo": 1.0, "hi": 2.0}}},
    "jobs": [{"command": "estimate-m", "name": "randm", "medium": "rand",
              "n": [4, 8], "seeds": 2}]
  })");
  const fs::path out1 = dir / "run1";
  const fs::path out2 = dir / "run2";
  CHECK(run_cli("--config " + cfg + " --seed 11 --out " + out1.string()) == 0);
  CHECK(run_cli("--config " + cfg + " --seed 11 --out " + out2.string()) == 0);
  const std::string a = read_file((out1 / "randm.jsonl").string());
  CHECK(a == read_file((out2 / "randm.jsonl").string()));
  CHECK(a.find("\"estimate\":") != std::string::npos);
}

TEST_CASE("configuration problems exit with code 2") {
  const fs::path dir = fresh_dir("errors");
  const fs::path out = dir / "out";
  const std::string good = write_config(dir, kMultiJobConfig);

  // Empty config file.
  const std::string empty = (dir / "empty.json").string();
  write_file(empty, "  \n");
  CHECK(run_cli("--config " + empty + " --out " + out.string()) == 2);

  // Override that violates tolerance positivity.
  CHECK(run_cli("--config " + good + " --set tolerances.check=-1 --out " + out.string()) == 2);

  // Explicit medium whose CSV file does not exist.
  const std::string missing = (dir / "missing.json").string();
  write_file(missing, R"({
    "schema": 1,
    "media": {"tab": {"kind": "explicit", "d": 2, "csv": "nowhere.csv",
                      "a": 1.0, "b": 2.0}},
    "jobs": [{"command": "estimate-m", "medium": "tab"}]
  })");
  CHECK(run_cli("--config " + missing + " --out " + out.string()) == 2);

  // Job referencing an unknown medium (raised while jobs are running).
  const std::string ghost = (dir / "ghost.json").string();
  write_file(ghost, R"({
    "schema": 1,
    "jobs": [{"command": "estimate-m", "medium": "ghost"}]
  })");
  CHECK(run_cli("--config " + ghost + " --out " + out.string()) == 2);
  CHECK(run_cli("--config " + ghost + " --jobs 2 --out " + out.string()) == 2);

  // Unknown command.
  const std::string frob = (dir / "frob.json").string();
  write_file(frob, R"({"schema": 1, "jobs": [{"command": "frobnicate"}]})");
  CHECK(run_cli("--config " + frob + " --out " + out.string()) == 2);

  // Unknown flag and missing --config.
  CHECK(run_cli("--definitely-not-a-flag") == 2);
  CHECK(run_cli("--out " + out.string()) == 2);
}
