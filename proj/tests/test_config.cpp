#include <doctest.h>

#include "nusl/config.hpp"

#include <stdexcept>

using namespace nusl;

TEST_SUITE_BEGIN("config");

namespace {

const char* kSample = R"(
# sweep configuration
[dictionary]
kind = "gaussian"
d = 128
K = 256
seed = 7

[distribution]
kind = "quadratic"
step_ratio = 10.0

[sweep]
s_range = [4, 8, 12]
n_trials = 200
algorithms = ["thresholding", "omp", "bp"]
coeff = "unit"
master_seed = 0
)";

}  // namespace

TEST_CASE("parses tables, scalars and arrays") {
  ConfigFile cfg = ConfigFile::parse_string(kSample);
  CHECK(cfg.get("dictionary", "kind").as_string() == "gaussian");
  CHECK(cfg.get("dictionary", "d").as_int() == 128);
  CHECK(cfg.get("distribution", "step_ratio").as_double() == 10.0);
  auto srange = cfg.get("sweep", "s_range").as_int_array();
  CHECK(srange == std::vector<std::int64_t>{4, 8, 12});
  auto algos = cfg.get("sweep", "algorithms").as_string_array();
  CHECK(algos.size() == 3);
  CHECK(!cfg.has("sweep", "missing"));
  CHECK_THROWS_AS(cfg.get("sweep", "missing"), std::runtime_error);
}

TEST_CASE("hash is stable under key reordering") {
  ConfigFile a = ConfigFile::parse_string("[t]\nx = 1\ny = 2\n");
  ConfigFile b = ConfigFile::parse_string("[t]\ny = 2\nx = 1\n");
  CHECK(a.hash() == b.hash());
  CHECK(a.canonical() == b.canonical());
}

TEST_CASE("hash changes with semantic content") {
  ConfigFile a = ConfigFile::parse_string("[t]\nx = 1\n");
  ConfigFile b = ConfigFile::parse_string("[t]\nx = 2\n");
  ConfigFile c = ConfigFile::parse_string("[u]\nx = 1\n");
  CHECK(a.hash() != b.hash());
  CHECK(a.hash() != c.hash());
}

TEST_CASE("comments and blank lines are ignored") {
  ConfigFile cfg = ConfigFile::parse_string(
      "# heading\n\n[t]  \nx = 3   # trailing comment\nname = \"a#b\"\n");
  CHECK(cfg.get("t", "x").as_int() == 3);
  CHECK(cfg.get("t", "name").as_string() == "a#b");
}

TEST_CASE("malformed lines raise with a line number") {
  CHECK_THROWS_AS(ConfigFile::parse_string("[t]\njust a line\n"),
                  std::runtime_error);
  CHECK_THROWS_AS(ConfigFile::parse_string("[t\nx = 1\n"), std::runtime_error);
}

TEST_SUITE_END();
