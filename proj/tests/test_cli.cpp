#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

// Integration checks against the built binary. CUESIM_CLI_PATH is injected
// by the build.

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CUESIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "cuesim_cli_test";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path);
  out << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("run writes telemetry and metrics and exits 0") {
  const auto cfg = write_config("ok.json", R"({"run": {"duration_s": 1}})");
  const fs::path out = fs::temp_directory_path() / "cuesim_cli_test" / "run_out";
  fs::remove_all(out);
  CHECK(run_cli("run --config " + cfg.string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "telemetry.csv"));
  CHECK(fs::exists(out / "metrics.json"));
  const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
  CHECK(metrics["frames"] == 90);
}

TEST_CASE("seed and duration flags override the config") {
  const auto cfg = write_config("ok2.json", R"({"run": {"duration_s": 30, "seed": 1}})");
  const fs::path out = fs::temp_directory_path() / "cuesim_cli_test" / "override_out";
  fs::remove_all(out);
  CHECK(run_cli("run --config " + cfg.string() + " --out " + out.string() +
                " --duration 0.5 --seed 9") == 0);
  const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
  CHECK(metrics["frames"] == 45);
  CHECK(metrics["seed"] == 9);
}

TEST_CASE("identical runs produce byte-identical telemetry") {
  const auto cfg = write_config("det.json", R"({"run": {"duration_s": 2, "seed": 5}})");
  const fs::path out1 = fs::temp_directory_path() / "cuesim_cli_test" / "det1";
  const fs::path out2 = fs::temp_directory_path() / "cuesim_cli_test" / "det2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  REQUIRE(run_cli("run --config " + cfg.string() + " --out " + out1.string()) == 0);
  REQUIRE(run_cli("run --config " + cfg.string() + " --out " + out2.string()) == 0);
  CHECK(slurp(out1 / "telemetry.csv") == slurp(out2 / "telemetry.csv"));
}

TEST_CASE("validate exits 0 on a good config and 2 with a field path on a bad one") {
  const auto good = write_config("good.json", R"({"vehicle": {"wheelbase_m": 3.0}})");
  CHECK(run_cli("validate --config " + good.string()) == 0);

  const auto unknown = write_config("unknown.json", R"({"vehicle": {"wheelbase": 3.0}})");
  CHECK(run_cli("validate --config " + unknown.string()) == 2);

  const auto bad_value = write_config("bad_value.json", R"({"vehicle": {"wheelbase_m": -3}})");
  CHECK(run_cli("validate --config " + bad_value.string()) == 2);

  const auto not_json = write_config("not_json.json", "{nope");
  CHECK(run_cli("validate --config " + not_json.string()) == 2);

  CHECK(run_cli("validate --config /does/not/exist.json") == 2);
}

TEST_CASE("compare-pipelines writes the comparison document") {
  const auto cfg = write_config("cmp.json", R"({"run": {"duration_s": 1}})");
  const fs::path out = fs::temp_directory_path() / "cuesim_cli_test" / "cmp_out";
  fs::remove_all(out);
  CHECK(run_cli("compare-pipelines --config " + cfg.string() + " --out " + out.string()) == 0);
  const auto doc = nlohmann::json::parse(slurp(out / "comparison.json"));
  CHECK(doc.contains("default_fixed_step"));
  CHECK(doc.contains("physics_on_update"));
  CHECK(doc.contains("mismatch_histogram_ms"));
}

TEST_CASE("track export writes the geometry file") {
  const auto cfg = write_config("trk.json", R"({})");
  const fs::path out = fs::temp_directory_path() / "cuesim_cli_test" / "trk_out";
  fs::remove_all(out);
  CHECK(run_cli("track export --config " + cfg.string() + " --out " + out.string()) == 0);
  const auto doc = nlohmann::json::parse(slurp(out / "track.json"));
  int arcs = 0;
  for (const auto& seg : doc["segments"])
    if (seg["kind"] == "arc") ++arcs;
  CHECK(arcs == 9);
}

TEST_CASE("missing subcommand or flags exit nonzero") {
  CHECK(run_cli("") != 0);
  CHECK(run_cli("run") != 0);
}
