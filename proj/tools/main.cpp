#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cuesim/config.hpp"
#include "cuesim/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration_s;
};

void add_common(CLI::App* cmd, CommonOptions* opts, bool want_out) {
  cmd->add_option("--config", opts->config_path, "Run configuration (JSON)")->required();
  if (want_out) cmd->add_option("--out", opts->out_dir, "Output directory");
  cmd->add_option("--seed", [opts](const std::vector<std::string>& v) {
        opts->seed = std::stoull(v.at(0));
        return true;
      },
      "Override run.seed");
  cmd->add_option("--duration", [opts](const std::vector<std::string>& v) {
        opts->duration_s = std::stod(v.at(0));
        return true;
      },
      "Override run.duration_s (seconds)");
}

cuesim::RunConfig load(const CommonOptions& opts) {
  cuesim::RunConfig cfg = cuesim::load_config(opts.config_path);
  if (opts.seed) cfg.run.seed = *opts.seed;
  if (opts.duration_s) {
    cuesim::require(*opts.duration_s >= 0.0, "run.duration_s: must be >= 0");
    cfg.run.duration_s = *opts.duration_s;
  }
  if (!opts.out_dir.empty()) cfg.run.output_dir = opts.out_dir;
  return cfg;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  cuesim::require(out.good(), "cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic motion-cueing simulation toolkit"};
  app.require_subcommand(1);

  CommonOptions run_opts, compare_opts, validate_opts, export_opts;

  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario and write telemetry + metrics");
  add_common(run_cmd, &run_opts, true);

  CLI::App* compare_cmd = app.add_subcommand(
      "compare-pipelines", "Run the scenario under both pipelines and compare latency");
  add_common(compare_cmd, &compare_opts, true);

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a configuration file");
  validate_cmd->add_option("--config", validate_opts.config_path, "Run configuration (JSON)")
      ->required();

  CLI::App* track_cmd = app.add_subcommand("track", "Track utilities");
  track_cmd->require_subcommand(1);
  CLI::App* export_cmd =
      track_cmd->add_subcommand("export", "Write the track geometry as JSON");
  add_common(export_cmd, &export_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  // Configuration problems exit 2 with a field-path message; anything that
  // breaks after a validated config is a runtime invariant violation, exit 1.
  cuesim::RunConfig cfg;
  try {
    if (*run_cmd) {
      cfg = load(run_opts);
    } else if (*compare_cmd) {
      cfg = load(compare_opts);
    } else if (*validate_cmd) {
      cuesim::load_config(validate_opts.config_path);
      std::cout << "config ok\n";
      return kExitOk;
    } else if (*export_cmd) {
      cfg = load(export_opts);
    }
  } catch (const cuesim::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*run_cmd) {
      const auto result = cuesim::run_scenario(cfg, cfg.run.output_dir);
      std::cout << "frames=" << result.rows.size() << " laps=" << result.laps_completed
                << " crashes=" << result.crash_events << " out=" << cfg.run.output_dir << "\n";
    } else if (*compare_cmd) {
      const nlohmann::json doc = cuesim::compare_pipelines(cfg);
      const std::filesystem::path out =
          std::filesystem::path(cfg.run.output_dir) / "comparison.json";
      write_json(out, doc);
      std::cout << "wrote " << out.string() << "\n";
    } else if (*export_cmd) {
      const nlohmann::json doc = cuesim::export_track(cfg.track);
      const std::filesystem::path out = std::filesystem::path(cfg.run.output_dir) / "track.json";
      write_json(out, doc);
      std::cout << "wrote " << out.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
