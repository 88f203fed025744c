// ecpsim: run ECP-MPC / ACP-MPC episodes, audit coverage, ingest datasets.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <regex>

#include "ecp/config.hpp"
#include "ecp/dataset.hpp"
#include "ecp/episode_io.hpp"
#include "ecp/selftest.hpp"
#include "ecp/sim.hpp"

namespace fs = std::filesystem;

namespace {

fs::path default_output_dir() {
  if (const char* env = std::getenv("ECP_OUTPUT_DIR")) return env;
  return "ecp_out";
}

std::string episode_stem(const std::string& scenario, ecp::Controller c, std::uint64_t seed) {
  return scenario + "_" + ecp::to_string(c) + "_s" + std::to_string(seed);
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ecp::Error("cannot write " + path.string());
  fn(out);
}

/// Summary rows are computed from the metrics files on disk only.
void write_summary(const fs::path& out_dir) {
  struct Accumulator {
    std::size_t episodes = 0;
    double collis = 0, cost = 0, trav = 0, infeas = 0;
  };
  std::map<std::pair<std::string, std::string>, Accumulator> table;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("metrics_") && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const auto m = ecp::read_metrics_json(path);
    auto& acc = table[{m.scenario, ecp::to_string(m.controller)}];
    ++acc.episodes;
    acc.collis += m.report.collision_rate;
    acc.cost += m.report.average_cost;
    acc.trav += static_cast<double>(m.report.travel_time);
    acc.infeas += m.report.infeasibility_rate;
  }
  write_file(out_dir / "summary.csv", [&](std::ostream& out) {
    out << "scenario,controller,episodes,collis,cost,trav,infeas\n";
    for (const auto& [key, acc] : table) {
      const double n = static_cast<double>(acc.episodes);
      out << key.first << ',' << key.second << ',' << acc.episodes << ',' << ecp::format_double(acc.collis / n) << ','
          << ecp::format_double(acc.cost / n) << ',' << ecp::format_double(acc.trav / n) << ','
          << ecp::format_double(acc.infeas / n) << '\n';
    }
  });
  std::cout << std::left << std::setw(14) << "scenario" << std::setw(6) << "ctrl" << std::right << std::setw(9)
            << "Collis." << std::setw(12) << "Cost" << std::setw(9) << "Trav." << std::setw(9) << "Infeas." << '\n';
  for (const auto& [key, acc] : table) {
    const double n = static_cast<double>(acc.episodes);
    std::cout << std::left << std::setw(14) << key.first << std::setw(6) << key.second << std::right << std::fixed
              << std::setprecision(3) << std::setw(9) << acc.collis / n << std::setw(12) << std::setprecision(2)
              << acc.cost / n << std::setw(9) << acc.trav / n << std::setw(9) << std::setprecision(3) << acc.infeas / n
              << '\n';
  }
  std::cout.unsetf(std::ios::fixed);
}

struct RunOptions {
  std::vector<std::string> configs;
  std::string out_dir;
  std::string controller;
  std::vector<std::string> overrides;
  std::optional<std::size_t> repeat;
  std::optional<std::uint64_t> seed;
};

int cmd_run(const RunOptions& opt) {
  const fs::path out_dir = opt.out_dir.empty() ? default_output_dir() : fs::path(opt.out_dir);
  fs::create_directories(out_dir);
  for (const auto& config_path : opt.configs) {
    auto config = ecp::KeyValueConfig::parse_file(config_path);
    for (const auto& o : opt.overrides) config.set(o);
    if (!opt.controller.empty()) config.set("controller", opt.controller);
    if (opt.repeat) config.set("repeat", std::to_string(*opt.repeat));
    if (opt.seed) config.set("seed", std::to_string(*opt.seed));
    const auto experiment = ecp::build_experiment(config);

    for (std::size_t r = 0; r < experiment.repeat; ++r) {
      for (const auto controller : experiment.controllers) {
        const auto episode = experiment.episode(controller, r);
        const auto log = ecp::run_episode(episode);
        const auto report = ecp::compute_metrics(log);
        const auto stem = episode_stem(experiment.scenario_name, controller, episode.seed);
        write_file(out_dir / ("episode_" + stem + ".csv"), [&](std::ostream& o) { ecp::write_episode_csv(o, log); });
        write_file(out_dir / ("radii_" + stem + ".csv"), [&](std::ostream& o) { ecp::write_radii_csv(o, log); });
        write_file(out_dir / ("metrics_" + stem + ".json"),
                   [&](std::ostream& o) { ecp::write_metrics_json(o, log, report); });
        std::cout << stem << ": trav " << report.travel_time << ", collis " << report.collision_rate << ", cost "
                  << report.average_cost << ", infeas " << report.infeasibility_rate << '\n';
      }
    }
  }
  write_summary(out_dir);
  return 0;
}

int cmd_coverage_audit(const std::string& dir_arg) {
  const fs::path dir = dir_arg.empty() ? default_output_dir() : fs::path(dir_arg);
  if (!fs::is_directory(dir)) throw ecp::Error("no run directory at " + dir.string());
  std::vector<fs::path> metrics;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("metrics_") && entry.path().extension() == ".json") metrics.push_back(entry.path());
  }
  if (metrics.empty()) throw ecp::Error("no episode logs in " + dir.string());
  std::sort(metrics.begin(), metrics.end());
  for (const auto& path : metrics) {
    const auto m = ecp::read_metrics_json(path);
    const std::string stem = path.stem().string().substr(std::string("metrics_").size());
    const fs::path radii = dir / ("radii_" + stem + ".csv");
    if (!fs::exists(radii)) throw ecp::Error("missing radii log " + radii.string());
    const auto points = ecp::coverage_series(m.controller, ecp::read_resolved_checks(radii));
    if (points.empty()) throw ecp::Error("no resolved coverage checks in " + radii.string());
    std::map<std::size_t, double> final_coverage;
    write_file(dir / ("coverage_" + stem + ".csv"), [&](std::ostream& out) {
      out << "step,series,running_coverage\n";
      for (const auto& p : points) {
        out << p.step << ',' << p.series << ',' << ecp::format_double(p.running_coverage) << '\n';
        final_coverage[p.series] = p.running_coverage;
      }
    });
    std::cout << stem << " (" << (m.controller == ecp::Controller::Ecp ? "per input" : "per horizon") << "):";
    for (const auto& [series, c] : final_coverage) std::cout << ' ' << series << '=' << std::setprecision(4) << c;
    std::cout << '\n';
  }
  return 0;
}

int cmd_ingest(const std::string& path, const std::string& scene, const std::string& out_arg,
               const std::vector<std::string>& overrides) {
  ecp::KeyValueConfig config;
  for (const auto& o : overrides) config.set(o);
  const auto timeline = ecp::load_annotations(path, ecp::annotation_format(config), scene);
  const fs::path out_dir = out_arg.empty() ? default_output_dir() : fs::path(out_arg);
  fs::create_directories(out_dir);
  const fs::path cache = out_dir / (timeline.name + ".timeline.jsonl");
  ecp::save_timeline(cache, timeline);
  const auto& b = timeline.scene_bounds;
  std::cout << "scene " << timeline.name << ": " << timeline.frame_count() << " frames, " << timeline.obstacle_count()
            << " pedestrian tracks, bounds [" << b.x_min << ", " << b.x_max << "] x [" << b.y_min << ", " << b.y_max
            << "]\n"
            << "cached to " << cache.string() << '\n';
  return 0;
}

int cmd_selftest(std::uint64_t seed) {
  bool ok = true;
  for (const auto& r : ecp::run_selftests(seed)) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Egocentric conformal prediction MPC simulator"};
  app.require_subcommand(1);

  RunOptions run;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Run episodes described by config files");
  run_cmd->add_option("-c,--config", run.configs, "Config file(s), one scenario each")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--out", run.out_dir, "Output directory (default $ECP_OUTPUT_DIR or ./ecp_out)");
  run_cmd->add_option("--controller", run.controller, "ecp, acp or both");
  auto* repeat_opt = run_cmd->add_option("--repeat", repeat, "Episodes per controller");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Seed of the first episode");
  run_cmd->add_option("--set", run.overrides, "Override a config key (key=value)");

  std::string audit_dir;
  auto* audit_cmd = app.add_subcommand("coverage-audit", "Recompute running coverage from episode logs");
  audit_cmd->add_option("-d,--dir", audit_dir, "Run output directory");

  std::string ingest_path, ingest_scene, ingest_out;
  std::vector<std::string> ingest_overrides;
  auto* ingest_cmd = app.add_subcommand("ingest", "Resample an annotation file and cache the timeline");
  ingest_cmd->add_option("path", ingest_path, "Annotation file")->required();
  ingest_cmd->add_option("-s,--scene", ingest_scene, "Scene name (default: file stem)");
  ingest_cmd->add_option("-o,--out", ingest_out, "Cache directory");
  ingest_cmd->add_option("--set", ingest_overrides, "Format key (format.* or frame_period) as key=value");

  std::uint64_t selftest_seed = 1;
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the randomized invariant suites");
  selftest_cmd->add_option("--seed", selftest_seed, "Random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      if (*repeat_opt) run.repeat = repeat;
      if (*seed_opt) run.seed = seed;
      return cmd_run(run);
    }
    if (*audit_cmd) return cmd_coverage_audit(audit_dir);
    if (*ingest_cmd) return cmd_ingest(ingest_path, ingest_scene, ingest_out, ingest_overrides);
    if (*selftest_cmd) return cmd_selftest(selftest_seed);
  } catch (const ecp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
