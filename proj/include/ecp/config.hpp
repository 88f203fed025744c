#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ecp/sim.hpp"

namespace ecp {

/// Plain-text `key = value` configuration. Lines starting with '#' are
/// comments; `agent` may repeat, every other key is single-valued and later
/// assignments win.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::filesystem::path& path);
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<config>");

  /// Applies a `key=value` override.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::vector<std::string> get_all(const std::string& key) const;

  double number(const std::string& key, double fallback) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;

  const std::filesystem::path& base_dir() const { return base_dir_; }

 private:
  std::multimap<std::string, std::string> values_;
  std::filesystem::path base_dir_ = ".";
};

/// Everything needed to run the episodes one config file describes.
struct Experiment {
  std::string scenario_name;
  std::vector<Controller> controllers;
  std::size_t repeat = 1;
  std::uint64_t seed_base = 0;
  Frame start_frame_stride = 0;
  /// Template episode; scenario and seed are filled per repeat.
  EpisodeConfig base;

  /// Config for repeat r (seed = seed_base + r, start frame shifted by r * stride).
  EpisodeConfig episode(Controller controller, std::size_t r) const;

  // Scenario sources, exactly one of which is used.
  std::shared_ptr<const ScenarioTimeline> fixed_scenario;
  std::optional<SyntheticSpec> synthetic;
  /// Planner state bounds; the scenario's scene bounds when absent.
  std::optional<Bounds> state_bounds;
};

/// Validates every key and builds the experiment. Throws ConfigError naming
/// the field; a missing dataset file is reported against dataset_path.
Experiment build_experiment(const KeyValueConfig& config);

/// Annotation layout from `format.*` keys.
AnnotationFormat annotation_format(const KeyValueConfig& config);

}  // namespace ecp
