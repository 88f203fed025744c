#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ecp/geometry.hpp"
#include "ecp/predictor.hpp"

namespace ecp {

/// Obstacle sets on a uniform frame grid starting at frame 0.
struct ScenarioTimeline {
  std::string name;
  double frame_period = 0.4;
  Bounds scene_bounds;
  std::vector<ObstacleSet> frames;

  std::size_t frame_count() const { return frames.size(); }
  const ObstacleSet& at(Frame frame) const { return frames.at(static_cast<std::size_t>(frame)); }
  /// Distinct obstacle ids over the whole timeline.
  std::size_t obstacle_count() const;

  friend bool operator==(const ScenarioTimeline&, const ScenarioTimeline&) = default;
};

/// Column layout of a raw annotation file.
struct AnnotationFormat {
  enum class Delimiter { Whitespace, Tab, Comma };

  std::size_t frame_column = 0;
  std::size_t id_column = 1;
  std::size_t x_column = 2;
  std::size_t y_column = 3;
  Delimiter delimiter = Delimiter::Whitespace;
  /// Native frame units between consecutive output frames.
  double native_stride = 10.0;
  double frame_period = 0.4;
  /// Longest run of missing samples bridged by interpolation.
  std::size_t max_gap = 2;
  double bounds_padding = 1.0;
};

AnnotationFormat::Delimiter parse_delimiter(const std::string& name);

/// Loads rows of (frame, pedestrian id, x, y), resamples every track onto the
/// output grid and splits tracks at gaps longer than max_gap samples. Track
/// segments get composite ids "<pedestrian>#<segment>".
ScenarioTimeline load_annotations(const std::filesystem::path& path, const AnnotationFormat& format,
                                  std::string name = {});

/// Canonical cache: a header object, then one {frame, id, x, y} object per line.
void save_timeline(const std::filesystem::path& path, const ScenarioTimeline& timeline);
ScenarioTimeline load_timeline(const std::filesystem::path& path);

struct VelocityJump {
  Frame frame = 0;
  Vec2 velocity;
};

struct AgentSpec {
  enum class Kind { Linear, Circular, Stationary };

  Kind kind = Kind::Stationary;
  // Linear and stationary
  Vec2 start;
  Vec2 velocity;
  std::vector<VelocityJump> jumps;
  bool bounce = false;  // reflect off the scenario bounds
  // Circular
  Vec2 center;
  double radius = 0.0;
  double angular_speed = 0.0;  // rad/s
  double phase = 0.0;
};

/// Parses "linear x y vx vy [jump F vx vy]... [bounce]", "circular cx cy r omega
/// phase" or "stationary x y".
AgentSpec parse_agent(const std::string& text);

struct SyntheticSpec {
  std::string name = "synthetic";
  std::size_t frames = 200;
  double frame_period = 0.4;
  /// Used for bouncing movers and as the scene bounds; derived from the
  /// trajectories when absent.
  std::optional<Bounds> bounds;
  /// Standard deviation of Gaussian noise on reported positions.
  double position_noise = 0.0;
  std::uint64_t seed = 0;
  std::vector<AgentSpec> agents;
};

/// Deterministic timeline for a spec and seed. Agent k has id "a<k>".
ScenarioTimeline synthetic_scenario(const SyntheticSpec& spec);

}  // namespace ecp
