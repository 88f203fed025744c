#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecp/ext_real.hpp"

namespace ecp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

double norm(Vec2 v);
double distance(Vec2 a, Vec2 b);

/// Wraps an angle into (-pi, pi].
double normalize_angle(double theta);

struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians, (-pi, pi]

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

struct ControlInput {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s

  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

using ObstacleId = std::string;

/// Labeled obstacle positions at a single timestep.
///
/// Entries are kept sorted by id, so iteration order (and therefore every
/// downstream floating-point reduction) is independent of insertion order.
class ObstacleSet {
 public:
  struct Entry {
    ObstacleId id;
    Vec2 position;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  ObstacleSet() = default;

  /// Throws std::invalid_argument on a duplicate id.
  void insert(ObstacleId id, Vec2 position);
  /// Like insert(), but overwrites an existing entry.
  void upsert(ObstacleId id, Vec2 position);

  std::optional<Vec2> find(const ObstacleId& id) const;
  bool contains(const ObstacleId& id) const { return find(id).has_value(); }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  /// Positions in id order, contiguous for distance sweeps.
  std::span<const Vec2> positions() const { return positions_; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const ObstacleSet& a, const ObstacleSet& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<Entry> entries_;
  std::vector<Vec2> positions_;
};

struct GoalSpec {
  double goal_x = 0.0;
  double goal_y = 0.0;
  double arrival_radius = 0.5;
  double input_cost_weight = 1e-3;
  double terminal_weight = 10.0;

  Vec2 position() const { return {goal_x, goal_y}; }
};

/// Axis-aligned rectangle [x_min, x_max] x [y_min, y_max].
struct Bounds {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(Vec2 p) const { return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max; }
  bool nonempty() const { return x_min <= x_max && y_min <= y_max; }
  Bounds padded(double margin) const { return {x_min - margin, x_max + margin, y_min - margin, y_max + margin}; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// inf over the set of Euclidean distances; +inf for an empty set.
ExtReal min_distance(Vec2 point, std::span<const Vec2> obstacles);
ExtReal min_distance(Vec2 point, const ObstacleSet& obstacles);

/// sup over a of d(a, b); 0 when a is empty, +inf when only b is empty.
ExtReal directed_hausdorff(const ObstacleSet& a, const ObstacleSet& b);
/// Symmetric Hausdorff distance: max of the two directed distances.
ExtReal hausdorff_distance(const ObstacleSet& a, const ObstacleSet& b);

VehicleState unicycle_step(const VehicleState& state, const ControlInput& input, double h);

double stage_cost(const VehicleState& state, const ControlInput& input, const GoalSpec& goal);
double terminal_cost(const VehicleState& state, const GoalSpec& goal);

}  // namespace ecp
