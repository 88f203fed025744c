#include "ecp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ecp {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

double distance(Vec2 a, Vec2 b) { return norm(a - b); }

double normalize_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(theta, two_pi);  // [-pi, pi]
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  return wrapped;
}

namespace {

template <typename Entries>
auto lower_bound_id(Entries& entries, const ObstacleId& id) {
  return std::lower_bound(entries.begin(), entries.end(), id,
                          [](const ObstacleSet::Entry& e, const ObstacleId& key) { return e.id < key; });
}

}  // namespace

void ObstacleSet::insert(ObstacleId id, Vec2 position) {
  auto it = lower_bound_id(entries_, id);
  if (it != entries_.end() && it->id == id) throw std::invalid_argument("ObstacleSet: duplicate obstacle id '" + id + "'");
  auto offset = it - entries_.begin();
  entries_.insert(it, Entry{std::move(id), position});
  positions_.insert(positions_.begin() + offset, position);
}

void ObstacleSet::upsert(ObstacleId id, Vec2 position) {
  auto it = lower_bound_id(entries_, id);
  if (it != entries_.end() && it->id == id) {
    it->position = position;
    positions_[static_cast<std::size_t>(it - entries_.begin())] = position;
    return;
  }
  insert(std::move(id), position);
}

std::optional<Vec2> ObstacleSet::find(const ObstacleId& id) const {
  auto it = lower_bound_id(entries_, id);
  if (it == entries_.end() || it->id != id) return std::nullopt;
  return it->position;
}

ExtReal min_distance(Vec2 point, std::span<const Vec2> obstacles) {
  if (obstacles.empty()) return ExtReal::pos_inf();
  double best_sq = std::numeric_limits<double>::infinity();
  for (const Vec2& p : obstacles) {
    const double dx = p.x - point.x;
    const double dy = p.y - point.y;
    best_sq = std::min(best_sq, dx * dx + dy * dy);
  }
  return ExtReal{std::sqrt(best_sq)};
}

ExtReal min_distance(Vec2 point, const ObstacleSet& obstacles) { return min_distance(point, obstacles.positions()); }

ExtReal directed_hausdorff(const ObstacleSet& a, const ObstacleSet& b) {
  if (a.empty()) return ExtReal{0.0};
  if (b.empty()) return ExtReal::pos_inf();
  ExtReal worst{0.0};
  for (const Vec2& p : a.positions()) {
    const ExtReal d = min_distance(p, b);
    if (worst < d) worst = d;
  }
  return worst;
}

ExtReal hausdorff_distance(const ObstacleSet& a, const ObstacleSet& b) {
  const ExtReal ab = directed_hausdorff(a, b);
  const ExtReal ba = directed_hausdorff(b, a);
  return ab < ba ? ba : ab;
}

VehicleState unicycle_step(const VehicleState& s, const ControlInput& u, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("unicycle_step: h must be positive");
  return VehicleState{s.x + h * u.v * std::cos(s.theta), s.y + h * u.v * std::sin(s.theta),
                      normalize_angle(s.theta + h * u.omega)};
}

double stage_cost(const VehicleState& s, const ControlInput& u, const GoalSpec& goal) {
  const double dx = s.x - goal.goal_x;
  const double dy = s.y - goal.goal_y;
  return dx * dx + dy * dy + goal.input_cost_weight * (u.v * u.v + u.omega * u.omega);
}

double terminal_cost(const VehicleState& s, const GoalSpec& goal) {
  const double dx = s.x - goal.goal_x;
  const double dy = s.y - goal.goal_y;
  return goal.terminal_weight * (dx * dx + dy * dy);
}

}  // namespace ecp
