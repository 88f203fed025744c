#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecp/conformal.hpp"
#include "ecp/geometry.hpp"
#include "ecp/predictor.hpp"

namespace ecp {

/// Finite set of admissible control inputs.
class InputCatalog {
 public:
  /// Throws std::invalid_argument if empty, duplicated, or larger than 255.
  explicit InputCatalog(std::vector<ControlInput> inputs);

  /// {-0.8, 0, 0.8} x {-0.7, 0, 0.7}, velocity-major.
  static InputCatalog standard();
  /// Cartesian product velocity-major.
  static InputCatalog grid(std::span<const double> velocities, std::span<const double> omegas);

  std::size_t size() const { return inputs_.size(); }
  const ControlInput& operator[](std::size_t k) const { return inputs_[k]; }
  const std::vector<ControlInput>& inputs() const { return inputs_; }

 private:
  std::vector<ControlInput> inputs_;
};

/// Shape of the discrete plan space: D decision epochs of l = N / D steps.
struct PlanShape {
  std::size_t epochs = 3;    // D
  std::size_t horizon = 12;  // N
  double step = 0.4;         // h, seconds

  std::size_t epoch_length() const { return horizon / epochs; }
  /// Number of leading epochs that determine the state at horizon i.
  std::size_t epochs_for(std::size_t i) const { return (i + epoch_length() - 1) / epoch_length(); }
  void validate() const;
};

/// One choice of catalog index per decision epoch.
struct PlanIndex {
  PlanPrefix epochs;
  std::size_t epoch_length = 1;

  /// Catalog index applied at step k (0-based).
  std::size_t input_at(std::size_t k) const { return epochs[k / epoch_length]; }
  PlanPrefix prefix_for(std::size_t horizon) const {
    return epochs.truncated((horizon + epoch_length - 1) / epoch_length);
  }
  std::string to_string() const { return epochs.to_string(); }
};

struct Violation {
  enum class Reason { OutOfBounds, TooClose };
  std::size_t horizon = 0;
  Reason reason = Reason::TooClose;
};

struct PlanRollout {
  PlanIndex index;
  std::vector<VehicleState> states;  // N + 1
  std::vector<ControlInput> inputs;  // N
  std::optional<double> total_cost;
  bool feasible = false;
  std::optional<Violation> first_violation;
};

struct SafetyConfig {
  double r_safe = 0.3;
  Bounds state_bounds{-1e3, 1e3, -1e3, 1e3};
  double target_alpha = 0.1;
  ControlInput fallback_input{};

  void validate() const;
};

struct PlannerOptions {
  std::size_t threads = 1;  // 0: one per hardware thread
};

/// Rolls out all n_u^D plans in lexicographic order of their epoch choices.
std::vector<PlanRollout> enumerate_rollouts(const VehicleState& state, const InputCatalog& catalog, const PlanShape& shape);

/// Rollout that applies a single input for all N steps.
PlanRollout constant_rollout(const VehicleState& state, const ControlInput& input, const PlanShape& shape);

/// sum_{i<N} stage_cost(x_i, u_i) + terminal_cost(x_N)
double plan_objective(const PlanRollout& rollout, const GoalSpec& goal);

struct EcpSolution {
  std::optional<PlanRollout> best;
  std::vector<PlanRollout> rollouts;
  std::vector<PendingCheck> staged;
};

/// Egocentric CP-MPC over the discrete plan space.
///
/// Each (prefix, horizon) pair gets its own calibrated radius, so two plans
/// that agree on the epochs reaching horizon i share that radius bit for bit.
/// A check is staged for every (prefix, horizon) pair, whether or not any
/// plan is feasible, so every prefix keeps adapting. The ledger is read only;
/// callers feed `staged` back into it.
EcpSolution solve_ecp_mpc(const VehicleState& state, const PredictionSheet& predictions, const CalibrationWindow& window,
                          const AcpLedger& ledger, const GoalSpec& goal, const SafetyConfig& safety,
                          const InputCatalog& catalog, const PlanShape& shape, Frame frame,
                          const PlannerOptions& options = {});

/// True for the checks worth logging: single-epoch prefixes and the prefixes
/// of the chosen plan.
bool is_tracked(const EcpSolution& solution, const PendingCheck& check);

struct AcpSolution {
  std::optional<PlanRollout> best;
  std::vector<PlanRollout> rollouts;
  std::vector<ExtReal> radii;  // radii[i - 1]
  std::vector<ObstacleAcpState::Pending> staged;
};

/// Obstacle-centric ACP-MPC baseline: one radius per horizon for all plans.
AcpSolution solve_acp_mpc(const VehicleState& state, const PredictionSheet& predictions, const CalibrationWindow& window,
                          const ObstacleAcpState& obstacle_state, const GoalSpec& goal, const SafetyConfig& safety,
                          const InputCatalog& catalog, const PlanShape& shape, Frame frame,
                          const PlannerOptions& options = {});

/// Grid covering `bounds` so that every point lies within delta of a grid point.
std::vector<Vec2> make_cover_grid(const Bounds& bounds, double delta);

/// Indices p with d(grid[p], predicted) >= r_safe + radii[p] + delta. Every
/// point within delta of an admitted grid point satisfies the unpadded
/// constraint with that point's radius.
std::vector<std::size_t> grid_safe_set(std::span<const Vec2> grid, double delta, const ObstacleSet& predicted,
                                       std::span<const ExtReal> radii, double r_safe);

}  // namespace ecp
