#include "ecp/planner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ecp/parallel.hpp"

namespace ecp {

InputCatalog::InputCatalog(std::vector<ControlInput> inputs) : inputs_{std::move(inputs)} {
  if (inputs_.empty()) throw std::invalid_argument("InputCatalog: empty");
  if (inputs_.size() > 255) throw std::invalid_argument("InputCatalog: at most 255 inputs");
  for (std::size_t a = 0; a < inputs_.size(); ++a) {
    if (!std::isfinite(inputs_[a].v) || !std::isfinite(inputs_[a].omega))
      throw std::invalid_argument("InputCatalog: non-finite input");
    for (std::size_t b = a + 1; b < inputs_.size(); ++b)
      if (inputs_[a] == inputs_[b]) throw std::invalid_argument("InputCatalog: duplicate input");
  }
}

InputCatalog InputCatalog::grid(std::span<const double> velocities, std::span<const double> omegas) {
  std::vector<ControlInput> inputs;
  for (double v : velocities)
    for (double w : omegas) inputs.push_back({v, w});
  return InputCatalog{std::move(inputs)};
}

InputCatalog InputCatalog::standard() {
  const double v[] = {-0.8, 0.0, 0.8};
  const double w[] = {-0.7, 0.0, 0.7};
  return grid(v, w);
}

void PlanShape::validate() const {
  if (epochs == 0 || horizon == 0) throw std::invalid_argument("PlanShape: D and N must be positive");
  if (horizon % epochs != 0) throw std::invalid_argument("PlanShape: D must divide N");
  if (epochs > PlanPrefix::kMaxLength) throw std::invalid_argument("PlanShape: too many decision epochs");
  if (!(step > 0.0)) throw std::invalid_argument("PlanShape: step must be positive");
}

void SafetyConfig::validate() const {
  if (!(r_safe > 0.0)) throw std::invalid_argument("SafetyConfig: r_safe must be positive");
  if (!state_bounds.nonempty()) throw std::invalid_argument("SafetyConfig: state bounds are empty");
}

namespace {

std::size_t checked_pow(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    if (out > (std::size_t{1} << 26) / base) throw std::invalid_argument("plan space too large to enumerate");
    out *= base;
  }
  return out;
}

PlanRollout roll(const VehicleState& state, PlanIndex index, const InputCatalog& catalog, const PlanShape& shape) {
  PlanRollout r;
  r.index = std::move(index);
  r.states.reserve(shape.horizon + 1);
  r.inputs.reserve(shape.horizon);
  r.states.push_back(state);
  for (std::size_t k = 0; k < shape.horizon; ++k) {
    const ControlInput& u = catalog[r.index.input_at(k)];
    r.inputs.push_back(u);
    r.states.push_back(unicycle_step(r.states.back(), u, shape.step));
  }
  return r;
}

/// Candidate position and predicted clearance for every (horizon, prefix).
struct PrefixTable {
  struct Cell {
    Vec2 candidate;
    ExtReal predicted_distance;
  };
  std::vector<std::vector<Cell>> cells;  // cells[i - 1][prefix code]
  std::vector<std::size_t> stride;       // stride[i - 1]: rollouts per prefix at horizon i
};

PrefixTable build_prefix_table(const std::vector<PlanRollout>& rollouts, const PredictionSheet& predictions,
                               std::size_t n_u, const PlanShape& shape, std::size_t threads) {
  PrefixTable table;
  table.cells.resize(shape.horizon);
  table.stride.resize(shape.horizon);
  for (std::size_t i = 1; i <= shape.horizon; ++i) {
    const std::size_t k = shape.epochs_for(i);
    table.stride[i - 1] = checked_pow(n_u, shape.epochs - k);
    table.cells[i - 1].resize(checked_pow(n_u, k));
  }
  // Flatten (horizon, prefix) so the work splits evenly across threads.
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 1; i <= shape.horizon; ++i)
    for (std::size_t c = 0; c < table.cells[i - 1].size(); ++c) jobs.emplace_back(i, c);
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    const auto [i, c] = jobs[j];
    const Vec2 candidate = rollouts[c * table.stride[i - 1]].states[i].position();
    table.cells[i - 1][c] = {candidate, min_distance(candidate, predictions.at(i))};
  });
  return table;
}

template <typename RadiusFn>
void mark_feasibility(std::vector<PlanRollout>& rollouts, const PrefixTable& table, const SafetyConfig& safety,
                      const PlanShape& shape, std::size_t threads, RadiusFn&& radius) {
  const ExtReal r_safe{safety.r_safe};
  parallel_for(rollouts.size(), threads, [&](std::size_t r) {
    PlanRollout& rollout = rollouts[r];
    rollout.feasible = true;
    rollout.first_violation.reset();
    for (std::size_t i = 1; i <= shape.horizon; ++i) {
      if (!safety.state_bounds.contains(rollout.states[i].position())) {
        rollout.feasible = false;
        rollout.first_violation = Violation{i, Violation::Reason::OutOfBounds};
        return;
      }
      const std::size_t code = r / table.stride[i - 1];
      if (!(table.cells[i - 1][code].predicted_distance >= r_safe + radius(i, code))) {
        rollout.feasible = false;
        rollout.first_violation = Violation{i, Violation::Reason::TooClose};
        return;
      }
    }
  });
}

/// Lowest cost feasible rollout; rollouts are in lexicographic order, so the
/// first minimum wins ties.
std::optional<std::size_t> pick_best(const std::vector<PlanRollout>& rollouts) {
  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < rollouts.size(); ++r) {
    if (rollouts[r].feasible && (!best || *rollouts[r].total_cost < *rollouts[*best].total_cost)) best = r;
  }
  return best;
}

void check_inputs(const PredictionSheet& predictions, const CalibrationWindow& window, const SafetyConfig& safety,
                  const PlanShape& shape) {
  shape.validate();
  safety.validate();
  if (predictions.horizon() != shape.horizon) throw std::invalid_argument("prediction sheet horizon differs from N");
  if (window.horizon() != shape.horizon) throw std::invalid_argument("calibration window horizon differs from N");
}

std::vector<PlanRollout> costed_rollouts(const VehicleState& state, const InputCatalog& catalog, const PlanShape& shape,
                                         const GoalSpec& goal, std::size_t threads) {
  auto rollouts = enumerate_rollouts(state, catalog, shape);
  parallel_for(rollouts.size(), threads, [&](std::size_t r) { rollouts[r].total_cost = plan_objective(rollouts[r], goal); });
  return rollouts;
}

}  // namespace

std::vector<PlanRollout> enumerate_rollouts(const VehicleState& state, const InputCatalog& catalog, const PlanShape& shape) {
  shape.validate();
  const std::size_t n_u = catalog.size();
  const std::size_t count = checked_pow(n_u, shape.epochs);
  std::vector<PlanRollout> rollouts;
  rollouts.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    PlanIndex index;
    index.epoch_length = shape.epoch_length();
    std::size_t rest = code;
    std::size_t divisor = count / n_u;
    for (std::size_t e = 0; e < shape.epochs; ++e) {
      index.epochs.push_back(static_cast<std::uint8_t>(rest / divisor));
      rest %= divisor;
      divisor = divisor > 1 ? divisor / n_u : 1;
    }
    rollouts.push_back(roll(state, std::move(index), catalog, shape));
  }
  return rollouts;
}

PlanRollout constant_rollout(const VehicleState& state, const ControlInput& input, const PlanShape& shape) {
  shape.validate();
  InputCatalog single({input});
  PlanIndex index;
  index.epoch_length = shape.epoch_length();
  for (std::size_t e = 0; e < shape.epochs; ++e) index.epochs.push_back(0);
  return roll(state, std::move(index), single, shape);
}

double plan_objective(const PlanRollout& rollout, const GoalSpec& goal) {
  double total = 0.0;
  for (std::size_t i = 0; i < rollout.inputs.size(); ++i) total += stage_cost(rollout.states[i], rollout.inputs[i], goal);
  return total + terminal_cost(rollout.states.back(), goal);
}

EcpSolution solve_ecp_mpc(const VehicleState& state, const PredictionSheet& predictions, const CalibrationWindow& window,
                          const AcpLedger& ledger, const GoalSpec& goal, const SafetyConfig& safety,
                          const InputCatalog& catalog, const PlanShape& shape, Frame frame,
                          const PlannerOptions& options) {
  check_inputs(predictions, window, safety, shape);
  const std::size_t threads = options.threads;
  const std::size_t n_u = catalog.size();

  EcpSolution solution;
  solution.rollouts = costed_rollouts(state, catalog, shape, goal, threads);
  const PrefixTable table = build_prefix_table(solution.rollouts, predictions, n_u, shape, threads);

  std::vector<std::vector<ExtReal>> radius(shape.horizon);
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 1; i <= shape.horizon; ++i) {
    radius[i - 1].resize(table.cells[i - 1].size());
    for (std::size_t c = 0; c < radius[i - 1].size(); ++c) jobs.emplace_back(i, c);
  }
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    const auto [i, c] = jobs[j];
    const PlanRollout& representative = solution.rollouts[c * table.stride[i - 1]];
    const double a = ledger.alpha(representative.index.prefix_for(i), i);
    radius[i - 1][c] = egocentric_radius(table.cells[i - 1][c].candidate, i, window, a);
  });

  mark_feasibility(solution.rollouts, table, safety, shape, threads,
                   [&](std::size_t i, std::size_t code) { return radius[i - 1][code]; });
  const auto best = pick_best(solution.rollouts);
  if (best) solution.best = solution.rollouts[*best];

  auto stage = [&](std::size_t i, std::size_t code) {
    const PlanRollout& representative = solution.rollouts[code * table.stride[i - 1]];
    const auto& cell = table.cells[i - 1][code];
    solution.staged.push_back(PendingCheck{frame, frame + static_cast<Frame>(i), i, representative.index.prefix_for(i),
                                           cell.candidate, cell.predicted_distance, radius[i - 1][code]});
  };
  for (std::size_t i = 1; i <= shape.horizon; ++i)
    for (std::size_t c = 0; c < table.cells[i - 1].size(); ++c) stage(i, c);
  return solution;
}

bool is_tracked(const EcpSolution& solution, const PendingCheck& check) {
  if (check.prefix.size() == 1) return true;
  return solution.best && solution.best->index.prefix_for(check.horizon) == check.prefix;
}

AcpSolution solve_acp_mpc(const VehicleState& state, const PredictionSheet& predictions, const CalibrationWindow& window,
                          const ObstacleAcpState& obstacle_state, const GoalSpec& goal, const SafetyConfig& safety,
                          const InputCatalog& catalog, const PlanShape& shape, Frame frame,
                          const PlannerOptions& options) {
  check_inputs(predictions, window, safety, shape);
  if (obstacle_state.horizon() != shape.horizon) throw std::invalid_argument("obstacle ACP state horizon differs from N");
  const std::size_t threads = options.threads;

  AcpSolution solution;
  solution.rollouts = costed_rollouts(state, catalog, shape, goal, threads);
  const PrefixTable table = build_prefix_table(solution.rollouts, predictions, catalog.size(), shape, threads);

  solution.radii.reserve(shape.horizon);
  for (std::size_t i = 1; i <= shape.horizon; ++i)
    solution.radii.push_back(obstacle_centric_radius(i, window, obstacle_state.alpha(i)));

  mark_feasibility(solution.rollouts, table, safety, shape, threads,
                   [&](std::size_t i, std::size_t) { return solution.radii[i - 1]; });
  if (const auto best = pick_best(solution.rollouts)) solution.best = solution.rollouts[*best];

  for (std::size_t i = 1; i <= shape.horizon; ++i)
    solution.staged.push_back({frame, frame + static_cast<Frame>(i), i, predictions.at(i), solution.radii[i - 1]});
  return solution;
}

std::vector<Vec2> make_cover_grid(const Bounds& bounds, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("make_cover_grid: delta must be positive");
  if (!bounds.nonempty()) throw std::invalid_argument("make_cover_grid: empty bounds");
  // Square cells of side delta*sqrt(2) have circumradius delta.
  const double spacing = delta * std::sqrt(2.0);
  const auto nx = static_cast<std::size_t>(std::ceil((bounds.x_max - bounds.x_min) / spacing)) + 1;
  const auto ny = static_cast<std::size_t>(std::ceil((bounds.y_max - bounds.y_min) / spacing)) + 1;
  std::vector<Vec2> grid;
  grid.reserve(nx * ny);
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t iy = 0; iy < ny; ++iy)
      grid.push_back({bounds.x_min + static_cast<double>(ix) * spacing, bounds.y_min + static_cast<double>(iy) * spacing});
  return grid;
}

std::vector<std::size_t> grid_safe_set(std::span<const Vec2> grid, double delta, const ObstacleSet& predicted,
                                       std::span<const ExtReal> radii, double r_safe) {
  if (grid.size() != radii.size()) throw std::invalid_argument("grid_safe_set: one radius per grid point required");
  if (delta < 0.0) throw std::invalid_argument("grid_safe_set: delta must be nonnegative");
  std::vector<std::size_t> admitted;
  const ExtReal margin{r_safe + delta};
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (min_distance(grid[p], predicted) >= margin + radii[p]) admitted.push_back(p);
  }
  return admitted;
}

}  // namespace ecp
