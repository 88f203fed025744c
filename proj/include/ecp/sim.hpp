#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ecp/conformal.hpp"
#include "ecp/dataset.hpp"
#include "ecp/errors.hpp"
#include "ecp/planner.hpp"
#include "ecp/predictor.hpp"

namespace ecp {

enum class Controller { Ecp, Acp };

std::string to_string(Controller c);
Controller parse_controller(const std::string& name);

struct EpisodeConfig {
  std::shared_ptr<const ScenarioTimeline> scenario;
  /// Defaults to constant-velocity extrapolation when null.
  std::shared_ptr<const Predictor> predictor;
  VehicleState start_state;
  GoalSpec goal;
  Controller controller = Controller::Ecp;
  std::size_t t_max = 100;
  std::size_t history = 8;    // H
  std::size_t horizon = 12;   // N
  std::size_t epochs = 3;     // D
  std::size_t window = 30;    // M
  double gamma = 0.03;
  double target_alpha = 0.1;
  SafetyConfig safety;
  InputCatalog catalog = InputCatalog::standard();
  /// First scenario frame of the warm-up.
  Frame start_frame = 0;
  std::uint64_t seed = 0;
  PlannerOptions planner;

  PlanShape shape() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// A staged check as logged: the radius issued for (prefix, horizon).
struct RadiusRecord {
  std::size_t horizon = 0;
  PlanPrefix prefix;
  ExtReal radius;
};

struct StepRecord {
  std::size_t step = 0;
  Frame frame = 0;
  VehicleState state;
  ControlInput input;
  bool feasible = false;
  /// Executed plan's epochs; empty on infeasible steps.
  PlanPrefix plan;
  double plan_cost = 0.0;
  ObstacleSet realized;
  /// Clearance of the current state to the realized obstacles.
  ExtReal min_clearance;
  std::vector<RadiusRecord> radii;
};

struct EpisodeLog {
  Controller controller = Controller::Ecp;
  std::string scenario;
  std::uint64_t seed = 0;
  double r_safe = 0.3;
  double target_alpha = 0.1;
  std::size_t n_u = 0;
  std::vector<StepRecord> steps;
  /// Resolved checks in order. For ECP only the tracked checks are kept:
  /// single-epoch prefixes and the prefixes of each executed plan.
  std::vector<CheckOutcome> outcomes;
  /// Online per-(prefix, horizon) coverage tallies kept by the ledger.
  std::map<LedgerKey, CoverageCount> coverage;
  bool arrived = false;

  /// Steps to reach the goal, or t_max.
  std::size_t travel_time() const { return steps.size(); }
};

/// Scenario ran out of frames; partial() holds the steps executed so far.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, EpisodeLog partial) : Error(what), partial_{std::move(partial)} {}
  const EpisodeLog& partial() const { return partial_; }

 private:
  EpisodeLog partial_;
};

/// Closed-loop run: H + N warm-up frames of pure observation, then per step
/// observe, update calibration, predict, solve, and apply the first input (or
/// the fallback input when no plan is feasible).
EpisodeLog run_episode(const EpisodeConfig& config);

struct MetricsReport {
  std::size_t travel_time = 0;
  double collision_rate = 0.0;
  double average_cost = 0.0;
  double infeasibility_rate = 0.0;
};

/// Collisions are recomputed from realized obstacle positions in the log.
MetricsReport compute_metrics(const EpisodeLog& log);

struct CoveragePoint {
  std::size_t step = 0;    // 1-based count within the series
  std::size_t series = 0;  // input index (ECP) or horizon (ACP), 1-based
  double running_coverage = 0.0;
};

/// Running coverage per single-step input (ECP) or per horizon (ACP),
/// recomputed from resolved checks in issue order.
std::vector<CoveragePoint> coverage_series(Controller controller, const std::vector<CheckOutcome>& outcomes);

}  // namespace ecp
