#include "ecp/sim.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

namespace ecp {

std::string to_string(Controller c) { return c == Controller::Ecp ? "ecp" : "acp"; }

Controller parse_controller(const std::string& name) {
  if (name == "ecp") return Controller::Ecp;
  if (name == "acp") return Controller::Acp;
  throw ConfigError("controller", "expected 'ecp' or 'acp', got '" + name + "'");
}

PlanShape EpisodeConfig::shape() const {
  return PlanShape{epochs, horizon, scenario ? scenario->frame_period : 0.4};
}

void EpisodeConfig::validate() const {
  if (!scenario) throw ConfigError("scenario", "no scenario loaded");
  if (history == 0) throw ConfigError("H", "must be positive");
  if (horizon == 0) throw ConfigError("N", "must be positive");
  if (epochs == 0 || horizon % epochs != 0) throw ConfigError("D", "must be positive and divide N");
  if (epochs > PlanPrefix::kMaxLength) throw ConfigError("D", "too many decision epochs");
  if (window == 0) throw ConfigError("M", "must be positive");
  if (!(gamma > 0.0)) throw ConfigError("gamma", "must be positive");
  if (!(target_alpha > 0.0 && target_alpha < 1.0)) throw ConfigError("target_alpha", "must lie in (0, 1)");
  if (t_max <= history + horizon) throw ConfigError("t_max", "must exceed H + N");
  if (!(goal.arrival_radius > 0.0)) throw ConfigError("arrival_radius", "must be positive");
  if (goal.input_cost_weight < 0.0) throw ConfigError("input_cost_weight", "must be nonnegative");
  if (goal.terminal_weight < 0.0) throw ConfigError("terminal_weight", "must be nonnegative");
  if (!(safety.r_safe > 0.0)) throw ConfigError("r_safe", "must be positive");
  if (!safety.state_bounds.nonempty()) throw ConfigError("bounds", "state bounds are empty");
  if (start_frame < 0) throw ConfigError("start_frame", "must be nonnegative");
  if (predictor && predictor->horizon() != horizon) throw ConfigError("predictor", "horizon differs from N");
}

EpisodeLog run_episode(const EpisodeConfig& config) {
  config.validate();
  const ScenarioTimeline& scenario = *config.scenario;
  const PlanShape shape = config.shape();
  std::shared_ptr<const Predictor> predictor = config.predictor;
  if (!predictor) predictor = std::make_shared<ConstantVelocityPredictor>(config.horizon, scenario.frame_period);

  EpisodeLog log;
  log.controller = config.controller;
  log.scenario = scenario.name;
  log.seed = config.seed;
  log.r_safe = config.safety.r_safe;
  log.target_alpha = config.target_alpha;
  log.n_u = config.catalog.size();

  CalibrationWindow window(config.window, config.horizon);
  AcpLedger ledger(config.horizon, config.gamma, config.target_alpha);
  ObstacleAcpState obstacle_state(config.horizon, config.gamma, config.target_alpha);
  std::deque<ObstacleSet> history;
  PredictionSheet sheet;
  std::set<std::tuple<Frame, std::size_t, PlanPrefix>> tracked;

  auto require_frame = [&](Frame f) {
    if (f >= static_cast<Frame>(scenario.frame_count())) {
      log.coverage = config.controller == Controller::Ecp ? ledger.coverage() : obstacle_state.coverage();
      throw TruncationError("scenario '" + scenario.name + "' has " + std::to_string(scenario.frame_count()) +
                                " frames; episode needs frame " + std::to_string(f),
                            log);
    }
  };

  // Per frame: calibrate on the new observation, then predict.
  auto observe = [&](Frame f) {
    require_frame(f);
    const ObstacleSet& realized = scenario.at(f);
    window.observe(f, realized);
    if (config.controller == Controller::Ecp) {
      for (auto& o : ledger.record_frame(realized, f)) {
        if (tracked.erase({o.issue_frame, o.horizon, o.prefix}) > 0) log.outcomes.push_back(std::move(o));
      }
    } else {
      auto outcomes = obstacle_state.record_frame(realized, f);
      log.outcomes.insert(log.outcomes.end(), outcomes.begin(), outcomes.end());
    }
    history.push_back(realized);
    while (history.size() > config.history) history.pop_front();
    if (history.size() == config.history) {
      sheet = predictor->predict(History{{history.begin(), history.end()}, f});
      window.add_prediction(sheet);
    }
  };

  const Frame control_start = config.start_frame + static_cast<Frame>(config.history + config.horizon);
  for (Frame f = config.start_frame; f < control_start; ++f) observe(f);

  VehicleState state = config.start_state;
  for (std::size_t k = 0; k < config.t_max; ++k) {
    const Frame f = control_start + static_cast<Frame>(k);
    observe(f);
    if (distance(state.position(), config.goal.position()) <= config.goal.arrival_radius) {
      log.arrived = true;
      break;
    }

    StepRecord record;
    record.step = k;
    record.frame = f;
    record.state = state;
    record.realized = scenario.at(f);
    record.min_clearance = min_distance(state.position(), record.realized);

    std::optional<PlanRollout> best;
    if (config.controller == Controller::Ecp) {
      auto solution = solve_ecp_mpc(state, sheet, window, ledger, config.goal, config.safety, config.catalog, shape, f,
                                    config.planner);
      for (const auto& check : solution.staged) {
        ledger.stage(check);
        if (!is_tracked(solution, check)) continue;
        tracked.emplace(check.issue_frame, check.horizon, check.prefix);
        record.radii.push_back({check.horizon, check.prefix, check.radius});
      }
      best = std::move(solution.best);
    } else {
      auto solution = solve_acp_mpc(state, sheet, window, obstacle_state, config.goal, config.safety, config.catalog,
                                    shape, f, config.planner);
      for (std::size_t i = 1; i <= config.horizon; ++i) record.radii.push_back({i, PlanPrefix{}, solution.radii[i - 1]});
      for (auto& check : solution.staged) obstacle_state.stage(std::move(check));
      best = std::move(solution.best);
    }

    if (best) {
      record.feasible = true;
      record.plan = best->index.epochs;
      record.input = best->inputs.front();
      record.plan_cost = *best->total_cost;
    } else {
      record.feasible = false;
      record.input = config.safety.fallback_input;
      record.plan_cost = plan_objective(constant_rollout(state, config.safety.fallback_input, shape), config.goal);
    }
    state = unicycle_step(state, record.input, shape.step);
    log.steps.push_back(std::move(record));
  }
  log.coverage = config.controller == Controller::Ecp ? ledger.coverage() : obstacle_state.coverage();
  return log;
}

MetricsReport compute_metrics(const EpisodeLog& log) {
  if (log.steps.empty()) throw std::invalid_argument("compute_metrics: empty episode log");
  MetricsReport report;
  report.travel_time = log.travel_time();
  std::size_t collisions = 0;
  std::size_t infeasible = 0;
  double cost = 0.0;
  for (const StepRecord& s : log.steps) {
    if (min_distance(s.state.position(), s.realized) < ExtReal{log.r_safe}) ++collisions;
    if (!s.feasible) ++infeasible;
    cost += s.plan_cost;
  }
  const auto tau = static_cast<double>(report.travel_time);
  report.collision_rate = static_cast<double>(collisions) / tau;
  report.infeasibility_rate = static_cast<double>(infeasible) / tau;
  report.average_cost = cost / tau;
  return report;
}

std::vector<CoveragePoint> coverage_series(Controller controller, const std::vector<CheckOutcome>& outcomes) {
  std::vector<const CheckOutcome*> selected;
  for (const auto& o : outcomes) {
    if (controller == Controller::Ecp ? (o.horizon == 1 && o.prefix.size() == 1) : o.prefix.size() == 0)
      selected.push_back(&o);
  }
  std::stable_sort(selected.begin(), selected.end(),
                   [](const CheckOutcome* a, const CheckOutcome* b) { return a->issue_frame < b->issue_frame; });
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> tally;  // series -> (resolved, covered)
  std::vector<CoveragePoint> points;
  points.reserve(selected.size());
  for (const CheckOutcome* o : selected) {
    const std::size_t series = controller == Controller::Ecp ? static_cast<std::size_t>(o->prefix[0]) + 1 : o->horizon;
    auto& [resolved, covered] = tally[series];
    ++resolved;
    covered += o->covered ? 1 : 0;
    points.push_back({resolved, series, static_cast<double>(covered) / static_cast<double>(resolved)});
  }
  return points;
}

}  // namespace ecp
