#include "ecp/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace ecp {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const std::set<std::string> kKnownKeys = {
    "scenario_name", "scenario_source", "dataset_path", "frame_period",
    "format.frame_column", "format.id_column", "format.x_column", "format.y_column", "format.delimiter",
    "format.native_stride", "format.max_gap",
    "synthetic.frames", "synthetic.noise", "synthetic.bounds", "agent",
    "start_x", "start_y", "start_theta", "goal_x", "goal_y", "arrival_radius", "input_cost_weight", "terminal_weight",
    "controller", "t_max", "H", "N", "D", "M", "gamma", "target_alpha", "r_safe", "bounds",
    "fallback_v", "fallback_omega", "velocities", "omegas",
    "predictor", "predictor.bias_x", "predictor.bias_y",
    "seed", "repeat", "start_frame", "start_frame_stride", "threads"};

std::vector<double> number_list(const KeyValueConfig& config, const std::string& key, const std::string& fallback) {
  std::istringstream in(config.get_or(key, fallback));
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ConfigError(key, "expected numbers, got '" + token + "'");
    }
  }
  return out;
}

Bounds parse_bounds(const KeyValueConfig& config, const std::string& key) {
  const auto v = number_list(config, key, "");
  if (v.size() != 4) throw ConfigError(key, "expected 'x_min x_max y_min y_max'");
  Bounds b{v[0], v[1], v[2], v[3]};
  if (!b.nonempty()) throw ConfigError(key, "bounds are empty");
  return b;
}

std::filesystem::path resolve_data_path(const KeyValueConfig& config, const std::string& key) {
  const std::filesystem::path raw = config.get(key);
  std::vector<std::filesystem::path> candidates;
  if (raw.is_absolute()) {
    candidates.push_back(raw);
  } else {
    candidates.push_back(config.base_dir() / raw);
    if (const char* data_dir = std::getenv("ECP_DATA_DIR")) {
      candidates.push_back(std::filesystem::path(data_dir) / raw);
      candidates.push_back(std::filesystem::path(data_dir) / raw.filename());
    }
  }
  for (const auto& c : candidates)
    if (std::filesystem::exists(c)) return c;
  throw ConfigError(key, "dataset file '" + raw.string() + "' not found (searched the config directory and $ECP_DATA_DIR)");
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  KeyValueConfig config = parse(buffer.str(), path.string());
  config.base_dir_ = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return config;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  KeyValueConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    config.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return config;
}

void KeyValueConfig::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override", "expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  if (!kKnownKeys.count(key)) throw ConfigError(key, "unknown configuration key");
  if (key != "agent") values_.erase(key);
  values_.emplace(key, value);
}

const std::string& KeyValueConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "required key missing");
  return it->second;
}

std::string KeyValueConfig::get_or(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::vector<std::string> KeyValueConfig::get_all(const std::string& key) const {
  std::vector<std::string> out;
  auto [a, b] = values_.equal_range(key);
  for (auto it = a; it != b; ++it) out.push_back(it->second);
  return out;
}

double KeyValueConfig::number(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  const std::string& text = get(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
}

std::size_t KeyValueConfig::count(const std::string& key, std::size_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& text = get(key);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size() || v < 0) throw std::invalid_argument(text);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a nonnegative integer, got '" + text + "'");
  }
}

AnnotationFormat annotation_format(const KeyValueConfig& config) {
  AnnotationFormat f;
  f.frame_column = config.count("format.frame_column", f.frame_column);
  f.id_column = config.count("format.id_column", f.id_column);
  f.x_column = config.count("format.x_column", f.x_column);
  f.y_column = config.count("format.y_column", f.y_column);
  try {
    f.delimiter = parse_delimiter(config.get_or("format.delimiter", "whitespace"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("format.delimiter", e.what());
  }
  f.native_stride = config.number("format.native_stride", f.native_stride);
  if (!(f.native_stride > 0.0)) throw ConfigError("format.native_stride", "must be positive");
  f.max_gap = config.count("format.max_gap", f.max_gap);
  f.frame_period = config.number("frame_period", f.frame_period);
  if (!(f.frame_period > 0.0)) throw ConfigError("frame_period", "must be positive");
  return f;
}

EpisodeConfig Experiment::episode(Controller controller, std::size_t r) const {
  EpisodeConfig config = base;
  config.controller = controller;
  config.seed = seed_base + r;
  config.start_frame = base.start_frame + static_cast<Frame>(r) * start_frame_stride;
  if (synthetic) {
    SyntheticSpec spec = *synthetic;
    spec.seed = config.seed;
    config.scenario = std::make_shared<const ScenarioTimeline>(synthetic_scenario(spec));
  } else {
    config.scenario = fixed_scenario;
  }
  config.safety.state_bounds = state_bounds.value_or(config.scenario->scene_bounds);
  return config;
}

Experiment build_experiment(const KeyValueConfig& config) {
  Experiment ex;
  ex.scenario_name = config.get_or("scenario_name", "scenario");
  const std::string controller = config.get_or("controller", "both");
  if (controller == "both") {
    ex.controllers = {Controller::Acp, Controller::Ecp};
  } else {
    ex.controllers = {parse_controller(controller)};
  }
  ex.repeat = config.count("repeat", 1);
  if (ex.repeat < 1) throw ConfigError("repeat", "must be at least 1");
  ex.seed_base = config.count("seed", 0);
  ex.start_frame_stride = static_cast<Frame>(config.count("start_frame_stride", 0));

  EpisodeConfig& e = ex.base;
  e.start_state = {config.number("start_x", 0.0), config.number("start_y", 0.0),
                   normalize_angle(config.number("start_theta", 0.0))};
  e.goal.goal_x = config.number("goal_x", 0.0);
  e.goal.goal_y = config.number("goal_y", 0.0);
  e.goal.arrival_radius = config.number("arrival_radius", e.goal.arrival_radius);
  e.goal.input_cost_weight = config.number("input_cost_weight", e.goal.input_cost_weight);
  e.goal.terminal_weight = config.number("terminal_weight", e.goal.terminal_weight);
  e.t_max = config.count("t_max", e.t_max);
  e.history = config.count("H", e.history);
  e.horizon = config.count("N", e.horizon);
  e.epochs = config.count("D", e.epochs);
  e.window = config.count("M", e.window);
  e.gamma = config.number("gamma", e.gamma);
  e.target_alpha = config.number("target_alpha", e.target_alpha);
  e.safety.r_safe = config.number("r_safe", e.safety.r_safe);
  e.safety.target_alpha = e.target_alpha;
  e.safety.fallback_input = {config.number("fallback_v", 0.0), config.number("fallback_omega", 0.0)};
  e.start_frame = static_cast<Frame>(config.count("start_frame", 0));
  e.planner.threads = config.count("threads", 1);
  try {
    e.catalog = InputCatalog::grid(number_list(config, "velocities", "-0.8 0 0.8"), number_list(config, "omegas", "-0.7 0 0.7"));
  } catch (const std::invalid_argument& err) {
    throw ConfigError("velocities", err.what());
  }
  const std::string bounds = config.get_or("bounds", "scene");
  if (bounds != "scene") ex.state_bounds = parse_bounds(config, "bounds");

  const std::string source = config.get_or("scenario_source", "synthetic");
  const double frame_period = config.number("frame_period", 0.4);
  if (!(frame_period > 0.0)) throw ConfigError("frame_period", "must be positive");
  if (source == "synthetic") {
    SyntheticSpec spec;
    spec.name = ex.scenario_name;
    spec.frame_period = frame_period;
    spec.frames = config.count("synthetic.frames", e.history + e.horizon + e.t_max + 1);
    spec.position_noise = config.number("synthetic.noise", 0.0);
    if (spec.position_noise < 0.0) throw ConfigError("synthetic.noise", "must be nonnegative");
    if (config.has("synthetic.bounds")) spec.bounds = parse_bounds(config, "synthetic.bounds");
    for (const auto& text : config.get_all("agent")) {
      try {
        spec.agents.push_back(parse_agent(text));
      } catch (const std::invalid_argument& err) {
        throw ConfigError("agent", err.what());
      }
    }
    ex.synthetic = spec;
  } else if (source == "annotations") {
    const auto path = resolve_data_path(config, "dataset_path");
    ex.fixed_scenario = std::make_shared<const ScenarioTimeline>(load_annotations(path, annotation_format(config), ex.scenario_name));
  } else if (source == "timeline") {
    const auto path = resolve_data_path(config, "dataset_path");
    ex.fixed_scenario = std::make_shared<const ScenarioTimeline>(load_timeline(path));
  } else {
    throw ConfigError("scenario_source", "expected synthetic, annotations or timeline");
  }

  if (e.horizon == 0) throw ConfigError("N", "must be positive");
  const std::string predictor = config.get_or("predictor", "constant_velocity");
  const Vec2 bias{config.number("predictor.bias_x", 0.0), config.number("predictor.bias_y", 0.0)};
  if (predictor == "constant_velocity") {
    e.predictor = std::make_shared<ConstantVelocityPredictor>(e.horizon, frame_period, bias);
  } else {
    e.predictor = load_precomputed_predictions(resolve_data_path(config, "predictor"), e.horizon);
  }

  // Validate with a resolved scenario so every field error surfaces up front.
  ex.episode(ex.controllers.front(), 0).validate();
  return ex;
}

}  // namespace ecp
