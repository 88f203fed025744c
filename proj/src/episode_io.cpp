#include "ecp/episode_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace ecp {

std::string format_double(double v) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, end);
}

namespace {

std::string format_ext(const ExtReal& v) { return v.is_finite() ? format_double(v.value()) : v.to_string(); }

std::string encode_obstacles(const ObstacleSet& set) {
  std::string out;
  for (const auto& [id, p] : set) {
    if (!out.empty()) out += ';';
    out += id + ':' + format_double(p.x) + ':' + format_double(p.y);
  }
  return out;
}

ObstacleSet decode_obstacles(const std::string& text) {
  ObstacleSet set;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    const auto b = item.rfind(':');
    const auto a = item.rfind(':', b - 1);
    if (a == std::string::npos || b == std::string::npos) throw std::invalid_argument("bad obstacle entry '" + item + "'");
    set.insert(item.substr(0, a), {std::stod(item.substr(a + 1, b - a - 1)), std::stod(item.substr(b + 1))});
  }
  return set;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void write_episode_csv(std::ostream& out, const EpisodeLog& log) {
  out << kEpisodeCsvHeader << '\n';
  for (const StepRecord& s : log.steps) {
    const bool collision = s.min_clearance < ExtReal{log.r_safe};
    out << s.step << ',' << s.frame << ',' << format_double(s.state.x) << ',' << format_double(s.state.y) << ','
        << format_double(s.state.theta) << ',' << format_double(s.input.v) << ',' << format_double(s.input.omega) << ','
        << (s.feasible ? 1 : 0) << ',' << (s.feasible ? s.plan.to_string() : std::string{}) << ','
        << format_double(s.plan_cost) << ',' << format_ext(s.min_clearance) << ',' << (collision ? 1 : 0) << ','
        << encode_obstacles(s.realized) << '\n';
  }
}

void write_radii_csv(std::ostream& out, const EpisodeLog& log) {
  std::map<std::tuple<Frame, std::size_t, PlanPrefix>, const CheckOutcome*> resolved;
  for (const auto& o : log.outcomes) resolved[{o.issue_frame, o.horizon, o.prefix}] = &o;
  out << kRadiiCsvHeader << '\n';
  for (const StepRecord& s : log.steps) {
    for (const RadiusRecord& r : s.radii) {
      out << s.frame << ',' << r.horizon << ',' << r.prefix.to_string() << ',' << format_ext(r.radius) << ','
          << s.frame + static_cast<Frame>(r.horizon) << ',';
      auto it = resolved.find({s.frame, r.horizon, r.prefix});
      if (it == resolved.end()) {
        out << ",pending\n";
      } else {
        out << format_ext(it->second->score) << ',' << (it->second->covered ? 1 : 0) << '\n';
      }
    }
  }
}

void write_metrics_json(std::ostream& out, const EpisodeLog& log, const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["controller"] = to_string(log.controller);
  j["scenario"] = log.scenario;
  j["seed"] = log.seed;
  j["arrived"] = log.arrived;
  j["travel_time"] = report.travel_time;
  j["collision_rate"] = report.collision_rate;
  j["average_cost"] = report.average_cost;
  j["infeasibility_rate"] = report.infeasibility_rate;
  out << j.dump(2) << '\n';
}

std::vector<StepRecord> read_episode_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedFileError(path.string(), 0, "cannot open episode log");
  std::string line;
  if (!std::getline(in, line) || line != kEpisodeCsvHeader)
    throw MalformedFileError(path.string(), 1, "unexpected episode log header");
  std::vector<StepRecord> steps;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto f = split_csv(line);
      if (f.size() != 13) throw std::invalid_argument("expected 13 columns");
      StepRecord s;
      s.step = std::stoul(f[0]);
      s.frame = std::stoll(f[1]);
      s.state = {std::stod(f[2]), std::stod(f[3]), std::stod(f[4])};
      s.input = {std::stod(f[5]), std::stod(f[6])};
      s.feasible = f[7] == "1";
      if (s.feasible) s.plan = PlanPrefix::parse(f[8]);
      s.plan_cost = std::stod(f[9]);
      s.min_clearance = ExtReal::parse(f[10]);
      s.realized = decode_obstacles(f[12]);
      steps.push_back(std::move(s));
    } catch (const std::exception& e) {
      throw MalformedFileError(path.string(), line_no, e.what());
    }
  }
  return steps;
}

std::vector<CheckOutcome> read_resolved_checks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedFileError(path.string(), 0, "cannot open radii log");
  std::string line;
  if (!std::getline(in, line) || line != kRadiiCsvHeader)
    throw MalformedFileError(path.string(), 1, "unexpected radii log header");
  std::vector<CheckOutcome> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto f = split_csv(line);
      if (f.size() != 7) throw std::invalid_argument("expected 7 columns");
      if (f[6] == "pending") continue;
      CheckOutcome o;
      o.issue_frame = std::stoll(f[0]);
      o.horizon = std::stoul(f[1]);
      o.prefix = PlanPrefix::parse(f[2]);
      o.radius = ExtReal::parse(f[3]);
      o.due_frame = std::stoll(f[4]);
      o.score = ExtReal::parse(f[5]);
      o.covered = f[6] == "1";
      out.push_back(o);
    } catch (const std::exception& e) {
      throw MalformedFileError(path.string(), line_no, e.what());
    }
  }
  return out;
}

MetricsFile read_metrics_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedFileError(path.string(), 0, "cannot open metrics file");
  try {
    const auto j = nlohmann::json::parse(in);
    MetricsFile m;
    m.controller = parse_controller(j.at("controller").get<std::string>());
    m.scenario = j.at("scenario").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.arrived = j.at("arrived").get<bool>();
    m.report.travel_time = j.at("travel_time").get<std::size_t>();
    m.report.collision_rate = j.at("collision_rate").get<double>();
    m.report.average_cost = j.at("average_cost").get<double>();
    m.report.infeasibility_rate = j.at("infeasibility_rate").get<double>();
    return m;
  } catch (const std::exception& e) {
    throw MalformedFileError(path.string(), 0, e.what());
  }
}

}  // namespace ecp
