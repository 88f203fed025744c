#include "ecp/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ecp/errors.hpp"
#include "json.hpp"

namespace ecp {

std::size_t ScenarioTimeline::obstacle_count() const {
  std::set<ObstacleId> ids;
  for (const auto& frame : frames)
    for (const auto& e : frame) ids.insert(e.id);
  return ids.size();
}

AnnotationFormat::Delimiter parse_delimiter(const std::string& name) {
  if (name == "whitespace" || name == "space") return AnnotationFormat::Delimiter::Whitespace;
  if (name == "tab") return AnnotationFormat::Delimiter::Tab;
  if (name == "comma") return AnnotationFormat::Delimiter::Comma;
  throw std::invalid_argument("unknown delimiter '" + name + "' (expected whitespace, tab or comma)");
}

namespace {

std::vector<std::string> split_row(const std::string& line, AnnotationFormat::Delimiter delimiter) {
  std::vector<std::string> fields;
  if (delimiter == AnnotationFormat::Delimiter::Whitespace) {
    std::istringstream in(line);
    std::string token;
    while (in >> token) fields.push_back(token);
    return fields;
  }
  const char sep = delimiter == AnnotationFormat::Delimiter::Tab ? '\t' : ',';
  std::string token;
  std::istringstream in(line);
  while (std::getline(in, token, sep)) {
    const auto first = token.find_first_not_of(" \r");
    const auto last = token.find_last_not_of(" \r");
    fields.push_back(first == std::string::npos ? std::string{} : token.substr(first, last - first + 1));
  }
  return fields;
}

double parse_number(const std::string& field) {
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size() || !std::isfinite(v)) throw std::invalid_argument("not a finite number: '" + field + "'");
  return v;
}

struct Sample {
  double frame;
  Vec2 position;
};

Bounds bounding_box(const std::vector<ObstacleSet>& frames, double padding) {
  Bounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  bool any = false;
  for (const auto& f : frames) {
    for (const Vec2& p : f.positions()) {
      b.x_min = std::min(b.x_min, p.x);
      b.x_max = std::max(b.x_max, p.x);
      b.y_min = std::min(b.y_min, p.y);
      b.y_max = std::max(b.y_max, p.y);
      any = true;
    }
  }
  if (!any) b = Bounds{0, 0, 0, 0};
  return b.padded(padding);
}

std::string format_id(double pedestrian) {
  std::ostringstream os;
  if (pedestrian == std::floor(pedestrian) && std::abs(pedestrian) < 1e15) {
    os << static_cast<long long>(pedestrian);
  } else {
    os.precision(17);
    os << pedestrian;
  }
  return os.str();
}

}  // namespace

ScenarioTimeline load_annotations(const std::filesystem::path& path, const AnnotationFormat& format, std::string name) {
  if (!(format.native_stride > 0.0)) throw std::invalid_argument("annotation format: native_stride must be positive");
  std::ifstream in(path);
  if (!in) throw MalformedFileError(path.string(), 0, "cannot open annotation file");

  const std::size_t needed =
      std::max({format.frame_column, format.id_column, format.x_column, format.y_column}) + 1;
  std::map<double, std::vector<Sample>> tracks;
  std::map<std::pair<double, double>, std::size_t> seen_at;
  std::string line;
  std::size_t line_no = 0;
  double origin = std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto fields = split_row(line, format.delimiter);
    if (fields.size() < needed)
      throw MalformedFileError(path.string(), line_no,
                               "expected at least " + std::to_string(needed) + " columns, got " + std::to_string(fields.size()));
    double frame = 0, id = 0, x = 0, y = 0;
    try {
      frame = parse_number(fields[format.frame_column]);
      id = parse_number(fields[format.id_column]);
      x = parse_number(fields[format.x_column]);
      y = parse_number(fields[format.y_column]);
    } catch (const std::exception& e) {
      throw MalformedFileError(path.string(), line_no, e.what());
    }
    if (auto [it, inserted] = seen_at.try_emplace({id, frame}, line_no); !inserted)
      throw MalformedFileError(path.string(), line_no,
                               "pedestrian " + format_id(id) + " already annotated at this frame on line " +
                                   std::to_string(it->second));
    tracks[id].push_back({frame, {x, y}});
    origin = std::min(origin, frame);
  }
  if (tracks.empty()) throw MalformedFileError(path.string(), 0, "no annotation rows");

  ScenarioTimeline timeline;
  timeline.name = name.empty() ? path.stem().string() : std::move(name);
  timeline.frame_period = format.frame_period;

  const double stride = format.native_stride;
  const double split_after = static_cast<double>(format.max_gap + 1) * stride;
  auto grid_of = [&](double frame) { return (frame - origin) / stride; };

  for (auto& [pedestrian, samples] : tracks) {
    std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.frame < b.frame; });
    std::size_t segment = 0;
    std::size_t seg_begin = 0;
    for (std::size_t k = 1; k <= samples.size(); ++k) {
      if (k < samples.size() && samples[k].frame - samples[k - 1].frame <= split_after) continue;
      // samples[seg_begin, k) form one segment.
      const ObstacleId id = format_id(pedestrian) + "#" + std::to_string(segment++);
      const auto g_begin = static_cast<std::size_t>(std::ceil(grid_of(samples[seg_begin].frame) - 1e-9));
      const auto g_end = static_cast<std::size_t>(std::floor(grid_of(samples[k - 1].frame) + 1e-9));
      std::size_t j = seg_begin;
      for (std::size_t g = g_begin; g <= g_end; ++g) {
        const double f = origin + static_cast<double>(g) * stride;
        while (j + 1 < k && samples[j + 1].frame <= f + 1e-9) ++j;
        Vec2 p;
        if (std::abs(samples[j].frame - f) <= 1e-9) {
          p = samples[j].position;
        } else {
          const Sample& a = samples[j];
          const Sample& b = samples[j + 1];
          const double w = (f - a.frame) / (b.frame - a.frame);
          p = {a.position.x + w * (b.position.x - a.position.x), a.position.y + w * (b.position.y - a.position.y)};
        }
        if (timeline.frames.size() <= g) timeline.frames.resize(g + 1);
        timeline.frames[g].insert(id, p);
      }
      seg_begin = k;
    }
  }
  if (timeline.frames.empty()) timeline.frames.resize(1);
  timeline.scene_bounds = bounding_box(timeline.frames, format.bounds_padding);
  return timeline;
}

void save_timeline(const std::filesystem::path& path, const ScenarioTimeline& timeline) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write timeline " + path.string());
  const Bounds& b = timeline.scene_bounds;
  out << nlohmann::json{{"scenario", timeline.name},
                        {"frame_period", timeline.frame_period},
                        {"frame_count", timeline.frames.size()},
                        {"bounds", {b.x_min, b.x_max, b.y_min, b.y_max}}}
             .dump()
      << '\n';
  for (std::size_t f = 0; f < timeline.frames.size(); ++f) {
    for (const auto& [id, p] : timeline.frames[f])
      out << nlohmann::json{{"frame", f}, {"id", id}, {"x", p.x}, {"y", p.y}}.dump() << '\n';
  }
}

ScenarioTimeline load_timeline(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedFileError(path.string(), 0, "cannot open timeline");
  ScenarioTimeline timeline;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto row = nlohmann::json::parse(line);
      if (!have_header) {
        timeline.name = row.at("scenario").get<std::string>();
        timeline.frame_period = row.at("frame_period").get<double>();
        timeline.frames.resize(row.at("frame_count").get<std::size_t>());
        const auto& b = row.at("bounds");
        timeline.scene_bounds = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()};
        have_header = true;
        continue;
      }
      const auto frame = row.at("frame").get<std::size_t>();
      if (frame >= timeline.frames.size()) throw std::out_of_range("frame beyond frame_count");
      timeline.frames[frame].insert(row.at("id").get<std::string>(), {row.at("x").get<double>(), row.at("y").get<double>()});
    } catch (const std::exception& e) {
      throw MalformedFileError(path.string(), line_no, e.what());
    }
  }
  if (!have_header) throw MalformedFileError(path.string(), 0, "empty timeline file");
  return timeline;
}

AgentSpec parse_agent(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  AgentSpec agent;
  auto number = [&](const char* what) {
    double v;
    if (!(in >> v)) throw std::invalid_argument("agent '" + text + "': expected " + what);
    return v;
  };
  if (kind == "linear") {
    agent.kind = AgentSpec::Kind::Linear;
    agent.start = {number("x"), number("y")};
    agent.velocity = {number("vx"), number("vy")};
    std::string word;
    while (in >> word) {
      if (word == "bounce") {
        agent.bounce = true;
      } else if (word == "jump") {
        const double frame = number("jump frame");
        agent.jumps.push_back({static_cast<Frame>(frame), {number("jump vx"), number("jump vy")}});
      } else {
        throw std::invalid_argument("agent '" + text + "': unexpected '" + word + "'");
      }
    }
  } else if (kind == "circular") {
    agent.kind = AgentSpec::Kind::Circular;
    agent.center = {number("cx"), number("cy")};
    agent.radius = number("radius");
    agent.angular_speed = number("omega");
    agent.phase = number("phase");
  } else if (kind == "stationary") {
    agent.kind = AgentSpec::Kind::Stationary;
    agent.start = {number("x"), number("y")};
  } else {
    throw std::invalid_argument("agent '" + text + "': unknown kind '" + kind + "'");
  }
  std::string rest;
  if (in >> rest) throw std::invalid_argument("agent '" + text + "': trailing '" + rest + "'");
  return agent;
}

namespace {

std::vector<Vec2> agent_track(const AgentSpec& agent, std::size_t frames, double h, const std::optional<Bounds>& bounds) {
  std::vector<Vec2> track;
  track.reserve(frames);
  switch (agent.kind) {
    case AgentSpec::Kind::Stationary:
      track.assign(frames, agent.start);
      break;
    case AgentSpec::Kind::Circular:
      for (std::size_t t = 0; t < frames; ++t) {
        const double angle = agent.phase + agent.angular_speed * h * static_cast<double>(t);
        track.push_back({agent.center.x + agent.radius * std::cos(angle), agent.center.y + agent.radius * std::sin(angle)});
      }
      break;
    case AgentSpec::Kind::Linear: {
      Vec2 p = agent.start;
      Vec2 v = agent.velocity;
      for (std::size_t t = 0; t < frames; ++t) {
        for (const auto& jump : agent.jumps)
          if (jump.frame == static_cast<Frame>(t)) v = jump.velocity;
        track.push_back(p);
        p = p + h * v;
        if (agent.bounce && bounds) {
          if (p.x < bounds->x_min) { p.x = 2 * bounds->x_min - p.x; v.x = -v.x; }
          if (p.x > bounds->x_max) { p.x = 2 * bounds->x_max - p.x; v.x = -v.x; }
          if (p.y < bounds->y_min) { p.y = 2 * bounds->y_min - p.y; v.y = -v.y; }
          if (p.y > bounds->y_max) { p.y = 2 * bounds->y_max - p.y; v.y = -v.y; }
        }
      }
      break;
    }
  }
  return track;
}

}  // namespace

ScenarioTimeline synthetic_scenario(const SyntheticSpec& spec) {
  ScenarioTimeline timeline;
  timeline.name = spec.name;
  timeline.frame_period = spec.frame_period;
  timeline.frames.resize(spec.frames);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t k = 0; k < spec.agents.size(); ++k) {
    const auto track = agent_track(spec.agents[k], spec.frames, spec.frame_period, spec.bounds);
    const ObstacleId id = "a" + std::to_string(k);
    for (std::size_t t = 0; t < spec.frames; ++t) {
      Vec2 p = track[t];
      if (spec.position_noise > 0.0) p = p + Vec2{spec.position_noise * noise(rng), spec.position_noise * noise(rng)};
      timeline.frames[t].insert(id, p);
    }
  }
  timeline.scene_bounds = spec.bounds ? *spec.bounds : bounding_box(timeline.frames, 1.0);
  return timeline;
}

}  // namespace ecp
