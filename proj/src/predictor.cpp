#include "ecp/predictor.hpp"

#include <fstream>
#include "json.hpp"
#include <optional>
#include <string>

#include "ecp/errors.hpp"

namespace ecp {

ConstantVelocityPredictor::ConstantVelocityPredictor(std::size_t horizon, double frame_period, Vec2 bias_per_step)
    : horizon_{horizon}, frame_period_{frame_period}, bias_{bias_per_step} {
  if (horizon == 0) throw std::invalid_argument("ConstantVelocityPredictor: horizon must be positive");
  if (!(frame_period > 0.0)) throw std::invalid_argument("ConstantVelocityPredictor: frame period must be positive");
}

PredictionSheet ConstantVelocityPredictor::predict(const History& history) const {
  PredictionSheet sheet;
  sheet.issued_at = history.frame_of_last;
  sheet.steps.resize(horizon_);
  if (history.window.empty()) return sheet;

  const ObstacleSet& last = history.last();
  const auto n = static_cast<std::ptrdiff_t>(history.window.size());
  for (const auto& [id, position] : last) {
    Vec2 velocity{};
    for (std::ptrdiff_t k = n - 2; k >= 0; --k) {
      if (auto earlier = history.window[static_cast<std::size_t>(k)].find(id)) {
        const double elapsed = static_cast<double>(n - 1 - k) * frame_period_;
        velocity = (1.0 / elapsed) * (position - *earlier);
        break;
      }
    }
    for (std::size_t i = 1; i <= horizon_; ++i) {
      const double steps = static_cast<double>(i);
      const Vec2 predicted{position.x + steps * frame_period_ * velocity.x + steps * bias_.x,
                           position.y + steps * frame_period_ * velocity.y + steps * bias_.y};
      sheet.steps[i - 1].insert(id, predicted);
    }
  }
  return sheet;
}

PrecomputedPredictor::PrecomputedPredictor(std::size_t horizon, std::map<Frame, PredictionSheet> sheets,
                                           std::map<Frame, std::vector<bool>> step_seen)
    : horizon_{horizon}, sheets_{std::move(sheets)}, step_seen_{std::move(step_seen)} {}

PredictionSheet PrecomputedPredictor::sheet_for(Frame frame) const {
  auto it = sheets_.find(frame);
  if (it == sheets_.end()) throw MissingPredictionError("no precomputed predictions for frame " + std::to_string(frame));
  // Obstacle-bearing frames must cover every step; marker-only frames are all-empty.
  const auto& seen = step_seen_.at(frame);
  bool any = false;
  for (bool s : seen) any = any || s;
  if (any) {
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i])
        throw MissingPredictionError("frame " + std::to_string(frame) + " is missing step " + std::to_string(i + 1));
    }
  }
  return it->second;
}

std::unique_ptr<PrecomputedPredictor> load_precomputed_predictions(const std::filesystem::path& path, std::size_t horizon) {
  std::ifstream in(path);
  if (!in) throw MalformedFileError(path.string(), 0, "cannot open prediction file");

  std::map<Frame, PredictionSheet> sheets;
  std::map<Frame, std::vector<bool>> seen;
  auto touch = [&](Frame frame) -> PredictionSheet& {
    auto [it, inserted] = sheets.try_emplace(frame);
    if (inserted) {
      it->second.issued_at = frame;
      it->second.steps.resize(horizon);
      seen[frame].assign(horizon, false);
    }
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw MalformedFileError(path.string(), line_no, std::string{"invalid JSON: "} + e.what());
    }
    try {
      if (!row.is_object() || !row.contains("issue_frame")) throw std::invalid_argument("missing issue_frame");
      const Frame frame = row.at("issue_frame").get<Frame>();
      PredictionSheet& sheet = touch(frame);
      if (row.size() == 1) continue;
      const auto step = row.at("step").get<std::int64_t>();
      if (step < 1 || static_cast<std::size_t>(step) > horizon)
        throw std::invalid_argument("step " + std::to_string(step) + " outside 1.." + std::to_string(horizon));
      const auto idx = static_cast<std::size_t>(step - 1);
      sheet.steps[idx].insert(row.at("obstacle_id").get<std::string>(),
                              Vec2{row.at("x").get<double>(), row.at("y").get<double>()});
      seen[frame][idx] = true;
    } catch (const nlohmann::json::exception& e) {
      throw MalformedFileError(path.string(), line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw MalformedFileError(path.string(), line_no, e.what());
    }
  }
  return std::make_unique<PrecomputedPredictor>(horizon, std::move(sheets), std::move(seen));
}

void save_predictions(const std::filesystem::path& path, std::span<const PredictionSheet> sheets) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write prediction file " + path.string());
  for (const PredictionSheet& sheet : sheets) {
    out << nlohmann::json{{"issue_frame", sheet.issued_at}}.dump() << '\n';
    for (std::size_t i = 1; i <= sheet.horizon(); ++i) {
      for (const auto& [id, p] : sheet.at(i)) {
        nlohmann::json row{{"issue_frame", sheet.issued_at}, {"step", i}, {"obstacle_id", id}, {"x", p.x}, {"y", p.y}};
        out << row.dump() << '\n';
      }
    }
  }
}

}  // namespace ecp
