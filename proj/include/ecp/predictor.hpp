#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "ecp/geometry.hpp"

namespace ecp {

using Frame = std::int64_t;

/// The last H observed obstacle sets, oldest first.
struct History {
  std::vector<ObstacleSet> window;
  Frame frame_of_last = 0;

  const ObstacleSet& last() const { return window.back(); }
};

/// N-step forecast issued at one frame; steps[i - 1] holds the i-step prediction.
struct PredictionSheet {
  std::vector<ObstacleSet> steps;
  Frame issued_at = 0;

  std::size_t horizon() const { return steps.size(); }
  const ObstacleSet& at(std::size_t i) const { return steps.at(i - 1); }

  friend bool operator==(const PredictionSheet&, const PredictionSheet&) = default;
};

class Predictor {
 public:
  virtual ~Predictor() = default;
  /// Throws MissingPredictionError if the predictor cannot serve this history.
  virtual PredictionSheet predict(const History& history) const = 0;
  virtual std::size_t horizon() const = 0;
};

/// Linear extrapolation from each obstacle's two most recent sightings.
///
/// An optional per-step bias is added to every prediction (i * bias at step
/// i) to emulate a systematically wrong forecaster in experiments.
class ConstantVelocityPredictor final : public Predictor {
 public:
  ConstantVelocityPredictor(std::size_t horizon, double frame_period, Vec2 bias_per_step = {});

  PredictionSheet predict(const History& history) const override;
  std::size_t horizon() const override { return horizon_; }

 private:
  std::size_t horizon_;
  double frame_period_;
  Vec2 bias_;
};

/// Serves sheets loaded from a file of externally computed predictions.
class PrecomputedPredictor final : public Predictor {
 public:
  PrecomputedPredictor(std::size_t horizon, std::map<Frame, PredictionSheet> sheets, std::map<Frame, std::vector<bool>> step_seen);

  PredictionSheet predict(const History& history) const override { return sheet_for(history.frame_of_last); }
  std::size_t horizon() const override { return horizon_; }

  /// Throws MissingPredictionError when the frame or one of its steps is absent.
  PredictionSheet sheet_for(Frame frame) const;
  std::size_t frame_count() const { return sheets_.size(); }

 private:
  std::size_t horizon_;
  std::map<Frame, PredictionSheet> sheets_;
  std::map<Frame, std::vector<bool>> step_seen_;
};

/// Reads the JSON-lines prediction format.
///
/// Each line is an object with keys issue_frame (int), step (int, 1..N),
/// obstacle_id (string), x, y (float). A line holding only issue_frame
/// declares a frame whose predicted sets are all empty.
std::unique_ptr<PrecomputedPredictor> load_precomputed_predictions(const std::filesystem::path& path, std::size_t horizon);

/// Writes sheets in the format read by load_precomputed_predictions.
void save_predictions(const std::filesystem::path& path, std::span<const PredictionSheet> sheets);

}  // namespace ecp
