#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "ecp/ext_real.hpp"
#include "ecp/geometry.hpp"
#include "ecp/predictor.hpp"

namespace ecp {

// ---------------------------------------------------------------------------
// Scores and quantiles
// ---------------------------------------------------------------------------

/// [d_pred - d_real]_+ with the empty-set conventions: both infinite gives 0,
/// an infinite predicted distance against a finite realized one gives +inf.
ExtReal clearance_shortfall(const ExtReal& predicted_distance, const ExtReal& realized_distance);

/// How much closer the realized obstacles are to `candidate` than predicted.
ExtReal egocentric_score(Vec2 candidate, const ObstacleSet& predicted, const ObstacleSet& realized);

/// Largest per-id position error over ids present in both sets; 0 if none match.
ExtReal obstacle_centric_score(const ObstacleSet& predicted, const ObstacleSet& realized);

/// Smallest k in 1..m with k/m >= q, for 0 < q <= 1.
std::size_t quantile_rank(std::size_t m, double q);

/// inf{s : F(s) >= q} of the empirical CDF. q > 1 gives +inf, q <= 0 gives -inf.
/// Throws std::domain_error on an empty multiset.
ExtReal empirical_quantile(std::vector<ExtReal> scores, double q);

// ---------------------------------------------------------------------------
// Calibration data
// ---------------------------------------------------------------------------

/// Sliding window of the most recent M (realized, predicted-per-horizon) pairs.
class CalibrationWindow {
 public:
  struct Record {
    Frame frame = 0;
    ObstacleSet realized;
    /// predicted[i - 1] is the set predicted for this frame i steps earlier.
    std::vector<std::optional<ObstacleSet>> predicted;
  };

  CalibrationWindow(std::size_t capacity, std::size_t horizon);

  /// Archives a sheet so later observations can be paired with it.
  void add_prediction(const PredictionSheet& sheet);
  /// Appends the record for `frame`. Frames must be strictly increasing.
  void observe(Frame frame, const ObstacleSet& realized);

  std::size_t capacity() const { return capacity_; }
  std::size_t horizon() const { return horizon_; }
  const std::deque<Record>& records() const { return records_; }
  /// Number of records holding an i-step prediction.
  std::size_t eligible(std::size_t i) const;

 private:
  std::size_t capacity_;
  std::size_t horizon_;
  std::deque<Record> records_;
  std::deque<PredictionSheet> sheets_;
};

/// Egocentric radius R for a candidate position at horizon i. Throws WarmupError
/// when no record holds an i-step prediction; alpha <= 0 yields +inf.
ExtReal egocentric_radius(Vec2 candidate, std::size_t horizon, const CalibrationWindow& window, double alpha);

/// Obstacle-centric radius shared by every candidate at horizon i.
ExtReal obstacle_centric_radius(std::size_t horizon, const CalibrationWindow& window, double alpha);

// ---------------------------------------------------------------------------
// Adaptive miscoverage tracking
// ---------------------------------------------------------------------------

/// Leading epoch choices of a plan (0-based catalog indices).
class PlanPrefix {
 public:
  static constexpr std::size_t kMaxLength = 16;

  PlanPrefix() = default;
  PlanPrefix(std::initializer_list<std::uint8_t> choices);

  std::size_t size() const { return length_; }
  std::uint8_t operator[](std::size_t k) const { return choices_[k]; }
  void push_back(std::uint8_t choice);
  PlanPrefix truncated(std::size_t length) const;

  /// 1-based indices joined by '-', or "*" for the empty prefix.
  std::string to_string() const;
  static PlanPrefix parse(const std::string& text);

  friend auto operator<=>(const PlanPrefix&, const PlanPrefix&) = default;

 private:
  std::array<std::uint8_t, kMaxLength> choices_{};
  std::uint8_t length_ = 0;
};

struct LedgerKey {
  PlanPrefix prefix;
  std::size_t horizon = 0;

  friend auto operator<=>(const LedgerKey&, const LedgerKey&) = default;
};

struct LedgerKeyHash {
  std::size_t operator()(const LedgerKey& key) const noexcept {
    std::size_t h = key.horizon * 0x9e3779b97f4a7c15ULL;
    for (std::size_t k = 0; k < key.prefix.size(); ++k) h = (h ^ key.prefix[k]) * 0x100000001b3ULL;
    return h;
  }
};

/// Deferred membership test of a confidence set, resolved when the frame it
/// was issued for is observed.
struct PendingCheck {
  Frame issue_frame = 0;
  Frame due_frame = 0;
  std::size_t horizon = 0;
  PlanPrefix prefix;
  Vec2 candidate_position;
  ExtReal predicted_distance;
  ExtReal radius;
};

struct CheckOutcome {
  Frame issue_frame = 0;
  Frame due_frame = 0;
  std::size_t horizon = 0;
  PlanPrefix prefix;
  ExtReal radius;
  ExtReal score;
  bool covered = false;
};

struct CoverageCount {
  std::uint64_t resolved = 0;
  std::uint64_t covered = 0;
};

/// alpha + gamma * (target - 1[miscovered])
double acp_update(double alpha, double gamma, double target, bool miscovered);

/// Per-(plan prefix, horizon) miscoverage levels for the egocentric path.
class AcpLedger {
 public:
  /// initial_alpha defaults to target_alpha when omitted.
  AcpLedger(std::size_t horizon, double gamma, double target_alpha, std::optional<double> initial_alpha = std::nullopt);

  double alpha(const PlanPrefix& prefix, std::size_t horizon) const;
  double gamma() const { return gamma_; }
  double target_alpha() const { return target_; }
  std::size_t horizon() const { return horizon_; }

  /// Throws ConsistencyError on a duplicate (prefix, horizon, frame) or a
  /// horizon outside 1..N.
  void stage_pending(const PlanPrefix& prefix, std::size_t horizon, Vec2 candidate_position,
                     ExtReal predicted_distance, ExtReal radius, Frame frame);
  void stage(const PendingCheck& check);

  /// Resolves every check due at `frame` and applies the ACP update.
  std::vector<CheckOutcome> record_frame(const ObstacleSet& realized, Frame frame);

  /// Unresolved checks in due-frame order.
  std::vector<PendingCheck> pending() const;
  std::size_t pending_count() const;
  /// Distinct due frames among pending checks.
  std::size_t pending_depth() const { return pending_.size(); }
  const std::map<LedgerKey, double>& alphas() const { return alpha_; }
  const std::map<LedgerKey, CoverageCount>& coverage() const { return coverage_; }

 private:
  std::size_t horizon_;
  double gamma_;
  double target_;
  double initial_;
  std::map<LedgerKey, double> alpha_;
  std::map<LedgerKey, CoverageCount> coverage_;
  struct DueBucket {
    std::vector<PendingCheck> checks;
    std::unordered_set<LedgerKey, LedgerKeyHash> keys;
  };
  std::map<Frame, DueBucket> pending_;  // keyed by due frame
};

/// Per-horizon miscoverage levels for the obstacle-centric baseline.
class ObstacleAcpState {
 public:
  struct Pending {
    Frame issue_frame = 0;
    Frame due_frame = 0;
    std::size_t horizon = 0;
    ObstacleSet predicted;
    ExtReal radius;
  };

  ObstacleAcpState(std::size_t horizon, double gamma, double target_alpha, std::optional<double> initial_alpha = std::nullopt);

  double alpha(std::size_t horizon) const { return alpha_.at(horizon - 1); }
  double gamma() const { return gamma_; }
  double target_alpha() const { return target_; }
  std::size_t horizon() const { return alpha_.size(); }

  void stage(Pending check);
  std::vector<CheckOutcome> record_frame(const ObstacleSet& realized, Frame frame);

  const std::vector<Pending>& pending() const { return pending_; }
  /// Coverage counts keyed by horizon (prefix left empty).
  const std::map<LedgerKey, CoverageCount>& coverage() const { return coverage_; }

 private:
  double gamma_;
  double target_;
  std::vector<double> alpha_;
  std::map<LedgerKey, CoverageCount> coverage_;
  std::vector<Pending> pending_;
};

}  // namespace ecp
