#include "ecp/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ecp/errors.hpp"

namespace ecp {

ExtReal clearance_shortfall(const ExtReal& predicted_distance, const ExtReal& realized_distance) {
  if (predicted_distance.is_pos_inf() && realized_distance.is_pos_inf()) return ExtReal{0.0};
  return positive_part(predicted_distance - realized_distance);
}

ExtReal egocentric_score(Vec2 candidate, const ObstacleSet& predicted, const ObstacleSet& realized) {
  return clearance_shortfall(min_distance(candidate, predicted), min_distance(candidate, realized));
}

ExtReal obstacle_centric_score(const ObstacleSet& predicted, const ObstacleSet& realized) {
  double worst = 0.0;
  auto p = predicted.begin();
  auto r = realized.begin();
  while (p != predicted.end() && r != realized.end()) {
    if (p->id < r->id) {
      ++p;
    } else if (r->id < p->id) {
      ++r;
    } else {
      worst = std::max(worst, distance(p->position, r->position));
      ++p;
      ++r;
    }
  }
  return ExtReal{worst};
}

std::size_t quantile_rank(std::size_t m, double q) {
  const double md = static_cast<double>(m);
  auto k = static_cast<std::size_t>(std::clamp(std::ceil(q * md), 1.0, md));
  while (k > 1 && static_cast<double>(k - 1) / md >= q) --k;
  while (k < m && static_cast<double>(k) / md < q) ++k;
  return k;
}

ExtReal empirical_quantile(std::vector<ExtReal> scores, double q) {
  if (scores.empty()) throw std::domain_error("empirical_quantile: empty score multiset");
  if (std::isnan(q)) throw std::domain_error("empirical_quantile: q is NaN");
  if (q > 1.0) return ExtReal::pos_inf();
  if (q <= 0.0) return ExtReal::neg_inf();
  const std::size_t k = quantile_rank(scores.size(), q);
  auto nth = scores.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(scores.begin(), nth, scores.end(), [](const ExtReal& a, const ExtReal& b) { return a < b; });
  return *nth;
}

// ---------------------------------------------------------------------------

CalibrationWindow::CalibrationWindow(std::size_t capacity, std::size_t horizon) : capacity_{capacity}, horizon_{horizon} {
  if (capacity == 0) throw std::invalid_argument("CalibrationWindow: capacity must be positive");
  if (horizon == 0) throw std::invalid_argument("CalibrationWindow: horizon must be positive");
}

void CalibrationWindow::add_prediction(const PredictionSheet& sheet) {
  if (sheet.horizon() != horizon_) throw std::invalid_argument("CalibrationWindow: prediction sheet has the wrong horizon");
  if (!sheets_.empty() && sheet.issued_at <= sheets_.back().issued_at)
    throw ConsistencyError("CalibrationWindow: prediction sheets must arrive in increasing frame order");
  sheets_.push_back(sheet);
  while (sheets_.size() > horizon_) sheets_.pop_front();
}

void CalibrationWindow::observe(Frame frame, const ObstacleSet& realized) {
  if (!records_.empty() && frame <= records_.back().frame)
    throw ConsistencyError("CalibrationWindow: observations must arrive in increasing frame order");
  Record record{frame, realized, std::vector<std::optional<ObstacleSet>>(horizon_)};
  for (const PredictionSheet& sheet : sheets_) {
    const Frame lag = frame - sheet.issued_at;
    if (lag >= 1 && static_cast<std::size_t>(lag) <= horizon_) {
      record.predicted[static_cast<std::size_t>(lag - 1)] = sheet.at(static_cast<std::size_t>(lag));
    }
  }
  records_.push_back(std::move(record));
  while (records_.size() > capacity_) records_.pop_front();
}

std::size_t CalibrationWindow::eligible(std::size_t i) const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [i](const Record& r) { return r.predicted.at(i - 1).has_value(); }));
}

namespace {

template <typename ScoreFn>
ExtReal calibrated_radius(std::size_t horizon, const CalibrationWindow& window, double alpha, ScoreFn&& score) {
  if (horizon < 1 || horizon > window.horizon()) throw std::out_of_range("radius: horizon outside 1..N");
  std::vector<ExtReal> scores;
  scores.reserve(window.records().size());
  for (const auto& record : window.records()) {
    const auto& predicted = record.predicted[horizon - 1];
    if (predicted) scores.push_back(score(*predicted, record.realized));
  }
  if (scores.empty())
    throw WarmupError("no calibration record holds a " + std::to_string(horizon) + "-step prediction yet");
  if (alpha <= 0.0) return ExtReal::pos_inf();
  return empirical_quantile(std::move(scores), 1.0 - alpha);
}

}  // namespace

ExtReal egocentric_radius(Vec2 candidate, std::size_t horizon, const CalibrationWindow& window, double alpha) {
  return calibrated_radius(horizon, window, alpha, [candidate](const ObstacleSet& predicted, const ObstacleSet& realized) {
    return egocentric_score(candidate, predicted, realized);
  });
}

ExtReal obstacle_centric_radius(std::size_t horizon, const CalibrationWindow& window, double alpha) {
  return calibrated_radius(horizon, window, alpha, [](const ObstacleSet& predicted, const ObstacleSet& realized) {
    return obstacle_centric_score(predicted, realized);
  });
}

// ---------------------------------------------------------------------------

PlanPrefix::PlanPrefix(std::initializer_list<std::uint8_t> choices) {
  for (auto c : choices) push_back(c);
}

void PlanPrefix::push_back(std::uint8_t choice) {
  if (length_ == kMaxLength) throw std::length_error("PlanPrefix: too many epochs");
  choices_[length_++] = choice;
}

PlanPrefix PlanPrefix::truncated(std::size_t length) const {
  if (length > length_) throw std::out_of_range("PlanPrefix::truncated: longer than prefix");
  PlanPrefix out = *this;
  std::fill(out.choices_.begin() + static_cast<std::ptrdiff_t>(length), out.choices_.end(), std::uint8_t{0});
  out.length_ = static_cast<std::uint8_t>(length);
  return out;
}

std::string PlanPrefix::to_string() const {
  if (length_ == 0) return "*";
  std::string out;
  for (std::size_t k = 0; k < length_; ++k) {
    if (k) out += '-';
    out += std::to_string(static_cast<int>(choices_[k]) + 1);
  }
  return out;
}

PlanPrefix PlanPrefix::parse(const std::string& text) {
  PlanPrefix out;
  if (text == "*") return out;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, '-')) {
    const int value = std::stoi(token);
    if (value < 1 || value > 256) throw std::invalid_argument("PlanPrefix::parse: index out of range in '" + text + "'");
    out.push_back(static_cast<std::uint8_t>(value - 1));
  }
  return out;
}

double acp_update(double alpha, double gamma, double target, bool miscovered) {
  return alpha + gamma * (target - (miscovered ? 1.0 : 0.0));
}

namespace {

void validate_acp(double gamma, double target) {
  if (!(gamma > 0.0)) throw std::invalid_argument("ACP step size gamma must be positive");
  if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("target alpha must lie in (0, 1)");
}

}  // namespace

AcpLedger::AcpLedger(std::size_t horizon, double gamma, double target_alpha, std::optional<double> initial_alpha)
    : horizon_{horizon}, gamma_{gamma}, target_{target_alpha}, initial_{initial_alpha.value_or(target_alpha)} {
  validate_acp(gamma, target_alpha);
  if (horizon == 0) throw std::invalid_argument("AcpLedger: horizon must be positive");
}

double AcpLedger::alpha(const PlanPrefix& prefix, std::size_t horizon) const {
  auto it = alpha_.find(LedgerKey{prefix, horizon});
  return it == alpha_.end() ? initial_ : it->second;
}

void AcpLedger::stage_pending(const PlanPrefix& prefix, std::size_t horizon, Vec2 candidate_position,
                              ExtReal predicted_distance, ExtReal radius, Frame frame) {
  stage(PendingCheck{frame, frame + static_cast<Frame>(horizon), horizon, prefix, candidate_position, predicted_distance,
                     radius});
}

void AcpLedger::stage(const PendingCheck& check) {
  if (check.horizon < 1 || check.horizon > horizon_)
    throw ConsistencyError("AcpLedger: horizon " + std::to_string(check.horizon) + " outside 1.." +
                           std::to_string(horizon_));
  if (check.due_frame != check.issue_frame + static_cast<Frame>(check.horizon))
    throw ConsistencyError("AcpLedger: due frame must equal issue frame plus horizon");
  DueBucket& bucket = pending_[check.due_frame];
  if (!bucket.keys.insert(LedgerKey{check.prefix, check.horizon}).second)
    throw ConsistencyError("AcpLedger: check for prefix " + check.prefix.to_string() + ", horizon " +
                           std::to_string(check.horizon) + " already staged at frame " +
                           std::to_string(check.issue_frame));
  bucket.checks.push_back(check);
}

std::size_t AcpLedger::pending_count() const {
  std::size_t n = 0;
  for (const auto& [due, bucket] : pending_) n += bucket.checks.size();
  return n;
}

std::vector<PendingCheck> AcpLedger::pending() const {
  std::vector<PendingCheck> out;
  for (const auto& [due, bucket] : pending_) out.insert(out.end(), bucket.checks.begin(), bucket.checks.end());
  return out;
}

std::vector<CheckOutcome> AcpLedger::record_frame(const ObstacleSet& realized, Frame frame) {
  if (!pending_.empty() && pending_.begin()->first < frame)
    throw ConsistencyError("AcpLedger: check due at frame " + std::to_string(pending_.begin()->first) +
                           " was never resolved (now at frame " + std::to_string(frame) + ")");
  std::vector<CheckOutcome> outcomes;
  auto due = pending_.find(frame);
  if (due == pending_.end()) return outcomes;
  outcomes.reserve(due->second.checks.size());
  for (const PendingCheck& check : due->second.checks) {
    const ExtReal score = clearance_shortfall(check.predicted_distance, min_distance(check.candidate_position, realized));
    const bool covered = score <= check.radius;
    const LedgerKey key{check.prefix, check.horizon};
    auto [it, inserted] = alpha_.try_emplace(key, initial_);
    it->second = acp_update(it->second, gamma_, target_, !covered);
    auto& count = coverage_[key];
    ++count.resolved;
    count.covered += covered ? 1 : 0;
    outcomes.push_back(CheckOutcome{check.issue_frame, check.due_frame, check.horizon, check.prefix, check.radius, score, covered});
  }
  pending_.erase(due);
  return outcomes;
}

ObstacleAcpState::ObstacleAcpState(std::size_t horizon, double gamma, double target_alpha, std::optional<double> initial_alpha)
    : gamma_{gamma}, target_{target_alpha}, alpha_(horizon, initial_alpha.value_or(target_alpha)) {
  validate_acp(gamma, target_alpha);
  if (horizon == 0) throw std::invalid_argument("ObstacleAcpState: horizon must be positive");
}

void ObstacleAcpState::stage(Pending check) {
  if (check.horizon < 1 || check.horizon > alpha_.size())
    throw ConsistencyError("ObstacleAcpState: horizon outside 1..N");
  if (check.due_frame != check.issue_frame + static_cast<Frame>(check.horizon))
    throw ConsistencyError("ObstacleAcpState: due frame must equal issue frame plus horizon");
  for (const Pending& p : pending_) {
    if (p.issue_frame == check.issue_frame && p.horizon == check.horizon)
      throw ConsistencyError("ObstacleAcpState: horizon " + std::to_string(check.horizon) + " already staged at frame " +
                             std::to_string(check.issue_frame));
  }
  pending_.push_back(std::move(check));
}

std::vector<CheckOutcome> ObstacleAcpState::record_frame(const ObstacleSet& realized, Frame frame) {
  std::vector<CheckOutcome> outcomes;
  std::vector<Pending> keep;
  for (Pending& check : pending_) {
    if (check.due_frame > frame) {
      keep.push_back(std::move(check));
      continue;
    }
    if (check.due_frame < frame)
      throw ConsistencyError("ObstacleAcpState: check due at frame " + std::to_string(check.due_frame) +
                             " was never resolved");
    const ExtReal score = obstacle_centric_score(check.predicted, realized);
    const bool covered = score <= check.radius;
    double& a = alpha_[check.horizon - 1];
    a = acp_update(a, gamma_, target_, !covered);
    auto& count = coverage_[LedgerKey{PlanPrefix{}, check.horizon}];
    ++count.resolved;
    count.covered += covered ? 1 : 0;
    outcomes.push_back(CheckOutcome{check.issue_frame, check.due_frame, check.horizon, PlanPrefix{}, check.radius, score, covered});
  }
  pending_ = std::move(keep);
  return outcomes;
}

}  // namespace ecp
