#pragma once

#include <filesystem>
#include <iosfwd>

#include "ecp/sim.hpp"

namespace ecp {

/// Column order of the episode CSV.
inline constexpr const char* kEpisodeCsvHeader =
    "step,frame,x,y,theta,v,omega,feasible,plan,plan_cost,min_clearance,collision,obstacles";

/// Column order of the radii CSV: one row per staged confidence-set check.
inline constexpr const char* kRadiiCsvHeader = "issue_frame,horizon,prefix,radius,due_frame,score,covered";

void write_episode_csv(std::ostream& out, const EpisodeLog& log);
void write_radii_csv(std::ostream& out, const EpisodeLog& log);
void write_metrics_json(std::ostream& out, const EpisodeLog& log, const MetricsReport& report);

/// Reads an episode CSV back into step records (radii are not part of it).
std::vector<StepRecord> read_episode_csv(const std::filesystem::path& path);
/// Resolved checks from a radii CSV; rows still pending are skipped.
std::vector<CheckOutcome> read_resolved_checks(const std::filesystem::path& path);

struct MetricsFile {
  Controller controller = Controller::Ecp;
  std::string scenario;
  std::uint64_t seed = 0;
  bool arrived = false;
  MetricsReport report;
};

MetricsFile read_metrics_json(const std::filesystem::path& path);

/// Writes a full-precision decimal; round-trips through std::stod.
std::string format_double(double v);

}  // namespace ecp
