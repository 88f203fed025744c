#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ecp/config.hpp"
#include "ecp/episode_io.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "ecp_unit_cfg";
  fs::create_directories(dir);
  return dir;
}

const char* kSynthetic = R"(# small synthetic scene
scenario_name = demo
scenario_source = synthetic
synthetic.bounds = -6 6 -6 6
synthetic.noise = 0.02
agent = linear 3 -4 0 0.5 bounce
agent = circular 1 1 2 0.3 0
start_x = -5
start_y = -5
goal_x = 4
goal_y = 4
t_max = 40
H = 4
N = 6
D = 2
M = 10
seed = 7
)";

ecp::EpisodeLog short_run() {
  const auto experiment = ecp::build_experiment(ecp::KeyValueConfig::parse(kSynthetic));
  return ecp::run_episode(experiment.episode(ecp::Controller::Ecp, 0));
}

}  // namespace

TEST_SUITE("config_io") {
  TEST_CASE("key value parsing") {
    auto c = ecp::KeyValueConfig::parse(kSynthetic);
    CHECK(c.get("scenario_name") == "demo");
    CHECK(c.get_all("agent").size() == 2);
    CHECK(c.number("goal_x", 0) == 4.0);
    CHECK(c.count("H", 0) == 4);
    CHECK(c.get_or("gamma", "0.03") == "0.03");
    c.set("gamma=0.05");
    CHECK(c.number("gamma", 0) == 0.05);
    c.set("gamma", "0.07");
    CHECK(c.number("gamma", 0) == 0.07);
  }

  TEST_CASE("config errors name the field") {
    auto field_of = [](const std::function<void()>& fn) -> std::string {
      try {
        fn();
      } catch (const ecp::ConfigError& e) {
        return e.field();
      }
      return "<none>";
    };
    CHECK(field_of([] { ecp::KeyValueConfig::parse("colour = red\n"); }) == "colour");
    CHECK(field_of([] { ecp::KeyValueConfig::parse("no equals sign\n"); }) == "config");
    CHECK(field_of([] { ecp::KeyValueConfig::parse("H = many\n").count("H", 1); }) == "H");
    auto with = [](const std::string& assignment) {
      auto c = ecp::KeyValueConfig::parse(kSynthetic);
      c.set(assignment);
      return c;
    };
    CHECK(field_of([&] { ecp::build_experiment(with("gamma=-0.1")); }) == "gamma");
    CHECK(field_of([&] { ecp::build_experiment(with("target_alpha=1.5")); }) == "target_alpha");
    CHECK(field_of([&] { ecp::build_experiment(with("repeat=0")); }) == "repeat");
    CHECK(field_of([&] { ecp::build_experiment(with("controller=pid")); }) == "controller");
    CHECK(field_of([&] { ecp::build_experiment(with("bounds=1 2 3")); }) == "bounds");
    CHECK(field_of([&] { ecp::build_experiment(with("agent=hover 1 1")); }) == "agent");
    CHECK(field_of([&] { ecp::build_experiment(with("D=4")); }) == "D");
    CHECK(field_of([&] { ecp::build_experiment(with("scenario_source=video")); }) == "scenario_source");
    auto missing = ecp::KeyValueConfig::parse("scenario_source = annotations\ndataset_path = no_such_file.txt\n");
    CHECK(field_of([&] { ecp::build_experiment(missing); }) == "dataset_path");
  }

  TEST_CASE("repeats advance the seed and the start frame") {
    auto c = ecp::KeyValueConfig::parse(kSynthetic);
    c.set("repeat=3");
    c.set("start_frame_stride=5");
    const auto ex = ecp::build_experiment(c);
    CHECK(ex.repeat == 3);
    for (std::size_t r = 0; r < 3; ++r) {
      const auto e = ex.episode(ecp::Controller::Acp, r);
      CHECK(e.seed == 7 + r);
      CHECK(e.start_frame == static_cast<ecp::Frame>(5 * r));
      CHECK(e.controller == ecp::Controller::Acp);
    }
    CHECK_FALSE(*ex.episode(ecp::Controller::Ecp, 0).scenario == *ex.episode(ecp::Controller::Ecp, 1).scenario);
    CHECK(ex.episode(ecp::Controller::Ecp, 0).safety.state_bounds.x_max == 6.0);
  }

  TEST_CASE("annotation datasets resolve relative to the config file") {
    const auto dir = scratch_dir();
    std::ofstream(dir / "scene.txt") << "0 1 0 0\n10 1 0.1 0\n20 1 0.2 0\n";
    std::ofstream(dir / "scene.cfg") << "scenario_source = annotations\ndataset_path = scene.txt\nt_max = 30\n";
    const auto ex = ecp::build_experiment(ecp::KeyValueConfig::parse_file(dir / "scene.cfg"));
    REQUIRE(ex.fixed_scenario);
    CHECK(ex.fixed_scenario->frame_count() == 3);
    const auto f = ecp::annotation_format(ecp::KeyValueConfig::parse("format.delimiter = comma\nformat.x_column = 5\n"));
    CHECK(f.delimiter == ecp::AnnotationFormat::Delimiter::Comma);
    CHECK(f.x_column == 5);
  }

  TEST_CASE("episode CSV round trip") {
    const auto log = short_run();
    REQUIRE_FALSE(log.steps.empty());
    const auto path = scratch_dir() / "episode.csv";
    {
      std::ofstream out(path);
      ecp::write_episode_csv(out, log);
    }
    const auto back = ecp::read_episode_csv(path);
    REQUIRE(back.size() == log.steps.size());
    for (std::size_t k = 0; k < back.size(); ++k) {
      const auto& a = log.steps[k];
      const auto& b = back[k];
      CHECK(a.step == b.step);
      CHECK(a.frame == b.frame);
      CHECK(a.state == b.state);
      CHECK(a.input == b.input);
      CHECK(a.feasible == b.feasible);
      CHECK(a.plan == b.plan);
      CHECK(a.plan_cost == b.plan_cost);
      CHECK(a.realized == b.realized);
      CHECK(a.min_clearance == b.min_clearance);
    }
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == ecp::kEpisodeCsvHeader);
  }

  TEST_CASE("radii CSV carries every resolved check") {
    const auto log = short_run();
    const auto path = scratch_dir() / "radii.csv";
    {
      std::ofstream out(path);
      ecp::write_radii_csv(out, log);
    }
    const auto back = ecp::read_resolved_checks(path);
    REQUIRE(back.size() == log.outcomes.size());
    std::map<std::tuple<ecp::Frame, std::size_t, ecp::PlanPrefix>, ecp::CheckOutcome> by_key;
    for (const auto& o : back) by_key[{o.issue_frame, o.horizon, o.prefix}] = o;
    for (const auto& o : log.outcomes) {
      const auto& b = by_key.at({o.issue_frame, o.horizon, o.prefix});
      CHECK(b.due_frame == o.due_frame);
      CHECK(b.radius == o.radius);
      CHECK(b.score == o.score);
      CHECK(b.covered == o.covered);
    }
  }

  TEST_CASE("metrics JSON round trip") {
    const auto log = short_run();
    const auto report = ecp::compute_metrics(log);
    const auto path = scratch_dir() / "metrics.json";
    {
      std::ofstream out(path);
      ecp::write_metrics_json(out, log, report);
    }
    const auto m = ecp::read_metrics_json(path);
    CHECK(m.controller == ecp::Controller::Ecp);
    CHECK(m.scenario == "demo");
    CHECK(m.seed == 7);
    CHECK(m.report.travel_time == report.travel_time);
    CHECK(m.report.average_cost == report.average_cost);
    CHECK(m.report.collision_rate == report.collision_rate);
    CHECK(m.report.infeasibility_rate == report.infeasibility_rate);
    // Metrics recomputed from the episode CSV match the report.
    const auto csv = scratch_dir() / "episode_m.csv";
    {
      std::ofstream out(csv);
      ecp::write_episode_csv(out, log);
    }
    ecp::EpisodeLog reread;
    reread.r_safe = log.r_safe;
    reread.steps = ecp::read_episode_csv(csv);
    const auto again = ecp::compute_metrics(reread);
    CHECK(again.average_cost == report.average_cost);
    CHECK(again.collision_rate == report.collision_rate);
  }

  TEST_CASE("format_double round trips") {
    for (double v : {0.1, -1e-300, 123456.789, 1.0 / 3.0}) CHECK(std::stod(ecp::format_double(v)) == v);
  }
}
