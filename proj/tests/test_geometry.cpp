#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ecp/geometry.hpp"
#include "oracles.hpp"

using ecp::ExtReal;
using ecp::ObstacleSet;
using ecp::Vec2;

namespace {

ObstacleSet make_set(std::initializer_list<std::pair<const char*, Vec2>> entries) {
  ObstacleSet s;
  for (const auto& [id, p] : entries) s.insert(id, p);
  return s;
}

ObstacleSet random_set(std::mt19937_64& rng, std::size_t n, const char* prefix = "o") {
  std::uniform_real_distribution<double> pos(-10.0, 10.0);
  ObstacleSet s;
  for (std::size_t k = 0; k < n; ++k) s.insert(prefix + std::to_string(k), {pos(rng), pos(rng)});
  return s;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("obstacle set keeps id order and rejects duplicates") {
    ObstacleSet s;
    s.insert("b", {1, 1});
    s.insert("a", {2, 2});
    CHECK(s.entries().front().id == "a");
    CHECK(s.positions()[0] == Vec2{2, 2});
    CHECK_THROWS_AS(s.insert("a", {0, 0}), std::invalid_argument);
    s.upsert("a", {5, 5});
    CHECK(*s.find("a") == Vec2{5, 5});
    CHECK_FALSE(s.find("zz").has_value());
    CHECK(s.size() == 2);
  }

  TEST_CASE("min distance examples") {
    CHECK(ecp::min_distance({0, 0}, make_set({{"a", {3, 4}}, {"b", {6, 8}}})) == ExtReal{5.0});
    CHECK(ecp::min_distance({0, 0}, ObstacleSet{}).is_pos_inf());
    CHECK(ecp::min_distance({1, 1}, make_set({{"a", {1, 1}}})) == ExtReal{0.0});
  }

  TEST_CASE("min distance over a union is the smaller of the parts") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> pos(-10.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = random_set(rng, 1 + trial % 7, "a");
      const auto b = random_set(rng, 1 + trial % 5, "b");
      ObstacleSet u = a;
      for (const auto& e : b) u.insert(e.id, e.position);
      const Vec2 x{pos(rng), pos(rng)};
      const ExtReal da = ecp::min_distance(x, a), db = ecp::min_distance(x, b);
      CHECK(ecp::min_distance(x, u) == (da < db ? da : db));
    }
  }

  TEST_CASE("min distance is 1-Lipschitz in the query point") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> pos(-10.0, 10.0);
    for (int trial = 0; trial < 300; ++trial) {
      const auto s = random_set(rng, 6);
      const Vec2 x{pos(rng), pos(rng)}, y{pos(rng), pos(rng)};
      const double gap = std::abs(ecp::min_distance(x, s).value() - ecp::min_distance(y, s).value());
      CHECK(gap <= ecp::distance(x, y) + 1e-12);
    }
  }

  TEST_CASE("Hausdorff distance examples") {
    const auto two = make_set({{"a", {0, 0}}, {"b", {2, 0}}});
    const auto one = make_set({{"c", {0, 0}}});
    CHECK(ecp::hausdorff_distance(two, one) == ExtReal{2.0});
    CHECK(ecp::hausdorff_distance(one, two) == ExtReal{2.0});
    CHECK(ecp::directed_hausdorff(one, two) == ExtReal{0.0});
    CHECK(ecp::hausdorff_distance(ObstacleSet{}, ObstacleSet{}) == ExtReal{0.0});
    CHECK(ecp::hausdorff_distance(one, ObstacleSet{}).is_pos_inf());
  }

  TEST_CASE("Hausdorff distance is symmetric and obeys the triangle inequality") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = random_set(rng, 1 + trial % 9);
      const auto b = random_set(rng, 1 + trial % 4);
      const auto c = random_set(rng, 1 + trial % 6);
      const double ab = ecp::hausdorff_distance(a, b).value();
      CHECK(ab == ecp::hausdorff_distance(b, a).value());
      CHECK(ab == doctest::Approx(oracle::hausdorff(a, b)).epsilon(1e-12));
      CHECK(ab <= ecp::hausdorff_distance(a, c).value() + ecp::hausdorff_distance(c, b).value() + 1e-9);
      CHECK(ecp::hausdorff_distance(a, a).value() == 0.0);
    }
  }

  TEST_CASE("unicycle step") {
    const auto s = ecp::unicycle_step({0, 0, 0}, {1.0, 0.0}, 0.4);
    CHECK(s.x == doctest::Approx(0.4));
    CHECK(s.y == doctest::Approx(0.0));
    const auto turned = ecp::unicycle_step({0, 0, M_PI / 2}, {0.8, 0.7}, 0.4);
    CHECK(turned.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(turned.y == doctest::Approx(0.32));
    CHECK(turned.theta == doctest::Approx(M_PI / 2 + 0.28));
    const auto wrapped = ecp::unicycle_step({0, 0, M_PI - 0.1}, {0.0, 0.7}, 0.4);
    CHECK(wrapped.theta == doctest::Approx(-M_PI + 0.18));
    CHECK_THROWS(ecp::unicycle_step({0, 0, 0}, {1.0, 0.0}, 0.0));
  }

  TEST_CASE("normalize angle lands in (-pi, pi]") {
    CHECK(ecp::normalize_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(ecp::normalize_angle(-M_PI) == doctest::Approx(M_PI));
    CHECK(ecp::normalize_angle(3 * M_PI / 2) == doctest::Approx(-M_PI / 2));
    for (double t = -20.0; t < 20.0; t += 0.37) {
      const double n = ecp::normalize_angle(t);
      CHECK(n > -M_PI);
      CHECK(n <= M_PI);
    }
  }

  TEST_CASE("stage and terminal cost") {
    ecp::GoalSpec goal;
    goal.goal_x = 1.0;
    goal.goal_y = 2.0;
    // (1^2 + 2^2) + 1e-3 * (0.8^2 + 0.7^2)
    CHECK(ecp::stage_cost({0, 0, 0}, {0.8, 0.7}, goal) == doctest::Approx(5.00113).epsilon(1e-12));
    CHECK(ecp::terminal_cost({0, 0, 0}, goal) == doctest::Approx(50.0));
    CHECK(ecp::terminal_cost({1, 2, 0}, goal) == 0.0);
  }

  TEST_CASE("bounds") {
    const ecp::Bounds b{-1, 1, 0, 2};
    CHECK(b.contains({1, 2}));
    CHECK_FALSE(b.contains({1.0001, 0}));
    CHECK(b.nonempty());
    CHECK_FALSE((ecp::Bounds{1, 0, 0, 1}).nonempty());
    CHECK(b.padded(1).contains({-2, 3}));
  }
}
