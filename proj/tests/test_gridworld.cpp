#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "beliefrev/gridworld.hpp"
#include "support/oracles.hpp"

using namespace beliefrev;

TEST_CASE("the default map is self-consistent and matches the shipped file") {
  const GridMap& map = GridMap::default_map();
  CHECK(map.to_text() == GridMap::default_map_text());

  std::ifstream file(std::string(BELIEFREV_SOURCE_DIR) + "/data/default_map.txt");
  REQUIRE(file.good());
  std::stringstream contents;
  contents << file.rdbuf();
  CHECK(contents.str() == GridMap::default_map_text());

  CHECK(map.object_start() == std::pair{2, 10});
  CHECK(map.target() == std::pair{2, 1});
  CHECK(map.robot_start() == std::pair{9, 6});
  CHECK(map.robot_start_direction() == Direction::kNorth);
  CHECK(map.area(2, 10) == 2);  // object in room2
  CHECK(map.area(2, 1) == 0);   // target in room1
  CHECK(map.area(9, 6) == 3);   // robot in the hall
}

TEST_CASE("map parsing rejects malformed inputs") {
  auto lines = [](const std::string& grid_row, int rows, const std::string& footer) {
    std::string text;
    for (int r = 0; r < rows; ++r) text += grid_row + "\n";
    return text + footer;
  };
  const std::string footer = "object: 0,0\ntarget: 1,1\nrobot: 2,2,N\n";
  CHECK_NOTHROW(GridMap::parse_text(lines("3333333333333", 13, footer)));
  CHECK_THROWS_AS(GridMap::parse_text(lines("333", 13, footer)), ConfigError);
  CHECK_THROWS_AS(GridMap::parse_text(lines("3333333333333", 12, footer)), ConfigError);
  CHECK_THROWS_AS(GridMap::parse_text(lines("33333333333x3", 13, footer)), ConfigError);
  CHECK_THROWS_AS(GridMap::parse_text(lines("3333333333333", 13, "object: 0,0\n")),
                  ConfigError);
  // Entities on walls or out of bounds.
  std::string walled;
  walled += "#333333333333\n";
  for (int r = 0; r < 12; ++r) walled += "3333333333333\n";
  CHECK_THROWS_AS(GridMap::parse_text(walled + "object: 0,0\ntarget: 1,1\nrobot: 2,2,N\n"),
                  ConfigError);
  CHECK_THROWS_AS(
      GridMap::parse_text(lines("3333333333333", 13, "object: 0,13\ntarget: 1,1\nrobot: 2,2,N\n")),
      ConfigError);
  // Overlapping entities.
  CHECK_THROWS_AS(
      GridMap::parse_text(lines("3333333333333", 13, "object: 1,1\ntarget: 1,1\nrobot: 2,2,N\n")),
      ConfigError);
  // Unknown direction letter.
  CHECK_THROWS_AS(
      GridMap::parse_text(lines("3333333333333", 13, "object: 0,0\ntarget: 1,1\nrobot: 2,2,Q\n")),
      ConfigError);
}

TEST_CASE("area lookups match the map and reject walls") {
  const GridMap& map = GridMap::default_map();
  CHECK(area_of(map, 1, 1) == 0);
  CHECK(area_of(map, 0, 6) == 1);
  CHECK(area_of(map, 11, 11) == 3);
  CHECK(area_of(map, 6, 6) == 3);
  CHECK_THROWS_AS(area_of(map, 0, 4), Error);
  CHECK_THROWS_AS(area_of(map, 6, 0), Error);
  CHECK(area_of(map, 1, 1) == area_of(map, 1, 1));
}

TEST_CASE("turns rotate the heading and cost one") {
  const GridMap& map = GridMap::default_map();
  const RobotState start = reset(map);
  CHECK(start.dir == Direction::kNorth);

  const auto left = step(start, Action::kTurnLeft, map);
  CHECK(left.state.dir == Direction::kWest);
  CHECK(left.state.x == start.x);
  CHECK(left.state.y == start.y);
  CHECK(left.reward == -1.0);
  CHECK_FALSE(left.terminal);

  const auto right = step(start, Action::kTurnRight, map);
  CHECK(right.state.dir == Direction::kEast);
  CHECK(turn_left(Direction::kNorth) == Direction::kWest);
  CHECK(turn_right(Direction::kWest) == Direction::kNorth);
}

TEST_CASE("blocked moves stay in place and cost ten") {
  std::string text;
  for (int r = 0; r < 13; ++r) text += "3333333333333\n";
  const GridMap map =
      GridMap::parse_text(text + "object: 5,5\ntarget: 6,6\nrobot: 0,0,N\n");
  const RobotState corner = reset(map);
  const auto blocked = step(corner, Action::kMove, map);
  CHECK(blocked.state.x == 0);
  CHECK(blocked.state.y == 0);
  CHECK(blocked.reward == -10.0);
  CHECK_FALSE(blocked.terminal);

  // Interior wall on the default map: (0,3) facing East runs into (0,4).
  const GridMap& dmap = GridMap::default_map();
  const RobotState at_wall{0, 3, 0, Direction::kEast, false};
  const auto hit = step(at_wall, Action::kMove, dmap);
  CHECK(hit.state.x == 0);
  CHECK(hit.state.y == 3);
  CHECK(hit.reward == -10.0);
}

TEST_CASE("moves advance one cell and recompute the area") {
  const GridMap& map = GridMap::default_map();
  RobotState s{7, 6, 3, Direction::kNorth, false};
  auto r = step(s, Action::kMove, map);
  CHECK(r.state.x == 6);
  CHECK(r.state.area == 3);  // doorway cell
  r = step(r.state, Action::kMove, map);
  CHECK(r.state.x == 5);
  CHECK(r.state.area == 1);  // corridor begins
  CHECK(r.reward == -1.0);
}

TEST_CASE("grab succeeds only on the object directly ahead") {
  const GridMap& map = GridMap::default_map();
  // Object sits at (2,10); stand at (2,9) facing East.
  RobotState s{2, 9, 2, Direction::kEast, false};
  const auto grabbed = step(s, Action::kGrab, map);
  CHECK(grabbed.state.holding);
  CHECK(grabbed.reward == 20.0);
  CHECK_FALSE(grabbed.terminal);

  // Grabbing again while holding is just a wasted action.
  const auto again = step(grabbed.state, Action::kGrab, map);
  CHECK(again.state.holding);
  CHECK(again.reward == -1.0);

  // Facing the wrong way.
  RobotState wrong{2, 9, 2, Direction::kWest, false};
  const auto miss = step(wrong, Action::kGrab, map);
  CHECK_FALSE(miss.state.holding);
  CHECK(miss.reward == -1.0);
}

TEST_CASE("delivering the object terminates with the big reward") {
  const GridMap& map = GridMap::default_map();
  // Target is (2,1); approach from (2,2) heading West while holding.
  RobotState s{2, 2, 0, Direction::kWest, true};
  const auto done = step(s, Action::kMove, map);
  CHECK(done.terminal);
  CHECK(done.reward == 100.0);
  CHECK(done.state.x == 2);
  CHECK(done.state.y == 1);

  // Empty-handed arrival is an ordinary move.
  RobotState empty{2, 2, 0, Direction::kWest, false};
  const auto pass = step(empty, Action::kMove, map);
  CHECK_FALSE(pass.terminal);
  CHECK(pass.reward == -1.0);
}

TEST_CASE("every step reward is one of the four values") {
  const GridMap& map = GridMap::default_map();
  Rng rng(41);
  Environment env(map);
  for (int episode = 0; episode < 5; ++episode) {
    env.reset();
    for (int t = 0; t < 250 && !env.terminal(); ++t) {
      const auto result = env.step(static_cast<Action>(rng.next_int(kNumActions)));
      const double r = result.reward;
      CHECK((r == -10.0 || r == -1.0 || r == 20.0 || r == 100.0));
      CHECK(result.state.area == area_of(map, result.state.x, result.state.y));
    }
  }
}

TEST_CASE("the environment enforces the terminal contract") {
  const GridMap& map = GridMap::default_map();
  Environment env(map);
  CHECK_FALSE(env.terminal());
  CHECK(env.reset() == reset(map));
  CHECK_FALSE(env.reset().holding);

  // Replay a known delivery plan through the wrapper: from (9,6) facing
  // North: 7 moves up, turn right, 3 moves east, grab, turn around, 8 moves
  // west onto the target.
  Environment env2(map);
  env2.reset();
  for (int i = 0; i < 7; ++i) env2.step(Action::kMove);
  env2.step(Action::kTurnRight);
  for (int i = 0; i < 3; ++i) env2.step(Action::kMove);
  auto grab = env2.step(Action::kGrab);
  CHECK(grab.reward == 20.0);
  env2.step(Action::kTurnRight);
  env2.step(Action::kTurnRight);
  StepResult last{};
  for (int i = 0; i < 8; ++i) last = env2.step(Action::kMove);
  CHECK(last.terminal);
  CHECK(last.reward == 100.0);
  CHECK(env2.terminal());
  CHECK_THROWS_AS(env2.step(Action::kMove), Error);
  env2.reset();
  CHECK_FALSE(env2.terminal());
  CHECK_NOTHROW(env2.step(Action::kTurnLeft));
}

TEST_CASE("observations copy direction and holding exactly") {
  Rng rng(43);
  const RobotState s{9, 6, 3, Direction::kEast, true};
  for (int i = 0; i < 100; ++i) {
    const auto o = sample_observation(s, rng);
    CHECK(o.dir == Direction::kEast);
    CHECK(o.holding);
    CHECK(o.x >= 7);
    CHECK(o.x <= 11);
    CHECK(o.y >= 4);
    CHECK(o.y <= 8);
    CHECK(o.area >= 1);
    CHECK(o.area <= 3);
  }
}

TEST_CASE("observation likelihoods match the windowed noise model") {
  CHECK(observation_likelihood(6, 6, 0, 12) == 0.3);
  CHECK(observation_likelihood(9, 6, 0, 12) == 0.0);
  CHECK(std::abs(observation_likelihood(1, 0, 0, 12) - 0.35) <= 1e-15);
  CHECK(std::abs(observation_likelihood(4, 6, 0, 12) - 0.175) <= 1e-15);
  CHECK_THROWS_AS(observation_likelihood(0, 13, 0, 12), ConfigError);

  // Rows over observable values sum to one for every hypothesis.
  for (int v = 0; v <= 12; ++v) {
    double sum = 0.0;
    for (int o = 0; o <= 12; ++o) sum += observation_likelihood(o, v, 0, 12);
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
  for (int v = 0; v <= 3; ++v) {
    double sum = 0.0;
    for (int o = 0; o <= 3; ++o) sum += observation_likelihood(o, v, 0, 3);
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
  // Single-value window degenerates to certainty.
  CHECK(observation_likelihood(0, 0, 0, 0) == 1.0);
}

TEST_CASE("observation frequencies match the model chi-square at 1 percent") {
  Rng rng(47);
  const RobotState interior{9, 6, 3, Direction::kNorth, false};
  const int samples = 20000;
  std::vector<int> counts(kGridSize, 0);
  for (int i = 0; i < samples; ++i) ++counts[sample_observation(interior, rng).x];
  double chi2 = 0.0;
  int bins = 0;
  for (int v = 0; v < kGridSize; ++v) {
    const double p = observation_likelihood(v, interior.x, 0, kGridSize - 1);
    if (p == 0.0) {
      CHECK(counts[v] == 0);
      continue;
    }
    const double expected = p * samples;
    chi2 += (counts[v] - expected) * (counts[v] - expected) / expected;
    ++bins;
  }
  CHECK(chi2 < testsupport::chi_square_crit_99(bins - 1));
}

TEST_CASE("the grid filter tables are stochastic and match hand counts") {
  const GridMap& map = GridMap::default_map();
  const GridFilter filter = build_grid_filter(map);
  CHECK_NOTHROW(filter.model.validate());
  CHECK(filter.model.num_actions == 5);

  // Row 7 is fully free; moving North only passes at the doorway column 6.
  const auto& north_x = filter.model.attributes[GridFilter::kAttrX].transition[1 + 0];
  CHECK(std::abs(north_x(7, 6) - 1.0 / 13) <= 1e-12);
  CHECK(std::abs(north_x(7, 7) - 12.0 / 13) <= 1e-12);
  // Row 0 cannot move further North.
  CHECK(north_x(0, 0) == 1.0);

  // Column 3 has 12 free cells; 7 of them can step East into column 4.
  const auto& east_y = filter.model.attributes[GridFilter::kAttrY].transition[1 + 1];
  CHECK(std::abs(east_y(3, 4) - 7.0 / 12) <= 1e-12);
  CHECK(std::abs(east_y(3, 3) - 5.0 / 12) <= 1e-12);
  CHECK(east_y(12, 12) == 1.0);

  // Stay action is the identity everywhere.
  CHECK(filter.model.attributes[GridFilter::kAttrX].transition[0] ==
        Matrix::identity(kGridSize));
  CHECK(filter.model.attributes[GridFilter::kAttrArea].transition[0] ==
        Matrix::identity(kNumAreas));

  CHECK(GridFilter::filter_action(Action::kTurnLeft, Direction::kSouth) == 0);
  CHECK(GridFilter::filter_action(Action::kGrab, Direction::kEast) == 0);
  CHECK(GridFilter::filter_action(Action::kMove, Direction::kSouth) == 3);
}
