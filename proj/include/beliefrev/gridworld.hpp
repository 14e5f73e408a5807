#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>

#include "beliefrev/belief.hpp"
#include "beliefrev/rng.hpp"
#include "beliefrev/types.hpp"

namespace beliefrev {

inline constexpr int kGridSize = 13;
inline constexpr int kNumAreas = 4;  // room1, corridor, room2, hall

// Observation noise: the true value with probability kObsTruthProb, otherwise
// uniform over the rest of the +/- kObsWindow neighborhood.
inline constexpr double kObsTruthProb = 0.3;
inline constexpr int kObsWindow = 2;

enum class Direction : int { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };
enum class Action : int { kTurnLeft = 0, kTurnRight = 1, kMove = 2, kGrab = 3 };
inline constexpr int kNumActions = 4;

Direction turn_left(Direction d);
Direction turn_right(Direction d);
// Row/column deltas of one forward step.
std::pair<int, int> direction_delta(Direction d);
char direction_letter(Direction d);
Direction direction_from_letter(char c);

Action action_from_string(const std::string& name);
std::string to_string(Action a);

inline constexpr double kRewardStep = -1.0;
inline constexpr double kRewardBlocked = -10.0;
inline constexpr double kRewardGrab = 20.0;
inline constexpr double kRewardDelivery = 100.0;

// The fetch world map: a 13x13 grid of area labels '0'..'3' and walls '#',
// plus the object start, the delivery target, and the robot start pose.
class GridMap {
 public:
  static GridMap parse(std::istream& in);
  static GridMap parse_text(const std::string& text);
  static GridMap load(const std::filesystem::path& file);

  // The built-in layout: two rooms and a corridor in the upper half, a hall
  // spanning the lower half, object in room2, target in room1.
  static const GridMap& default_map();
  static const std::string& default_map_text();

  bool in_bounds(int x, int y) const { return x >= 0 && x < kGridSize && y >= 0 && y < kGridSize; }
  // Out-of-bounds cells count as walls.
  bool wall(int x, int y) const;
  // Area label of a non-wall cell; throws Error on walls.
  int area(int x, int y) const;

  std::pair<int, int> object_start() const { return {object_x_, object_y_}; }
  std::pair<int, int> target() const { return {target_x_, target_y_}; }
  std::pair<int, int> robot_start() const { return {robot_x_, robot_y_}; }
  Direction robot_start_direction() const { return robot_dir_; }

  std::string to_text() const;

 private:
  GridMap() = default;

  std::array<char, kGridSize * kGridSize> cells_{};
  int object_x_ = 0, object_y_ = 0;
  int target_x_ = 0, target_y_ = 0;
  int robot_x_ = 0, robot_y_ = 0;
  Direction robot_dir_ = Direction::kNorth;
};

// s = (x, y, l, d, h). x is the row, y the column; l always equals the map
// area of (x, y). The object sits at its start cell until grabbed, then moves
// with the robot (there is no drop action), so the state tuple is complete.
struct RobotState {
  int x = 0;
  int y = 0;
  int area = 0;
  Direction dir = Direction::kNorth;
  bool holding = false;

  bool operator==(const RobotState&) const = default;
};

struct Observation {
  int x = 0;
  int y = 0;
  int area = 0;
  Direction dir = Direction::kNorth;  // fully observable, copied exactly
  bool holding = false;               // fully observable, copied exactly

  bool operator==(const Observation&) const = default;
};

struct StepResult {
  RobotState state;
  double reward = 0.0;
  bool terminal = false;
};

// Area lookup; throws Error on wall cells.
int area_of(const GridMap& map, int x, int y);

// Deterministic episode start: robot at the map's start pose, not holding.
RobotState reset(const GridMap& map);

// Deterministic transition. Turns rotate in place (-1). Move advances one
// cell, or stays put with -10 against walls/boundaries; a successful Move
// onto the target while holding delivers (+100, terminal). Grab succeeds
// (+20) only when the object sits on the cell directly ahead.
StepResult step(const RobotState& state, Action action, const GridMap& map);

// Noisy position/area observation; direction and holding copied exactly.
Observation sample_observation(const RobotState& state, Rng& rng);

// P(observed | hypothesis) for the windowed noise model, with
// K = |[hypothesis - 2, hypothesis + 2] n [lo, hi]|.
double observation_likelihood(int observed, int hypothesis, int lo, int hi,
                              double p = kObsTruthProb);

// Owns the current episode state and enforces the terminal contract.
class Environment {
 public:
  explicit Environment(GridMap map);

  const GridMap& map() const { return map_; }
  const RobotState& state() const { return state_; }
  bool terminal() const { return terminal_; }

  RobotState reset();
  StepResult step(Action action);  // Error when the episode already ended
  Observation observe(Rng& rng) const { return sample_observation(state_, rng); }

 private:
  GridMap map_;
  RobotState state_;
  bool terminal_ = false;
};

// Factored filter for the fetch world: x, y, l partially observable, d and h
// fully observable. Transitions depend on the heading at the time of the
// action, so the filter uses composite action ids: 0 keeps the position
// (turns, grabs), 1 + d moves one step along heading d. Position moves are a
// clipped kinematic shift mixed with the map's blocked-move marginal at
// weight kWallSlip; area moves use the empirical marginal alone.
struct GridFilter {
  static constexpr int kAttrX = 0;
  static constexpr int kAttrY = 1;
  static constexpr int kAttrArea = 2;
  static constexpr int kAttrDir = 3;
  static constexpr int kAttrHolding = 4;

  static constexpr int kStayAction = 0;
  static int move_action(Direction d) { return 1 + static_cast<int>(d); }
  static int filter_action(Action a, Direction heading_before);

  FilterModel model;
};

// Weight of the blocked-move marginal in the position transition tables.
inline constexpr double kWallSlip = 0.25;

GridFilter build_grid_filter(const GridMap& map, double wall_slip = kWallSlip);

}  // namespace beliefrev
