#include "beliefrev/gridworld.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

namespace beliefrev {

Direction turn_left(Direction d) {
  return static_cast<Direction>((static_cast<int>(d) + 3) % 4);
}

Direction turn_right(Direction d) {
  return static_cast<Direction>((static_cast<int>(d) + 1) % 4);
}

std::pair<int, int> direction_delta(Direction d) {
  switch (d) {
    case Direction::kNorth: return {-1, 0};
    case Direction::kEast: return {0, 1};
    case Direction::kSouth: return {1, 0};
    case Direction::kWest: return {0, -1};
  }
  throw Error("invalid direction");
}

char direction_letter(Direction d) {
  constexpr char letters[4] = {'N', 'E', 'S', 'W'};
  return letters[static_cast<int>(d)];
}

Direction direction_from_letter(char c) {
  switch (c) {
    case 'N': return Direction::kNorth;
    case 'E': return Direction::kEast;
    case 'S': return Direction::kSouth;
    case 'W': return Direction::kWest;
    default: throw ConfigError(std::string("unknown direction letter '") + c + "'");
  }
}

Action action_from_string(const std::string& name) {
  if (name == "turn_left") return Action::kTurnLeft;
  if (name == "turn_right") return Action::kTurnRight;
  if (name == "move") return Action::kMove;
  if (name == "grab") return Action::kGrab;
  throw ConfigError("unknown action '" + name + "'");
}

std::string to_string(Action a) {
  switch (a) {
    case Action::kTurnLeft: return "turn_left";
    case Action::kTurnRight: return "turn_right";
    case Action::kMove: return "move";
    case Action::kGrab: return "grab";
  }
  throw Error("invalid action");
}

// --- GridMap -----------------------------------------------------------------

namespace {

// Two rooms and a corridor in the upper half, separated by wall columns with
// doorways on row 2; a single doorway on row 6 connects the corridor to the
// hall spanning the lower half.
constexpr const char* kDefaultMapText =
    "0000#111#2222\n"
    "0000#111#2222\n"
    "0000111112222\n"
    "0000#111#2222\n"
    "0000#111#2222\n"
    "0000#111#2222\n"
    "######3######\n"
    "3333333333333\n"
    "3333333333333\n"
    "3333333333333\n"
    "3333333333333\n"
    "3333333333333\n"
    "3333333333333\n"
    "object: 2,10\n"
    "target: 2,1\n"
    "robot: 9,6,N\n";

std::pair<int, int> parse_cell(const std::string& value, const std::string& what) {
  int row = 0, col = 0;
  char comma = 0;
  std::istringstream in(value);
  if (!(in >> row >> comma >> col) || comma != ',')
    throw ConfigError("malformed " + what + " line in map");
  return {row, col};
}

}  // namespace

GridMap GridMap::parse(std::istream& in) {
  GridMap map;
  std::string line;
  for (int x = 0; x < kGridSize; ++x) {
    if (!std::getline(in, line))
      throw ConfigError("map ends before row " + std::to_string(x));
    if (static_cast<int>(line.size()) != kGridSize)
      throw ConfigError("map row " + std::to_string(x) + " must have exactly " +
                        std::to_string(kGridSize) + " characters");
    for (int y = 0; y < kGridSize; ++y) {
      const char c = line[y];
      if (c != '#' && (c < '0' || c >= '0' + kNumAreas))
        throw ConfigError(std::string("unknown map character '") + c + "' at row " +
                          std::to_string(x));
      map.cells_[x * kGridSize + y] = c;
    }
  }

  bool have_object = false, have_target = false, have_robot = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ConfigError("malformed map entity line: " + line);
    const std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    if (key == "object") {
      std::tie(map.object_x_, map.object_y_) = parse_cell(value, "object");
      have_object = true;
    } else if (key == "target") {
      std::tie(map.target_x_, map.target_y_) = parse_cell(value, "target");
      have_target = true;
    } else if (key == "robot") {
      std::istringstream rin(value);
      char c1 = 0, c2 = 0, letter = 0;
      if (!(rin >> map.robot_x_ >> c1 >> map.robot_y_ >> c2 >> letter) || c1 != ',' ||
          c2 != ',')
        throw ConfigError("malformed robot line in map");
      map.robot_dir_ = direction_from_letter(letter);
      have_robot = true;
    } else {
      throw ConfigError("unknown map entity '" + key + "'");
    }
  }
  if (!have_object || !have_target || !have_robot)
    throw ConfigError("map needs object, target and robot lines");

  const auto check_free = [&map](int x, int y, const std::string& what) {
    if (!map.in_bounds(x, y) || map.wall(x, y))
      throw ConfigError(what + " must sit on a non-wall cell");
  };
  check_free(map.object_x_, map.object_y_, "object");
  check_free(map.target_x_, map.target_y_, "target");
  check_free(map.robot_x_, map.robot_y_, "robot");
  if ((map.object_x_ == map.target_x_ && map.object_y_ == map.target_y_) ||
      (map.object_x_ == map.robot_x_ && map.object_y_ == map.robot_y_) ||
      (map.target_x_ == map.robot_x_ && map.target_y_ == map.robot_y_))
    throw ConfigError("object, target and robot must start on distinct cells");
  return map;
}

GridMap GridMap::parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

GridMap GridMap::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open map file " + file.string());
  return parse(in);
}

const GridMap& GridMap::default_map() {
  static const GridMap map = parse_text(kDefaultMapText);
  return map;
}

const std::string& GridMap::default_map_text() {
  static const std::string text = kDefaultMapText;
  return text;
}

bool GridMap::wall(int x, int y) const {
  if (!in_bounds(x, y)) return true;
  return cells_[x * kGridSize + y] == '#';
}

int GridMap::area(int x, int y) const {
  if (wall(x, y))
    throw Error("cell (" + std::to_string(x) + ", " + std::to_string(y) +
                ") is a wall and has no area");
  return cells_[x * kGridSize + y] - '0';
}

std::string GridMap::to_text() const {
  std::string out;
  for (int x = 0; x < kGridSize; ++x) {
    out.append(&cells_[x * kGridSize], kGridSize);
    out.push_back('\n');
  }
  out += "object: " + std::to_string(object_x_) + "," + std::to_string(object_y_) + "\n";
  out += "target: " + std::to_string(target_x_) + "," + std::to_string(target_y_) + "\n";
  out += "robot: " + std::to_string(robot_x_) + "," + std::to_string(robot_y_) + "," +
         direction_letter(robot_dir_) + "\n";
  return out;
}

// --- dynamics ----------------------------------------------------------------

int area_of(const GridMap& map, int x, int y) { return map.area(x, y); }

RobotState reset(const GridMap& map) {
  const auto [x, y] = map.robot_start();
  return RobotState{x, y, map.area(x, y), map.robot_start_direction(), false};
}

StepResult step(const RobotState& state, Action action, const GridMap& map) {
  RobotState next = state;
  double reward = kRewardStep;
  bool terminal = false;

  switch (action) {
    case Action::kTurnLeft:
      next.dir = turn_left(state.dir);
      break;
    case Action::kTurnRight:
      next.dir = turn_right(state.dir);
      break;
    case Action::kMove: {
      const auto [dx, dy] = direction_delta(state.dir);
      const int fx = state.x + dx;
      const int fy = state.y + dy;
      if (map.wall(fx, fy)) {
        reward = kRewardBlocked;
      } else {
        next.x = fx;
        next.y = fy;
        if (next.holding && std::pair{fx, fy} == map.target()) {
          reward = kRewardDelivery;
          terminal = true;
        }
      }
      break;
    }
    case Action::kGrab: {
      const auto [dx, dy] = direction_delta(state.dir);
      // The object sits at its start cell until grabbed, then travels with
      // the robot, so only the !holding case can ever succeed.
      if (!state.holding &&
          std::pair{state.x + dx, state.y + dy} == map.object_start()) {
        next.holding = true;
        reward = kRewardGrab;
      }
      break;
    }
  }
  next.area = map.area(next.x, next.y);
  return StepResult{next, reward, terminal};
}

namespace {

int sample_windowed(int truth, int lo, int hi, Rng& rng) {
  const int wlo = std::max(truth - kObsWindow, lo);
  const int whi = std::min(truth + kObsWindow, hi);
  const int k = whi - wlo + 1;
  if (k == 1) return truth;
  if (rng.next_double() < kObsTruthProb) return truth;
  const int pick = rng.next_int(k - 1);
  const int value = wlo + pick;
  return value >= truth ? value + 1 : value;
}

}  // namespace

Observation sample_observation(const RobotState& state, Rng& rng) {
  Observation o;
  o.x = sample_windowed(state.x, 0, kGridSize - 1, rng);
  o.y = sample_windowed(state.y, 0, kGridSize - 1, rng);
  o.area = sample_windowed(state.area, 0, kNumAreas - 1, rng);
  o.dir = state.dir;
  o.holding = state.holding;
  return o;
}

double observation_likelihood(int observed, int hypothesis, int lo, int hi, double p) {
  if (hypothesis < lo || hypothesis > hi)
    throw ConfigError("observation hypothesis outside its value range");
  const int wlo = std::max(hypothesis - kObsWindow, lo);
  const int whi = std::min(hypothesis + kObsWindow, hi);
  if (observed < wlo || observed > whi) return 0.0;
  const int k = whi - wlo + 1;
  if (k == 1) return 1.0;
  return observed == hypothesis ? p : (1.0 - p) / (k - 1);
}

Environment::Environment(GridMap map) : map_(std::move(map)), state_(beliefrev::reset(map_)) {}

RobotState Environment::reset() {
  state_ = beliefrev::reset(map_);
  terminal_ = false;
  return state_;
}

StepResult Environment::step(Action action) {
  if (terminal_) throw Error("step on a terminal episode; call reset first");
  const StepResult result = beliefrev::step(state_, action, map_);
  state_ = result.state;
  terminal_ = result.terminal;
  return result;
}

// --- factored filter ---------------------------------------------------------

int GridFilter::filter_action(Action a, Direction heading_before) {
  return a == Action::kMove ? move_action(heading_before) : kStayAction;
}

namespace {

// Destination cell of one forward step with wall/boundary blocking.
std::pair<int, int> move_outcome(const GridMap& map, int x, int y, Direction d) {
  const auto [dx, dy] = direction_delta(d);
  const int fx = x + dx;
  const int fy = y + dy;
  if (map.wall(fx, fy)) return {x, y};
  return {fx, fy};
}

Matrix observation_table(int cardinality, int lo, int hi) {
  Matrix z(cardinality, cardinality);
  for (int v = 0; v < cardinality; ++v)
    for (int o = 0; o < cardinality; ++o) z(v, o) = observation_likelihood(o, v + lo, lo, hi);
  return z;
}

}  // namespace

GridFilter build_grid_filter(const GridMap& map, double wall_slip) {
  if (!(wall_slip >= 0.0) || wall_slip > 1.0)
    throw ConfigError("wall_slip must lie in [0, 1]");
  GridFilter filter;
  auto& model = filter.model;
  model.space = AttributeSpace({{"x", kGridSize},
                                {"y", kGridSize},
                                {"l", kNumAreas},
                                {"d", 4},
                                {"h", 2}});
  model.fully_observable = {false, false, false, true, true};
  model.num_actions = 5;  // stay + one move per heading
  model.attributes.resize(5);

  // Move model for x and y: a one-cell kinematic shift along the heading,
  // clipped at the boundary, mixed with the map's empirical blocked-move
  // marginal (uniform occupancy) at weight wall_slip. Interior walls are not
  // representable in a per-attribute table without the joint position; the
  // mix keeps predictions sharp while still leaking the right amount of
  // stay-in-place mass. The area attribute has no kinematic shortcut and
  // uses the empirical marginal alone.
  const auto move_tables = [&map, wall_slip](Direction d) {
    const auto [dx, dy] = direction_delta(d);
    Matrix tx(kGridSize, kGridSize, 0.0);
    Matrix ty(kGridSize, kGridSize, 0.0);
    for (int v = 0; v < kGridSize; ++v) {
      tx(v, std::clamp(v + dx, 0, kGridSize - 1)) += 1.0 - wall_slip;
      ty(v, std::clamp(v + dy, 0, kGridSize - 1)) += 1.0 - wall_slip;
    }
    Matrix tl(kNumAreas, kNumAreas, 0.0);
    Matrix ex(kGridSize, kGridSize, 0.0);
    Matrix ey(kGridSize, kGridSize, 0.0);
    std::vector<double> row_count(kGridSize, 0.0);
    std::vector<double> col_count(kGridSize, 0.0);
    std::vector<double> area_count(kNumAreas, 0.0);
    for (int x = 0; x < kGridSize; ++x) {
      for (int y = 0; y < kGridSize; ++y) {
        if (map.wall(x, y)) continue;
        const auto [nx, ny] = move_outcome(map, x, y, d);
        ex(x, nx) += 1.0;
        ey(y, ny) += 1.0;
        row_count[x] += 1.0;
        col_count[y] += 1.0;
        tl(map.area(x, y), map.area(nx, ny)) += 1.0;
        area_count[map.area(x, y)] += 1.0;
      }
    }
    for (int v = 0; v < kGridSize; ++v) {
      if (row_count[v] > 0.0)
        for (int c = 0; c < kGridSize; ++c) tx(v, c) += wall_slip * ex(v, c) / row_count[v];
      else
        tx(v, v) += wall_slip;
      if (col_count[v] > 0.0)
        for (int c = 0; c < kGridSize; ++c) ty(v, c) += wall_slip * ey(v, c) / col_count[v];
      else
        ty(v, v) += wall_slip;
    }
    for (int a = 0; a < kNumAreas; ++a) {
      if (area_count[a] > 0.0) {
        for (int c = 0; c < kNumAreas; ++c) tl(a, c) /= area_count[a];
      } else {
        tl(a, a) = 1.0;  // unoccupiable label, keep it a self-loop
      }
    }
    return std::array<Matrix, 3>{tx, ty, tl};
  };

  const Matrix zx = observation_table(kGridSize, 0, kGridSize - 1);
  const Matrix zl = observation_table(kNumAreas, 0, kNumAreas - 1);

  auto& ax = model.attributes[GridFilter::kAttrX];
  auto& ay = model.attributes[GridFilter::kAttrY];
  auto& al = model.attributes[GridFilter::kAttrArea];
  ax.transition.assign(5, Matrix::identity(kGridSize));
  ay.transition.assign(5, Matrix::identity(kGridSize));
  al.transition.assign(5, Matrix::identity(kNumAreas));
  for (int d = 0; d < 4; ++d) {
    const auto tables = move_tables(static_cast<Direction>(d));
    ax.transition[1 + d] = tables[0];
    ay.transition[1 + d] = tables[1];
    al.transition[1 + d] = tables[2];
  }
  ax.observation.assign(5, zx);
  ay.observation.assign(5, zx);
  al.observation.assign(5, zl);

  model.validate();
  return filter;
}

}  // namespace beliefrev
