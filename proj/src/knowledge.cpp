#include "beliefrev/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "beliefrev/gridworld.hpp"

namespace beliefrev {

namespace {

// Entries are floored before exponentiation with a negative r; 0^r would
// otherwise divide by zero.
constexpr double kNegativePowerFloor = 1e-12;

double component_power_mean(double b, double b_star, double beta, double r) {
  if (r == 1.0) return (1.0 - beta) * b + beta * b_star;
  if (r < 0.0) {
    b = std::max(b, kNegativePowerFloor);
    b_star = std::max(b_star, kNegativePowerFloor);
  }
  return std::pow((1.0 - beta) * std::pow(b, r) + beta * std::pow(b_star, r), 1.0 / r);
}

void check_combine_args(const Distribution& b, const Distribution& b_star, double beta,
                        double r) {
  if (b.size() != b_star.size())
    throw ConfigError("distributions must share one value space");
  if (!(beta >= 0.0) || beta > 1.0) throw ConfigError("beta must lie in [0, 1]");
  if (r == 0.0) throw ConfigError("r must be nonzero");
  if (!std::isfinite(r)) throw ConfigError("r must be finite");
}

}  // namespace

KnowledgeMatrix::KnowledgeMatrix(std::string given, std::string target, Matrix table_in)
    : given_attr(std::move(given)), target_attr(std::move(target)), table(std::move(table_in)) {
  if (given_attr.empty() || target_attr.empty())
    throw ConfigError("knowledge matrix needs given and target attribute names");
  if (table.rows() < 1 || table.cols() < 1)
    throw ConfigError("knowledge matrix must not be empty");
  if (!table.row_stochastic(kKnowledgeRowTol))
    throw ConfigError("knowledge matrix P(" + target_attr + "|" + given_attr +
                      ") rows must sum to 1");
}

void KnowledgeBase::add(KnowledgeMatrix matrix) {
  if (find(matrix.given_attr, matrix.target_attr) != nullptr)
    throw ConfigError("duplicate knowledge matrix for pair (" + matrix.given_attr + ", " +
                      matrix.target_attr + ")");
  matrices_.push_back(std::move(matrix));
}

const KnowledgeMatrix* KnowledgeBase::find(const std::string& given,
                                           const std::string& target) const {
  for (const auto& m : matrices_)
    if (m.given_attr == given && m.target_attr == target) return &m;
  return nullptr;
}

bool KnowledgeBase::has_pair(const std::string& a, const std::string& b) const {
  return find(a, b) != nullptr && find(b, a) != nullptr;
}

Distribution propagate(const Distribution& over_given, const KnowledgeMatrix& matrix) {
  if (over_given.size() != matrix.table.rows())
    throw ConfigError("distribution does not match the given attribute of P(" +
                      matrix.target_attr + "|" + matrix.given_attr + ")");
  std::vector<double> out(matrix.table.cols(), 0.0);
  for (int i = 0; i < matrix.table.rows(); ++i) {
    const double mass = over_given[i];
    if (mass == 0.0) continue;
    for (int j = 0; j < matrix.table.cols(); ++j) out[j] += matrix.table(i, j) * mass;
  }
  return Distribution::from_weights(std::move(out));
}

BiasPair solve_bias(const KnowledgeMatrix& x_given_y, const KnowledgeMatrix& y_given_x,
                    double tol, int max_iter) {
  if (x_given_y.given_attr != y_given_x.target_attr ||
      x_given_y.target_attr != y_given_x.given_attr)
    throw ConfigError("knowledge matrices do not form a reverse pair");
  if (x_given_y.table.rows() != y_given_x.table.cols() ||
      x_given_y.table.cols() != y_given_x.table.rows())
    throw ConfigError("knowledge matrix dimensions are incompatible");
  if (!(tol > 0.0)) throw ConfigError("solver tolerance must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");

  const int nx = y_given_x.table.rows();
  Distribution x = Distribution::uniform(nx);
  double change = 0.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    const Distribution next = propagate(propagate(x, y_given_x), x_given_y);
    change = 0.0;
    for (int i = 0; i < nx; ++i) change += std::abs(next[i] - x[i]);
    x = next;
    if (change <= tol) {
      // One more application measures the residual at the returned point; the
      // composed map is L1-nonexpansive, so it stays within tol.
      const Distribution again = propagate(propagate(x, y_given_x), x_given_y);
      double residual = 0.0;
      for (int i = 0; i < nx; ++i) residual += std::abs(again[i] - x[i]);
      return BiasPair{x, propagate(x, y_given_x), residual, iter};
    }
  }
  throw ConvergenceError("bias fixed point did not converge within " +
                             std::to_string(max_iter) + " iterations",
                         change);
}

Distribution rnorm_combine(const Distribution& b, const Distribution& b_star, double beta,
                           double r) {
  check_combine_args(b, b_star, beta, r);
  // Endpoints return the argument bit-identically.
  if (beta == 0.0) return b;
  if (beta == 1.0) return b_star;
  std::vector<double> weights(b.size());
  for (int i = 0; i < b.size(); ++i)
    weights[i] = component_power_mean(b[i], b_star[i], beta, r);
  return Distribution::from_weights(std::move(weights));
}

Distribution jeffrey_revision(const Distribution& b_star, const Distribution& b,
                              double threshold, double beta, double r) {
  check_combine_args(b, b_star, beta, r);
  if (!(threshold >= 0.0)) throw ConfigError("threshold must be nonnegative");

  int pivot = 0;
  double max_dev = 0.0;
  for (int i = 0; i < b.size(); ++i) {
    const double dev = std::abs(b_star[i] - b[i]);
    if (dev > max_dev) {
      max_dev = dev;
      pivot = i;
    }
  }
  if (max_dev <= threshold) return b;

  const double revised = component_power_mean(b[pivot], b_star[pivot], beta, r);
  const int n = b.size();
  std::vector<double> out(n);
  out[pivot] = revised;
  // (1 - revised) / (1 - b[pivot]) in exact arithmetic; summing the other
  // entries directly keeps the result on the simplex even when the pivot
  // holds nearly all the mass.
  double rest_before = 0.0;
  for (int i = 0; i < n; ++i)
    if (i != pivot) rest_before += b[i];
  if (rest_before > 0.0) {
    // The common factor keeps ratios among non-revised entries intact.
    const double scale = (1.0 - revised) / rest_before;
    for (int i = 0; i < n; ++i)
      if (i != pivot) out[i] = b[i] * scale;
  } else {
    // All prior mass sat on the pivot; spread the released mass evenly.
    const double share = (1.0 - revised) / (n - 1);
    for (int i = 0; i < n; ++i)
      if (i != pivot) out[i] = share;
  }
  return Distribution(std::move(out));
}

std::map<std::string, AttributeBias> compute_bias_beliefs(const KnowledgeBase& kb,
                                                          const AttributeSpace& space,
                                                          double tol, int max_iter) {
  std::map<std::string, AttributeBias> out;
  for (int i = 0; i < space.size(); ++i) {
    for (int j = i + 1; j < space.size(); ++j) {
      const auto& a = space.attribute(i);
      const auto& b = space.attribute(j);
      const KnowledgeMatrix* a_given_b = kb.find(b.name, a.name);
      const KnowledgeMatrix* b_given_a = kb.find(a.name, b.name);
      if (a_given_b == nullptr || b_given_a == nullptr) continue;
      if (a_given_b->table.cols() != a.cardinality ||
          b_given_a->table.cols() != b.cardinality)
        throw ConfigError("knowledge matrices for (" + a.name + ", " + b.name +
                          ") do not match the attribute space");
      if (out.contains(a.name) && out.contains(b.name)) continue;
      const BiasPair pair = solve_bias(*a_given_b, *b_given_a, tol, max_iter);
      out.try_emplace(a.name, AttributeBias{pair.x_bias, pair.residual});
      out.try_emplace(b.name, AttributeBias{pair.y_bias, pair.residual});
    }
  }
  return out;
}

// --- file I/O ---------------------------------------------------------------

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string next_content_line(std::istream& in, const std::string& what) {
  std::string line;
  while (std::getline(in, line)) {
    if (!blank_or_comment(line)) return line;
  }
  throw ConfigError("unexpected end of file while reading " + what);
}

}  // namespace

KnowledgeMatrix load_knowledge_matrix(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open knowledge file " + file.string());

  std::istringstream header(next_content_line(in, "knowledge header"));
  std::string given, target;
  int rows = 0, cols = 0;
  std::string token;
  while (header >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      throw ConfigError("malformed knowledge header in " + file.string());
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "given") {
      given = value;
    } else if (key == "target") {
      target = value;
    } else if (key == "rows") {
      rows = std::stoi(value);
    } else if (key == "cols") {
      cols = std::stoi(value);
    } else {
      throw ConfigError("unknown knowledge header key '" + key + "' in " + file.string());
    }
  }
  if (given.empty() || target.empty() || rows < 1 || cols < 1)
    throw ConfigError("incomplete knowledge header in " + file.string());

  Matrix table(rows, cols);
  for (int r = 0; r < rows; ++r) {
    std::istringstream row(next_content_line(in, "knowledge row"));
    for (int c = 0; c < cols; ++c) {
      if (!(row >> table(r, c)))
        throw ConfigError("knowledge row " + std::to_string(r) + " in " + file.string() +
                          " has too few entries");
    }
    double extra;
    if (row >> extra)
      throw ConfigError("knowledge row " + std::to_string(r) + " in " + file.string() +
                        " has too many entries");
  }
  return KnowledgeMatrix(given, target, std::move(table));
}

void save_knowledge_matrix(const KnowledgeMatrix& matrix, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write knowledge file " + file.string());
  out << "given=" << matrix.given_attr << " target=" << matrix.target_attr
      << " rows=" << matrix.table.rows() << " cols=" << matrix.table.cols() << "\n";
  for (int r = 0; r < matrix.table.rows(); ++r) {
    for (int c = 0; c < matrix.table.cols(); ++c) {
      if (c > 0) out << ' ';
      out << format_double(matrix.table(r, c));
    }
    out << "\n";
  }
  if (!out) throw Error("failed writing knowledge file " + file.string());
}

KnowledgeBase load_knowledge_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw ConfigError("knowledge directory " + dir.string() + " does not exist");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".km")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw ConfigError("knowledge directory " + dir.string() + " has no .km files");
  KnowledgeBase kb;
  for (const auto& file : files) kb.add(load_knowledge_matrix(file));
  return kb;
}

void save_knowledge_dir(const KnowledgeBase& kb, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& m : kb.matrices())
    save_knowledge_matrix(m, dir / (m.target_attr + "_given_" + m.given_attr + ".km"));
}

// --- map-derived knowledge --------------------------------------------------

namespace {

// Conditional table from co-occurrence counts; zero-support rows fall back to
// uniform and are reported.
Matrix conditional_from_counts(const std::vector<std::vector<double>>& counts,
                               const std::string& given, const std::string& target,
                               std::vector<std::string>* warnings) {
  const int rows = static_cast<int>(counts.size());
  const int cols = static_cast<int>(counts.front().size());
  Matrix table(rows, cols);
  for (int r = 0; r < rows; ++r) {
    double total = 0.0;
    for (int c = 0; c < cols; ++c) total += counts[r][c];
    if (total <= 0.0) {
      for (int c = 0; c < cols; ++c) table(r, c) = 1.0 / cols;
      if (warnings != nullptr)
        warnings->push_back("P(" + target + "|" + given + "): no support for " + given +
                            "=" + std::to_string(r) + ", using a uniform row");
      continue;
    }
    for (int c = 0; c < cols; ++c) table(r, c) = counts[r][c] / total;
  }
  return table;
}

}  // namespace

KnowledgeBase derive_knowledge_from_map(const GridMap& map,
                                        std::vector<std::string>* warnings) {
  const int n = kGridSize;
  std::vector<std::vector<double>> xy(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> xl(n, std::vector<double>(kNumAreas, 0.0));
  std::vector<std::vector<double>> yl(n, std::vector<double>(kNumAreas, 0.0));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (map.wall(x, y)) continue;
      const int l = map.area(x, y);
      xy[x][y] += 1.0;
      xl[x][l] += 1.0;
      yl[y][l] += 1.0;
    }
  }
  const auto transpose = [](const std::vector<std::vector<double>>& m) {
    std::vector<std::vector<double>> t(m.front().size(), std::vector<double>(m.size(), 0.0));
    for (std::size_t r = 0; r < m.size(); ++r)
      for (std::size_t c = 0; c < m.front().size(); ++c) t[c][r] = m[r][c];
    return t;
  };

  KnowledgeBase kb;
  kb.add(KnowledgeMatrix("x", "y", conditional_from_counts(xy, "x", "y", warnings)));
  kb.add(KnowledgeMatrix("y", "x", conditional_from_counts(transpose(xy), "y", "x", warnings)));
  kb.add(KnowledgeMatrix("x", "l", conditional_from_counts(xl, "x", "l", warnings)));
  kb.add(KnowledgeMatrix("l", "x", conditional_from_counts(transpose(xl), "l", "x", warnings)));
  kb.add(KnowledgeMatrix("y", "l", conditional_from_counts(yl, "y", "l", warnings)));
  kb.add(KnowledgeMatrix("l", "y", conditional_from_counts(transpose(yl), "l", "y", warnings)));
  return kb;
}

}  // namespace beliefrev
