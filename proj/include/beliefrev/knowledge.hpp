#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "beliefrev/matrix.hpp"
#include "beliefrev/types.hpp"

namespace beliefrev {

// Row tolerance for knowledge matrices (files carry limited precision).
inline constexpr double kKnowledgeRowTol = 1e-6;

// Pairwise conditional-probability table: table[i][j] = P(target=j | given=i).
struct KnowledgeMatrix {
  KnowledgeMatrix(std::string given, std::string target, Matrix table);

  std::string given_attr;
  std::string target_attr;
  Matrix table;  // rows = |given|, cols = |target|, row-stochastic
};

// Collection of knowledge matrices, at most one per ordered attribute pair.
class KnowledgeBase {
 public:
  void add(KnowledgeMatrix matrix);  // ConfigError on duplicate ordered pair

  const KnowledgeMatrix* find(const std::string& given, const std::string& target) const;

  // True when both P(target|given) and P(given|target) are stored.
  bool has_pair(const std::string& a, const std::string& b) const;

  const std::vector<KnowledgeMatrix>& matrices() const { return matrices_; }
  bool empty() const { return matrices_.empty(); }

 private:
  std::vector<KnowledgeMatrix> matrices_;  // insertion order
};

// Chain-rule push: distribution over the given attribute mapped to a
// distribution over the target attribute.
Distribution propagate(const Distribution& over_given, const KnowledgeMatrix& matrix);

// Stationary belief pair implied by a two-way knowledge pair.
struct BiasPair {
  Distribution x_bias;  // over x_given_y's target attribute
  Distribution y_bias;  // over y_given_x's target attribute
  double residual;      // L1 fixed-point residual at x_bias
  int iterations;
};

// Solves b = (x_given_y o y_given_x)(b) by power iteration from the uniform
// vector, L1 stopping rule. x_given_y holds P(x|y), y_given_x holds P(y|x).
// Throws ConfigError on mismatched pairs, ConvergenceError past max_iter.
BiasPair solve_bias(const KnowledgeMatrix& x_given_y, const KnowledgeMatrix& y_given_x,
                    double tol = 1e-10, int max_iter = 10000);

// Power-mean blend of a filtered belief with a bias belief:
// ((1-beta) * b^r + beta * b_star^r)^(1/r), renormalized to the simplex.
// beta in [0, 1] (endpoints return the argument exactly), r nonzero.
Distribution rnorm_combine(const Distribution& b, const Distribution& b_star, double beta,
                           double r);

// Single-component revision: the entry deviating most from the bias is moved
// by the component power mean, all other entries are rescaled by a common
// factor so the result sums to 1 (conditional ratios among them are
// preserved). Below-threshold deviations return `b` unchanged.
Distribution jeffrey_revision(const Distribution& b_star, const Distribution& b,
                              double threshold, double beta, double r);

// Per-attribute stationary bias with its recorded solver residual.
struct AttributeBias {
  Distribution bias;
  double residual;
};

// Bias for every attribute covered by a two-way knowledge pair. Pairs are
// visited in attribute-space order ((i, j) with i < j); the first pair
// covering an attribute provides its bias.
std::map<std::string, AttributeBias> compute_bias_beliefs(const KnowledgeBase& kb,
                                                          const AttributeSpace& space,
                                                          double tol = 1e-10,
                                                          int max_iter = 10000);

// --- knowledge matrix files ------------------------------------------------
//
// Line 1: `given=<attr> target=<attr> rows=<M> cols=<N>`, then M lines of N
// space-separated floats. `#` lines and blank lines are ignored. Every row
// must sum to 1 within 1e-6.

KnowledgeMatrix load_knowledge_matrix(const std::filesystem::path& file);
void save_knowledge_matrix(const KnowledgeMatrix& matrix, const std::filesystem::path& file);

// Loads every `*.km` file in the directory (sorted by filename).
KnowledgeBase load_knowledge_dir(const std::filesystem::path& dir);

// Writes one `<target>_given_<given>.km` file per matrix.
void save_knowledge_dir(const KnowledgeBase& kb, const std::filesystem::path& dir);

class GridMap;  // gridworld.hpp

// Empirical conditionals under a uniform occupancy assumption over non-wall
// cells: both directions for the pairs (x, y), (x, l) and (y, l). Rows with
// no support become uniform and produce a warning.
KnowledgeBase derive_knowledge_from_map(const GridMap& map,
                                        std::vector<std::string>* warnings = nullptr);

}  // namespace beliefrev
