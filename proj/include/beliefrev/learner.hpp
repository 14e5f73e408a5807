#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "beliefrev/gridworld.hpp"
#include "beliefrev/knowledge.hpp"
#include "beliefrev/rng.hpp"

namespace beliefrev {

// The five belief-revision strategies compared by the experiment.
enum class MethodVariant : int {
  kNormal = 0,       // plain Bayes filtering, no knowledge
  kBiasInit = 1,     // bias belief as the episode-start belief
  kBiasCombine = 2,  // power-mean combination with the bias, every turn
  kJeffrey = 3,      // single-component revision toward the bias, every turn
  kProposed = 4,     // revision followed by combination, every turn
};

MethodVariant method_from_string(const std::string& name);
std::string to_string(MethodVariant variant);
const std::vector<MethodVariant>& all_methods();
bool method_uses_knowledge(MethodVariant variant);

struct Hyperparams {
  double alpha = 0.1;          // Q-learning rate
  double alpha_decay = 0.9;    // multiplied in every decay_every episodes
  int decay_every = 500;
  double gamma = 1.0;          // discount
  double beta = 0.5;           // bias weight in the power-mean combination
  double r = 1.0;              // power-mean exponent
  double threshold = 0.2;      // revision trigger on max |b* - b|
  double quant_step = 0.1;     // belief quantization for Q-table keys
  int max_steps = 200;
  int episodes = 10000;
  double epsilon_start = 1.0;  // epsilon-greedy schedule, multiplicative decay
  double epsilon_end = 0.05;
  double epsilon_decay = 0.999;
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

// Exploration rate for a 0-based episode index.
double epsilon_at(const Hyperparams& hp, int episode);
// Learning rate after `completed` episodes (repeated multiplication).
double alpha_after(const Hyperparams& hp, int completed);

// Flat byte encoding of (quantized beliefs of partially observable
// attributes, exact values of fully observable ones). Equal beliefs produce
// equal keys.
using BeliefKey = std::string;
BeliefKey make_belief_key(const FactoredBelief& belief, const FilterModel& model,
                          double quant_step);

// Tabular action values. Unseen keys read as all zeros without inserting;
// entries are only ever added, never removed.
class QTable {
 public:
  std::array<double, kNumActions> values(const BeliefKey& key) const;

  // Standard Q-learning backup:
  // Q[key][a] += alpha * (reward + gamma * max Q[next] * (1 - terminal) - Q[key][a]).
  void update(const BeliefKey& key, int action, double reward, const BeliefKey& next_key,
              bool terminal, double alpha, double gamma);

  std::size_t size() const { return table_.size(); }
  const std::unordered_map<BeliefKey, std::array<double, kNumActions>>& entries() const {
    return table_;
  }
  void insert_raw(BeliefKey key, std::array<double, kNumActions> values);

 private:
  std::unordered_map<BeliefKey, std::array<double, kNumActions>> table_;
};

// Epsilon-greedy with lowest-index tie-break on the greedy arm.
Action select_action(const QTable& table, const BeliefKey& key, double epsilon, Rng& rng);

struct EpisodeRecord {
  double total_reward = 0.0;
  int steps = 0;
  bool success = false;
  // Diagnostics: how often each revision op ran and how often degenerate
  // evidence fell back to the prediction.
  int jeffrey_applications = 0;
  int rnorm_applications = 0;
  int evidence_fallbacks = 0;

  bool operator==(const EpisodeRecord&) const = default;
};

// Bias distributions aligned with the filter space; nullopt for attributes
// without knowledge (always d and h here).
struct BiasBeliefs {
  std::vector<std::optional<Distribution>> per_attribute;
};

// Aligns named attribute biases with the filter space.
BiasBeliefs align_bias(const std::map<std::string, AttributeBias>& by_name,
                       const FilterModel& model);

// One interaction episode: act epsilon-greedily on the quantized belief key,
// filter the belief through the step's composite action, then revise it per
// variant before the next decision. `bias` may be null only for kNormal.
EpisodeRecord run_episode(Environment& env, const GridFilter& filter,
                          const BiasBeliefs* bias, MethodVariant variant, QTable& table,
                          const Hyperparams& hp, double alpha, double epsilon, Rng& rng,
                          bool learning);

struct TrainResult {
  QTable table;
  std::vector<EpisodeRecord> curve;
  double final_alpha = 0.0;
};

// Full training run: bias solved once up front, then `episodes` episodes with
// the alpha/epsilon schedules. `kb` may be null only for kNormal.
TrainResult train(const Hyperparams& hp, const GridMap& map, const KnowledgeBase* kb,
                  MethodVariant variant);

}  // namespace beliefrev
