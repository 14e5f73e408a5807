#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "beliefrev/learner.hpp"

namespace beliefrev {

// Full harness configuration. File format: `key = value` lines with keys
// exactly equal to the field names below; lists are comma separated; `#`
// comments and blank lines are ignored; unknown keys are an error.
struct ExperimentConfig {
  Hyperparams hp;
  std::vector<MethodVariant> methods = all_methods();
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int eval_episodes = 1000;
  std::string out_dir = "out";

  void validate() const;

  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig load(const std::filesystem::path& file);
  void write(std::ostream& out) const;
  void save(const std::filesystem::path& file) const;

  bool operator==(const ExperimentConfig&) const = default;
};

// One summary row per method, pooled over seeds and evaluation episodes.
struct EvalRow {
  MethodVariant method;
  int episodes = 0;          // pooled episode count
  double mean_reward = 0.0;  // mean total reward per episode
  double std_error = 0.0;    // sample standard error of that mean
  double success_rate = 0.0;

  bool operator==(const EvalRow&) const = default;
};

struct EvalSummary {
  std::vector<EvalRow> rows;  // config method order
};

EvalRow summarize(MethodVariant method, const std::vector<EpisodeRecord>& pooled);

// Greedy evaluation of a trained table (epsilon 0, learning off).
std::vector<EpisodeRecord> evaluate_policy(QTable& table, const GridMap& map,
                                           const GridFilter& filter, const BiasBeliefs* bias,
                                           MethodVariant variant, const Hyperparams& hp,
                                           int episodes, Rng& rng);

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<EpisodeRecord> curve;
  std::vector<EpisodeRecord> eval_records;
};

struct MethodResult {
  MethodVariant method;
  std::vector<SeedRun> seeds;
};

struct ComparisonResult {
  std::vector<MethodResult> methods;  // config order
  EvalSummary summary;
};

struct ComparisonOptions {
  std::filesystem::path out_dir;  // ignored unless write_outputs
  bool write_outputs = false;
  int threads = 0;  // 0 = hardware concurrency
};

// Trains and evaluates every (method, seed) cell; cells run in parallel and
// own their RNG streams, so results do not depend on scheduling. With
// write_outputs set, emits per-cell curves, evaluation records, policies, the
// effective config, mean/combined curves, and summary.csv under out_dir.
ComparisonResult run_comparison(const ExperimentConfig& config, const GridMap& map,
                                const KnowledgeBase* kb, const ComparisonOptions& options = {});

// Rolling mean with the stated edge rule: windows clipped at the start
// average over the available prefix.
std::vector<double> rolling_mean(const std::vector<double>& values, int window);

// CSV emission. Per-episode files carry `episode,reward,steps,success`; the
// combined file carries per-method mean rewards and their window-100 rolling
// means.
void write_episode_csv(const std::filesystem::path& file,
                       const std::vector<EpisodeRecord>& records);
void emit_curves(const std::vector<MethodResult>& methods, const std::filesystem::path& dir);
void write_summary_csv(const std::filesystem::path& file, const EvalSummary& summary);
void print_summary(std::ostream& out, const EvalSummary& summary);

// One attribute's slice of a belief key: either a quantized probability
// vector of `size` entries or a single exact value with `size` states.
struct KeySegment {
  bool quantized = true;
  int size = 0;

  bool operator==(const KeySegment&) const = default;
};

// Self-contained greedy policy: the trained table plus everything needed to
// rebuild its keys (method, quantization, revision hyperparameters, bias).
struct Policy {
  MethodVariant method = MethodVariant::kNormal;
  double quant_step = 0.1;
  double beta = 0.5;
  double r = 1.0;
  double threshold = 0.2;
  std::vector<KeySegment> layout;   // aligned with the filter attribute space
  std::optional<BiasBeliefs> bias;  // aligned with layout when present
  QTable table;
};

Policy make_policy(MethodVariant method, const Hyperparams& hp, const GridFilter& filter,
                   const BiasBeliefs* bias, QTable table);

// Versioned text format, lossless double round-trip, entries sorted by key.
void save_policy(const Policy& policy, const std::filesystem::path& file);
Policy load_policy(const std::filesystem::path& file);

// Evaluation entry point used by the CLI `eval` subcommand.
std::vector<EpisodeRecord> evaluate_policy_file(const Policy& policy, const GridMap& map,
                                                int episodes, std::uint64_t seed);

}  // namespace beliefrev
