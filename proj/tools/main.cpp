// Command line front end: knowledge generation, single training runs, policy
// evaluation, and the full method comparison.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "beliefrev/experiment.hpp"

namespace {

namespace fs = std::filesystem;
using namespace beliefrev;

ExperimentConfig load_config_or_default(const std::string& config_file) {
  if (config_file.empty()) return ExperimentConfig{};
  return ExperimentConfig::load(config_file);
}

int cmd_gen_knowledge(const std::string& map_file, const std::string& out_dir) {
  const GridMap map = GridMap::load(map_file);
  std::vector<std::string> warnings;
  const KnowledgeBase kb = derive_knowledge_from_map(map, &warnings);
  for (const auto& warning : warnings) std::cerr << "warning: " << warning << "\n";
  save_knowledge_dir(kb, out_dir);
  std::cout << "wrote " << kb.matrices().size() << " knowledge matrices to " << out_dir
            << "\n";
  return 0;
}

int cmd_train(const std::string& config_file, const std::string& map_file,
              const std::string& knowledge_dir, const std::string& method_name,
              std::optional<std::uint64_t> seed, const std::string& out_dir) {
  ExperimentConfig config = load_config_or_default(config_file);
  const MethodVariant method = method_from_string(method_name);
  if (seed.has_value()) config.hp.seed = *seed;
  config.hp.validate();

  const GridMap map = GridMap::load(map_file);
  std::optional<KnowledgeBase> kb;
  if (method_uses_knowledge(method)) {
    if (knowledge_dir.empty())
      throw ConfigError("method '" + method_name + "' needs --knowledge");
    kb = load_knowledge_dir(knowledge_dir);
  }

  const TrainResult trained = train(config.hp, map, kb ? &*kb : nullptr, method);

  fs::create_directories(out_dir);
  const std::string stem = method_name + "_seed" + std::to_string(config.hp.seed);
  write_episode_csv(fs::path(out_dir) / (stem + ".csv"), trained.curve);

  const GridFilter filter = build_grid_filter(map);
  std::optional<BiasBeliefs> bias;
  if (kb.has_value()) bias = align_bias(compute_bias_beliefs(*kb, filter.model.space),
                                        filter.model);
  save_policy(make_policy(method, config.hp, filter, bias ? &*bias : nullptr, trained.table),
              fs::path(out_dir) / (stem + ".policy"));
  config.methods = {method};
  config.seeds = {config.hp.seed};
  config.out_dir = out_dir;
  config.save(fs::path(out_dir) / "effective_config.cfg");

  std::cout << "trained " << method_name << " for " << trained.curve.size()
            << " episodes; Q-table entries: " << trained.table.size() << "\n";
  return 0;
}

int cmd_eval(const std::string& policy_file, const std::string& map_file, int episodes,
             std::uint64_t seed) {
  const Policy policy = load_policy(policy_file);
  const GridMap map = GridMap::load(map_file);
  const auto records = evaluate_policy_file(policy, map, episodes, seed);
  const EvalRow row = summarize(policy.method, records);
  EvalSummary summary;
  summary.rows.push_back(row);
  print_summary(std::cout, summary);
  return 0;
}

int cmd_compare(const std::string& config_file, const std::string& map_file,
                const std::string& knowledge_dir, const std::string& out_dir, int threads) {
  ExperimentConfig config = load_config_or_default(config_file);
  if (!out_dir.empty()) config.out_dir = out_dir;
  config.validate();

  const GridMap map = GridMap::load(map_file);
  std::optional<KnowledgeBase> kb;
  const bool needs_knowledge =
      std::any_of(config.methods.begin(), config.methods.end(), method_uses_knowledge);
  if (needs_knowledge) {
    if (knowledge_dir.empty())
      throw ConfigError("the configured methods need --knowledge");
    kb = load_knowledge_dir(knowledge_dir);
  }

  ComparisonOptions options;
  options.out_dir = config.out_dir;
  options.write_outputs = true;
  options.threads = threads;
  const ComparisonResult result = run_comparison(config, map, kb ? &*kb : nullptr, options);
  print_summary(std::cout, result.summary);
  std::cout << "outputs written to " << config.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beliefrev: knowledge-guided belief filtering and Q-learning on the "
               "object-fetching gridworld"};
  app.require_subcommand(1);

  std::string map_file, config_file, knowledge_dir, out_dir, method_name, policy_file;
  std::optional<std::uint64_t> seed_opt;
  std::uint64_t eval_seed = 0;
  int episodes = 1000;
  int threads = 0;

  auto* gen = app.add_subcommand("gen-knowledge",
                                 "Derive pairwise conditional-probability matrices from a map");
  gen->add_option("--map", map_file, "Map file")->required();
  gen->add_option("--out", out_dir, "Output directory")->required();

  auto* train_cmd = app.add_subcommand("train", "Train one method on one seed");
  train_cmd->add_option("--config", config_file, "Config file (defaults when omitted)");
  train_cmd->add_option("--map", map_file, "Map file")->required();
  train_cmd->add_option("--knowledge", knowledge_dir, "Knowledge matrix directory");
  train_cmd->add_option("--method", method_name, "normal|bias_init|bias_combine|jeffrey|proposed")
      ->required();
  train_cmd->add_option("--seed", seed_opt, "Seed (overrides config)");
  train_cmd->add_option("--out", out_dir, "Output directory")->default_val("out");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a trained policy greedily");
  eval_cmd->add_option("--policy", policy_file, "Policy file")->required();
  eval_cmd->add_option("--map", map_file, "Map file")->required();
  eval_cmd->add_option("--episodes", episodes, "Evaluation episodes")->default_val(1000);
  eval_cmd->add_option("--seed", eval_seed, "Evaluation seed")->default_val(0);

  auto* compare_cmd =
      app.add_subcommand("compare", "Train and evaluate every configured method and seed");
  compare_cmd->add_option("--config", config_file, "Config file (defaults when omitted)");
  compare_cmd->add_option("--map", map_file, "Map file")->required();
  compare_cmd->add_option("--knowledge", knowledge_dir, "Knowledge matrix directory");
  compare_cmd->add_option("--out", out_dir, "Output directory (overrides config)");
  compare_cmd->add_option("--threads", threads, "Worker threads (0 = auto)")->default_val(0);

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen_knowledge(map_file, out_dir);
    if (train_cmd->parsed())
      return cmd_train(config_file, map_file, knowledge_dir, method_name, seed_opt, out_dir);
    if (eval_cmd->parsed()) return cmd_eval(policy_file, map_file, episodes, eval_seed);
    if (compare_cmd->parsed())
      return cmd_compare(config_file, map_file, knowledge_dir, out_dir, threads);
    return 1;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 1;
  } catch (const beliefrev::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
