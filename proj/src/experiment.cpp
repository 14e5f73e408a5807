#include "beliefrev/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "text_format.hpp"

namespace beliefrev {

using detail::format_double;
using detail::parse_double;
using detail::parse_int;
using detail::trim;

// --- configuration -----------------------------------------------------------

void ExperimentConfig::validate() const {
  hp.validate();
  if (methods.empty()) throw ConfigError("config needs at least one method");
  if (seeds.empty()) throw ConfigError("config needs at least one seed");
  if (eval_episodes < 1) throw ConfigError("eval_episodes must be at least 1");
  for (std::size_t i = 0; i < methods.size(); ++i)
    for (std::size_t j = i + 1; j < methods.size(); ++j)
      if (methods[i] == methods[j])
        throw ConfigError("duplicate method '" + to_string(methods[i]) + "'");
  for (std::size_t i = 0; i < seeds.size(); ++i)
    for (std::size_t j = i + 1; j < seeds.size(); ++j)
      if (seeds[i] == seeds[j])
        throw ConfigError("duplicate seed " + std::to_string(seeds[i]));
  if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

namespace {

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> items;
  while (!value.empty()) {
    const auto comma = value.find(',');
    items.push_back(trim(value.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return items;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + " is not 'key = value'");
    const std::string key(trim(stripped.substr(0, eq)));
    const std::string_view value = trim(stripped.substr(eq + 1));

    if (key == "alpha") {
      config.hp.alpha = parse_double(value, key);
    } else if (key == "alpha_decay") {
      config.hp.alpha_decay = parse_double(value, key);
    } else if (key == "decay_every") {
      config.hp.decay_every = static_cast<int>(parse_int(value, key));
    } else if (key == "gamma") {
      config.hp.gamma = parse_double(value, key);
    } else if (key == "beta") {
      config.hp.beta = parse_double(value, key);
    } else if (key == "r") {
      config.hp.r = parse_double(value, key);
    } else if (key == "threshold") {
      config.hp.threshold = parse_double(value, key);
    } else if (key == "quant_step") {
      config.hp.quant_step = parse_double(value, key);
    } else if (key == "max_steps") {
      config.hp.max_steps = static_cast<int>(parse_int(value, key));
    } else if (key == "episodes") {
      config.hp.episodes = static_cast<int>(parse_int(value, key));
    } else if (key == "epsilon_start") {
      config.hp.epsilon_start = parse_double(value, key);
    } else if (key == "epsilon_end") {
      config.hp.epsilon_end = parse_double(value, key);
    } else if (key == "epsilon_decay") {
      config.hp.epsilon_decay = parse_double(value, key);
    } else if (key == "seed") {
      config.hp.seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "methods") {
      config.methods.clear();
      for (const auto item : split_list(value))
        config.methods.push_back(method_from_string(std::string(item)));
    } else if (key == "seeds") {
      config.seeds.clear();
      for (const auto item : split_list(value))
        config.seeds.push_back(static_cast<std::uint64_t>(parse_int(item, key)));
    } else if (key == "eval_episodes") {
      config.eval_episodes = static_cast<int>(parse_int(value, key));
    } else if (key == "out_dir") {
      config.out_dir = std::string(value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  return parse(in);
}

void ExperimentConfig::write(std::ostream& out) const {
  out << "alpha = " << format_double(hp.alpha) << "\n";
  out << "alpha_decay = " << format_double(hp.alpha_decay) << "\n";
  out << "decay_every = " << hp.decay_every << "\n";
  out << "gamma = " << format_double(hp.gamma) << "\n";
  out << "beta = " << format_double(hp.beta) << "\n";
  out << "r = " << format_double(hp.r) << "\n";
  out << "threshold = " << format_double(hp.threshold) << "\n";
  out << "quant_step = " << format_double(hp.quant_step) << "\n";
  out << "max_steps = " << hp.max_steps << "\n";
  out << "episodes = " << hp.episodes << "\n";
  out << "epsilon_start = " << format_double(hp.epsilon_start) << "\n";
  out << "epsilon_end = " << format_double(hp.epsilon_end) << "\n";
  out << "epsilon_decay = " << format_double(hp.epsilon_decay) << "\n";
  out << "seed = " << hp.seed << "\n";
  out << "methods = ";
  for (std::size_t i = 0; i < methods.size(); ++i)
    out << (i > 0 ? "," : "") << to_string(methods[i]);
  out << "\n";
  out << "seeds = ";
  for (std::size_t i = 0; i < seeds.size(); ++i) out << (i > 0 ? "," : "") << seeds[i];
  out << "\n";
  out << "eval_episodes = " << eval_episodes << "\n";
  out << "out_dir = " << out_dir << "\n";
}

void ExperimentConfig::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw Error("cannot write config file " + file.string());
  write(out);
  if (!out) throw Error("failed writing config file " + file.string());
}

// --- evaluation --------------------------------------------------------------

EvalRow summarize(MethodVariant method, const std::vector<EpisodeRecord>& pooled) {
  EvalRow row;
  row.method = method;
  row.episodes = static_cast<int>(pooled.size());
  if (pooled.empty()) return row;
  double sum = 0.0;
  int successes = 0;
  for (const auto& record : pooled) {
    sum += record.total_reward;
    successes += record.success ? 1 : 0;
  }
  row.mean_reward = sum / row.episodes;
  row.success_rate = static_cast<double>(successes) / row.episodes;
  if (row.episodes > 1) {
    double ss = 0.0;
    for (const auto& record : pooled) {
      const double d = record.total_reward - row.mean_reward;
      ss += d * d;
    }
    row.std_error = std::sqrt(ss / (row.episodes - 1)) / std::sqrt(row.episodes);
  }
  return row;
}

std::vector<EpisodeRecord> evaluate_policy(QTable& table, const GridMap& map,
                                           const GridFilter& filter, const BiasBeliefs* bias,
                                           MethodVariant variant, const Hyperparams& hp,
                                           int episodes, Rng& rng) {
  Environment env(map);
  std::vector<EpisodeRecord> records;
  records.reserve(episodes);
  for (int e = 0; e < episodes; ++e)
    records.push_back(run_episode(env, filter, bias, variant, table, hp, /*alpha=*/0.0,
                                  /*epsilon=*/0.0, rng, /*learning=*/false));
  return records;
}

// --- comparison grid ---------------------------------------------------------

namespace {

struct Cell {
  std::size_t method_index;
  std::size_t seed_index;
};

void write_policy_for_cell(const ExperimentConfig& config, MethodVariant method,
                           const GridFilter& filter, const BiasBeliefs* bias, QTable table,
                           const std::filesystem::path& file) {
  save_policy(make_policy(method, config.hp, filter, bias, std::move(table)), file);
}

}  // namespace

ComparisonResult run_comparison(const ExperimentConfig& config, const GridMap& map,
                                const KnowledgeBase* kb, const ComparisonOptions& options) {
  config.validate();
  for (const MethodVariant method : config.methods)
    if (method_uses_knowledge(method) && (kb == nullptr || kb->empty()))
      throw ConfigError("method '" + to_string(method) +
                        "' needs a knowledge base; none was given");

  // Shared read-only inputs for every cell; bias is solved once up front.
  const GridFilter filter = build_grid_filter(map);
  std::optional<BiasBeliefs> bias;
  const bool any_knowledge =
      std::any_of(config.methods.begin(), config.methods.end(), method_uses_knowledge);
  if (any_knowledge) {
    const auto by_name = compute_bias_beliefs(*kb, filter.model.space);
    if (by_name.empty())
      throw ConfigError("knowledge base has no two-way pair over the filter attributes");
    bias = align_bias(by_name, filter.model);
  }

  std::filesystem::path curves_dir, eval_dir, policy_dir;
  if (options.write_outputs) {
    curves_dir = options.out_dir / "curves";
    eval_dir = options.out_dir / "eval";
    policy_dir = options.out_dir / "policies";
    std::filesystem::create_directories(curves_dir);
    std::filesystem::create_directories(eval_dir);
    std::filesystem::create_directories(policy_dir);
  }

  std::vector<Cell> cells;
  for (std::size_t m = 0; m < config.methods.size(); ++m)
    for (std::size_t s = 0; s < config.seeds.size(); ++s) cells.push_back({m, s});

  ComparisonResult result;
  result.methods.resize(config.methods.size());
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    result.methods[m].method = config.methods[m];
    result.methods[m].seeds.resize(config.seeds.size());
  }

  std::atomic<std::size_t> next_cell{0};
  std::vector<std::exception_ptr> failures(cells.size());
  const auto worker = [&]() {
    while (true) {
      const std::size_t index = next_cell.fetch_add(1);
      if (index >= cells.size()) return;
      const Cell cell = cells[index];
      const MethodVariant method = config.methods[cell.method_index];
      const std::uint64_t seed = config.seeds[cell.seed_index];
      try {
        Hyperparams hp = config.hp;
        hp.seed = seed;
        const BiasBeliefs* cell_bias = method_uses_knowledge(method) ? &*bias : nullptr;
        TrainResult trained = train(hp, map, method_uses_knowledge(method) ? kb : nullptr,
                                    method);
        Rng eval_rng(Rng::derive(seed, 1));
        auto eval_records = evaluate_policy(trained.table, map, filter, cell_bias, method,
                                            hp, config.eval_episodes, eval_rng);
        const std::string stem = to_string(method) + "_seed" + std::to_string(seed);
        if (options.write_outputs) {
          write_episode_csv(curves_dir / (stem + ".csv"), trained.curve);
          write_episode_csv(eval_dir / (stem + ".csv"), eval_records);
          write_policy_for_cell(config, method, filter, cell_bias,
                                std::move(trained.table), policy_dir / (stem + ".policy"));
        }
        auto& slot = result.methods[cell.method_index].seeds[cell.seed_index];
        slot.seed = seed;
        slot.curve = std::move(trained.curve);
        slot.eval_records = std::move(eval_records);
      } catch (...) {
        failures[index] = std::current_exception();
      }
    }
  };

  int thread_count = options.threads > 0
                         ? options.threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  thread_count = std::clamp<int>(thread_count, 1, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  for (const auto& method_result : result.methods) {
    std::vector<EpisodeRecord> pooled;
    pooled.reserve(config.seeds.size() * config.eval_episodes);
    for (const auto& seed_run : method_result.seeds)
      pooled.insert(pooled.end(), seed_run.eval_records.begin(),
                    seed_run.eval_records.end());
    result.summary.rows.push_back(summarize(method_result.method, pooled));
  }

  if (options.write_outputs) {
    emit_curves(result.methods, curves_dir);
    write_summary_csv(options.out_dir / "summary.csv", result.summary);
    config.save(options.out_dir / "effective_config.cfg");
  }
  return result;
}

// --- curve emission ----------------------------------------------------------

std::vector<double> rolling_mean(const std::vector<double>& values, int window) {
  if (window < 1) throw ConfigError("rolling window must be at least 1");
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= static_cast<std::size_t>(window)) sum -= values[i - window];
    const auto count = std::min<std::size_t>(i + 1, window);
    out[i] = sum / static_cast<double>(count);
  }
  return out;
}

void write_episode_csv(const std::filesystem::path& file,
                       const std::vector<EpisodeRecord>& records) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << "episode,reward,steps,success\n";
  for (std::size_t i = 0; i < records.size(); ++i)
    out << i << ',' << format_double(records[i].total_reward) << ',' << records[i].steps
        << ',' << (records[i].success ? 1 : 0) << "\n";
  if (!out) throw Error("failed writing " + file.string());
}

namespace {

constexpr int kRollingWindow = 100;

struct MeanCurve {
  std::vector<double> reward;
  std::vector<double> steps;
  std::vector<double> success;
};

MeanCurve mean_curve(const MethodResult& method) {
  MeanCurve mean;
  if (method.seeds.empty()) return mean;
  const std::size_t episodes = method.seeds.front().curve.size();
  mean.reward.assign(episodes, 0.0);
  mean.steps.assign(episodes, 0.0);
  mean.success.assign(episodes, 0.0);
  for (const auto& seed_run : method.seeds) {
    if (seed_run.curve.size() != episodes)
      throw Error("seed curves have inconsistent lengths");
    for (std::size_t e = 0; e < episodes; ++e) {
      mean.reward[e] += seed_run.curve[e].total_reward;
      mean.steps[e] += seed_run.curve[e].steps;
      mean.success[e] += seed_run.curve[e].success ? 1.0 : 0.0;
    }
  }
  const auto n = static_cast<double>(method.seeds.size());
  for (std::size_t e = 0; e < episodes; ++e) {
    mean.reward[e] /= n;
    mean.steps[e] /= n;
    mean.success[e] /= n;
  }
  return mean;
}

}  // namespace

void emit_curves(const std::vector<MethodResult>& methods, const std::filesystem::path& dir) {
  if (methods.empty()) throw ConfigError("no curves to emit");
  std::filesystem::create_directories(dir);

  for (const auto& method : methods)
    for (const auto& seed_run : method.seeds)
      write_episode_csv(dir / (to_string(method.method) + "_seed" +
                               std::to_string(seed_run.seed) + ".csv"),
                        seed_run.curve);

  std::vector<MeanCurve> means;
  means.reserve(methods.size());
  for (const auto& method : methods) {
    means.push_back(mean_curve(method));
    const auto& mean = means.back();
    std::ofstream out(dir / (to_string(method.method) + "_mean.csv"));
    if (!out) throw Error("cannot write mean curve for " + to_string(method.method));
    out << "episode,reward,steps,success\n";
    for (std::size_t e = 0; e < mean.reward.size(); ++e)
      out << e << ',' << format_double(mean.reward[e]) << ',' << format_double(mean.steps[e])
          << ',' << format_double(mean.success[e]) << "\n";
  }

  std::ofstream combined(dir / "combined.csv");
  if (!combined) throw Error("cannot write combined curve file");
  combined << "episode";
  for (const auto& method : methods)
    combined << ',' << to_string(method.method) << "_reward," << to_string(method.method)
             << "_reward_ma" << kRollingWindow;
  combined << "\n";
  std::vector<std::vector<double>> rolling;
  rolling.reserve(means.size());
  for (const auto& mean : means) rolling.push_back(rolling_mean(mean.reward, kRollingWindow));
  const std::size_t episodes = means.front().reward.size();
  for (std::size_t e = 0; e < episodes; ++e) {
    combined << e;
    for (std::size_t m = 0; m < means.size(); ++m)
      combined << ',' << format_double(means[m].reward[e]) << ','
               << format_double(rolling[m][e]);
    combined << "\n";
  }
}

void write_summary_csv(const std::filesystem::path& file, const EvalSummary& summary) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << "method,episodes,mean_reward,std_error,success_rate\n";
  for (const auto& row : summary.rows)
    out << to_string(row.method) << ',' << row.episodes << ','
        << format_double(row.mean_reward) << ',' << format_double(row.std_error) << ','
        << format_double(row.success_rate) << "\n";
  if (!out) throw Error("failed writing " + file.string());
}

void print_summary(std::ostream& out, const EvalSummary& summary) {
  out << std::left << std::setw(14) << "method" << std::right << std::setw(10) << "episodes"
      << std::setw(14) << "mean_reward" << std::setw(12) << "std_error" << std::setw(14)
      << "success_rate" << "\n";
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::fixed;
  for (const auto& row : summary.rows) {
    out << std::left << std::setw(14) << to_string(row.method) << std::right << std::setw(10)
        << row.episodes << std::setw(14) << std::setprecision(2) << row.mean_reward
        << std::setw(12) << std::setprecision(2) << row.std_error << std::setw(13)
        << std::setprecision(2) << 100.0 * row.success_rate << "%\n";
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

// --- policy files ------------------------------------------------------------

Policy make_policy(MethodVariant method, const Hyperparams& hp, const GridFilter& filter,
                   const BiasBeliefs* bias, QTable table) {
  Policy policy;
  policy.method = method;
  policy.quant_step = hp.quant_step;
  policy.beta = hp.beta;
  policy.r = hp.r;
  policy.threshold = hp.threshold;
  const auto& model = filter.model;
  for (int i = 0; i < model.space.size(); ++i)
    policy.layout.push_back(
        KeySegment{!model.fully_observable[i], model.space.attribute(i).cardinality});
  if (bias != nullptr) policy.bias = *bias;
  policy.table = std::move(table);
  return policy;
}

namespace {

constexpr const char* kPolicyMagic = "beliefrev-policy v1";

int key_bytes(const std::vector<KeySegment>& layout) {
  int total = 0;
  for (const auto& segment : layout) total += segment.quantized ? segment.size : 1;
  return total;
}

}  // namespace

void save_policy(const Policy& policy, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write policy file " + file.string());
  out << kPolicyMagic << "\n";
  out << "method = " << to_string(policy.method) << "\n";
  out << "quant_step = " << format_double(policy.quant_step) << "\n";
  out << "beta = " << format_double(policy.beta) << "\n";
  out << "r = " << format_double(policy.r) << "\n";
  out << "threshold = " << format_double(policy.threshold) << "\n";
  out << "key_layout =";
  for (const auto& segment : policy.layout)
    out << ' ' << (segment.quantized ? 'q' : 'e') << segment.size;
  out << "\n";
  if (policy.bias.has_value()) {
    for (std::size_t i = 0; i < policy.layout.size(); ++i) {
      const auto& maybe = policy.bias->per_attribute[i];
      if (!maybe.has_value()) continue;
      out << "bias " << i << " =";
      for (double p : maybe->probs()) out << ' ' << format_double(p);
      out << "\n";
    }
  }
  out << "entries = " << policy.table.size() << "\n";

  std::vector<const BeliefKey*> keys;
  keys.reserve(policy.table.size());
  for (const auto& [key, values] : policy.table.entries()) keys.push_back(&key);
  std::sort(keys.begin(), keys.end(),
            [](const BeliefKey* a, const BeliefKey* b) { return *a < *b; });
  const int expected_bytes = key_bytes(policy.layout);
  for (const BeliefKey* key : keys) {
    if (static_cast<int>(key->size()) != expected_bytes)
      throw Error("policy table key does not match the layout");
    const auto values = policy.table.values(*key);
    for (char byte : *key) out << static_cast<int>(static_cast<unsigned char>(byte)) << ' ';
    out << ':';
    for (double v : values) out << ' ' << format_double(v);
    out << "\n";
  }
  if (!out) throw Error("failed writing policy file " + file.string());
}

Policy load_policy(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open policy file " + file.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != kPolicyMagic)
    throw ConfigError(file.string() + " is not a beliefrev policy file");

  Policy policy;
  std::vector<std::pair<int, Distribution>> bias_rows;
  long long entries = -1;
  while (std::getline(in, line)) {
    const std::string_view stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("malformed policy header line: " + line);
    const std::string key(trim(stripped.substr(0, eq)));
    const std::string value(trim(stripped.substr(eq + 1)));
    if (key == "method") {
      policy.method = method_from_string(value);
    } else if (key == "quant_step") {
      policy.quant_step = parse_double(value, key);
    } else if (key == "beta") {
      policy.beta = parse_double(value, key);
    } else if (key == "r") {
      policy.r = parse_double(value, key);
    } else if (key == "threshold") {
      policy.threshold = parse_double(value, key);
    } else if (key == "key_layout") {
      std::istringstream tokens(value);
      std::string token;
      while (tokens >> token) {
        if (token.size() < 2 || (token[0] != 'q' && token[0] != 'e'))
          throw ConfigError("malformed key_layout token '" + token + "'");
        policy.layout.push_back(
            KeySegment{token[0] == 'q',
                       static_cast<int>(parse_int(token.substr(1), "key_layout"))});
      }
    } else if (key.rfind("bias ", 0) == 0) {
      const int attr = static_cast<int>(parse_int(key.substr(5), "bias index"));
      std::istringstream tokens(value);
      std::vector<double> probs;
      double p = 0.0;
      while (tokens >> p) probs.push_back(p);
      bias_rows.emplace_back(attr, Distribution(std::move(probs)));
    } else if (key == "entries") {
      entries = parse_int(value, key);
      break;
    } else {
      throw ConfigError("unknown policy header key '" + key + "'");
    }
  }
  if (policy.layout.empty()) throw ConfigError("policy file has no key_layout");
  if (entries < 0) throw ConfigError("policy file has no entries line");

  if (!bias_rows.empty()) {
    BiasBeliefs bias;
    bias.per_attribute.resize(policy.layout.size());
    for (auto& [attr, dist] : bias_rows) {
      if (attr < 0 || attr >= static_cast<int>(policy.layout.size()))
        throw ConfigError("bias index out of range in policy file");
      if (dist.size() != policy.layout[attr].size)
        throw ConfigError("bias length does not match the key layout");
      bias.per_attribute[attr] = std::move(dist);
    }
    policy.bias = std::move(bias);
  }

  const int expected_bytes = key_bytes(policy.layout);
  for (long long e = 0; e < entries; ++e) {
    if (!std::getline(in, line))
      throw ConfigError("policy file ends before entry " + std::to_string(e));
    std::istringstream row{line};
    BeliefKey key;
    key.reserve(expected_bytes);
    for (int b = 0; b < expected_bytes; ++b) {
      int v = 0;
      if (!(row >> v) || v < 0 || v > 255)
        throw ConfigError("malformed policy entry " + std::to_string(e));
      key.push_back(static_cast<char>(v));
    }
    char colon = 0;
    std::array<double, kNumActions> values{};
    if (!(row >> colon) || colon != ':')
      throw ConfigError("malformed policy entry " + std::to_string(e));
    for (double& v : values)
      if (!(row >> v)) throw ConfigError("malformed policy entry " + std::to_string(e));
    policy.table.insert_raw(std::move(key), values);
  }
  return policy;
}

std::vector<EpisodeRecord> evaluate_policy_file(const Policy& policy, const GridMap& map,
                                                int episodes, std::uint64_t seed) {
  if (episodes < 1) throw ConfigError("episodes must be at least 1");
  const GridFilter filter = build_grid_filter(map);
  const auto& model = filter.model;
  if (static_cast<int>(policy.layout.size()) != model.space.size())
    throw ConfigError("policy key layout does not match this map's filter");
  for (int i = 0; i < model.space.size(); ++i) {
    const KeySegment expected{!model.fully_observable[i],
                              model.space.attribute(i).cardinality};
    if (policy.layout[i] != expected)
      throw ConfigError("policy key layout does not match this map's filter");
  }
  if (method_uses_knowledge(policy.method) && !policy.bias.has_value())
    throw ConfigError("policy for method '" + to_string(policy.method) +
                      "' is missing its bias beliefs");

  Hyperparams hp;
  hp.quant_step = policy.quant_step;
  hp.beta = policy.beta;
  hp.r = policy.r;
  hp.threshold = policy.threshold;
  hp.seed = seed;
  hp.validate();

  QTable table = policy.table;
  Rng rng(Rng::derive(seed, 1));
  return evaluate_policy(table, map, filter, policy.bias ? &*policy.bias : nullptr,
                         policy.method, hp, episodes, rng);
}

}  // namespace beliefrev
