#include "beliefrev/learner.hpp"

#include <algorithm>
#include <cmath>

namespace beliefrev {

MethodVariant method_from_string(const std::string& name) {
  if (name == "normal") return MethodVariant::kNormal;
  if (name == "bias_init") return MethodVariant::kBiasInit;
  if (name == "bias_combine") return MethodVariant::kBiasCombine;
  if (name == "jeffrey") return MethodVariant::kJeffrey;
  if (name == "proposed") return MethodVariant::kProposed;
  throw ConfigError("unknown method '" + name + "'");
}

std::string to_string(MethodVariant variant) {
  switch (variant) {
    case MethodVariant::kNormal: return "normal";
    case MethodVariant::kBiasInit: return "bias_init";
    case MethodVariant::kBiasCombine: return "bias_combine";
    case MethodVariant::kJeffrey: return "jeffrey";
    case MethodVariant::kProposed: return "proposed";
  }
  throw Error("invalid method variant");
}

const std::vector<MethodVariant>& all_methods() {
  static const std::vector<MethodVariant> methods = {
      MethodVariant::kNormal, MethodVariant::kBiasInit, MethodVariant::kBiasCombine,
      MethodVariant::kJeffrey, MethodVariant::kProposed};
  return methods;
}

bool method_uses_knowledge(MethodVariant variant) {
  return variant != MethodVariant::kNormal;
}

void Hyperparams::validate() const {
  if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("alpha must lie in (0, 1]");
  if (!(alpha_decay > 0.0) || alpha_decay > 1.0)
    throw ConfigError("alpha_decay must lie in (0, 1]");
  if (decay_every < 1) throw ConfigError("decay_every must be at least 1");
  if (!(gamma >= 0.0) || gamma > 1.0) throw ConfigError("gamma must lie in [0, 1]");
  if (!(beta >= 0.0) || beta > 1.0) throw ConfigError("beta must lie in [0, 1]");
  if (r == 0.0 || !std::isfinite(r)) throw ConfigError("r must be finite and nonzero");
  if (!(threshold >= 0.0)) throw ConfigError("threshold must be nonnegative");
  if (!(quant_step > 0.0) || quant_step > 1.0)
    throw ConfigError("quant_step must lie in (0, 1]");
  if (1.0 / quant_step > 250.0)
    throw ConfigError("quant_step is too fine for the key encoding");
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
  if (episodes < 0) throw ConfigError("episodes must be nonnegative");
  if (!(epsilon_start >= 0.0) || epsilon_start > 1.0)
    throw ConfigError("epsilon_start must lie in [0, 1]");
  if (!(epsilon_end >= 0.0) || epsilon_end > epsilon_start)
    throw ConfigError("epsilon_end must lie in [0, epsilon_start]");
  if (!(epsilon_decay > 0.0) || epsilon_decay > 1.0)
    throw ConfigError("epsilon_decay must lie in (0, 1]");
}

double epsilon_at(const Hyperparams& hp, int episode) {
  return std::max(hp.epsilon_end, hp.epsilon_start * std::pow(hp.epsilon_decay, episode));
}

double alpha_after(const Hyperparams& hp, int completed) {
  double alpha = hp.alpha;
  for (int e = hp.decay_every; e <= completed; e += hp.decay_every) alpha *= hp.alpha_decay;
  return alpha;
}

BeliefKey make_belief_key(const FactoredBelief& belief, const FilterModel& model,
                          double quant_step) {
  check_belief(belief, model.space);
  BeliefKey key;
  key.reserve(40);
  for (int i = 0; i < model.space.size(); ++i) {
    const auto& d = belief.per_attribute[i];
    if (model.fully_observable[i]) {
      key.push_back(static_cast<char>(d.argmax()));
      continue;
    }
    for (int q : quantize(d, quant_step)) key.push_back(static_cast<char>(q));
  }
  return key;
}

std::array<double, kNumActions> QTable::values(const BeliefKey& key) const {
  const auto it = table_.find(key);
  if (it == table_.end()) return {};
  return it->second;
}

void QTable::update(const BeliefKey& key, int action, double reward,
                    const BeliefKey& next_key, bool terminal, double alpha, double gamma) {
  double next_max = 0.0;
  if (!terminal) {
    const auto it = table_.find(next_key);
    if (it != table_.end())
      next_max = *std::max_element(it->second.begin(), it->second.end());
  }
  auto& entry = table_[key];
  entry[action] += alpha * (reward + gamma * next_max - entry[action]);
}

void QTable::insert_raw(BeliefKey key, std::array<double, kNumActions> values) {
  table_[std::move(key)] = values;
}

Action select_action(const QTable& table, const BeliefKey& key, double epsilon, Rng& rng) {
  if (epsilon > 0.0 && rng.next_double() < epsilon)
    return static_cast<Action>(rng.next_int(kNumActions));
  const auto values = table.values(key);
  int best = 0;
  for (int a = 1; a < kNumActions; ++a)
    if (values[a] > values[best]) best = a;
  return static_cast<Action>(best);
}

BiasBeliefs align_bias(const std::map<std::string, AttributeBias>& by_name,
                       const FilterModel& model) {
  BiasBeliefs bias;
  bias.per_attribute.resize(model.space.size());
  for (int i = 0; i < model.space.size(); ++i) {
    const auto it = by_name.find(model.space.attribute(i).name);
    if (it == by_name.end()) continue;
    if (it->second.bias.size() != model.space.attribute(i).cardinality)
      throw ConfigError("bias for attribute '" + model.space.attribute(i).name +
                        "' does not match its cardinality");
    bias.per_attribute[i] = it->second.bias;
  }
  return bias;
}

namespace {

FactoredBelief initial_belief(const RobotState& start, const FilterModel& model,
                              const BiasBeliefs* bias, MethodVariant variant) {
  FactoredBelief belief;
  belief.per_attribute.reserve(model.space.size());
  for (int i = 0; i < model.space.size(); ++i) {
    const int m = model.space.attribute(i).cardinality;
    if (model.fully_observable[i]) {
      const int value = i == GridFilter::kAttrDir ? static_cast<int>(start.dir)
                                                  : (start.holding ? 1 : 0);
      belief.per_attribute.push_back(Distribution::one_hot(m, value));
    } else if (variant == MethodVariant::kBiasInit && bias != nullptr &&
               bias->per_attribute[i].has_value()) {
      belief.per_attribute.push_back(*bias->per_attribute[i]);
    } else {
      belief.per_attribute.push_back(Distribution::uniform(m));
    }
  }
  return belief;
}

// Per-turn revision toward the bias; which ops run is exactly what tells the
// five variants apart. The revised belief drives action selection and the
// Q-table key; the filtered chain itself stays untouched, matching the
// update recursion being written over the unrevised belief.
FactoredBelief revise_belief(const FactoredBelief& belief, const BiasBeliefs& bias,
                             MethodVariant variant, const FilterModel& model,
                             const Hyperparams& hp, EpisodeRecord& record) {
  const bool jeffrey = variant == MethodVariant::kJeffrey ||
                       variant == MethodVariant::kProposed;
  const bool combine = variant == MethodVariant::kBiasCombine ||
                       variant == MethodVariant::kProposed;
  if (!jeffrey && !combine) return belief;
  FactoredBelief revised = belief;
  for (int i = 0; i < model.space.size(); ++i) {
    if (model.fully_observable[i] || !bias.per_attribute[i].has_value()) continue;
    const Distribution& b_star = *bias.per_attribute[i];
    if (jeffrey) {
      revised.per_attribute[i] =
          jeffrey_revision(b_star, revised.per_attribute[i], hp.threshold, hp.beta, hp.r);
      ++record.jeffrey_applications;
    }
    if (combine) {
      revised.per_attribute[i] =
          rnorm_combine(revised.per_attribute[i], b_star, hp.beta, hp.r);
      ++record.rnorm_applications;
    }
  }
  return revised;
}

}  // namespace

EpisodeRecord run_episode(Environment& env, const GridFilter& filter,
                          const BiasBeliefs* bias, MethodVariant variant, QTable& table,
                          const Hyperparams& hp, double alpha, double epsilon, Rng& rng,
                          bool learning) {
  if (method_uses_knowledge(variant) && bias == nullptr)
    throw ConfigError("method '" + to_string(variant) + "' needs bias beliefs");
  const FilterModel& model = filter.model;

  RobotState state = env.reset();
  FactoredBelief belief = initial_belief(state, model, bias, variant);
  EpisodeRecord record;
  BeliefKey key =
      bias != nullptr
          ? make_belief_key(revise_belief(belief, *bias, variant, model, hp, record), model,
                            hp.quant_step)
          : make_belief_key(belief, model, hp.quant_step);

  std::array<int, 5> obs_values{};
  while (record.steps < hp.max_steps) {
    const Action action = select_action(table, key, epsilon, rng);
    const Direction heading_before = state.dir;
    const StepResult result = env.step(action);
    const Observation obs = env.observe(rng);

    obs_values = {obs.x, obs.y, obs.area, static_cast<int>(obs.dir), obs.holding ? 1 : 0};
    int fallbacks = 0;
    FactoredBelief next_belief = update_factored_belief(
        belief, GridFilter::filter_action(action, heading_before), obs_values, model,
        EvidencePolicy::kPredictOnDegenerate, &fallbacks);
    record.evidence_fallbacks += fallbacks;

    const BeliefKey next_key =
        bias != nullptr
            ? make_belief_key(revise_belief(next_belief, *bias, variant, model, hp, record),
                              model, hp.quant_step)
            : make_belief_key(next_belief, model, hp.quant_step);
    if (learning)
      table.update(key, static_cast<int>(action), result.reward, next_key, result.terminal,
                   alpha, hp.gamma);

    record.total_reward += result.reward;
    ++record.steps;
    state = result.state;
    belief = std::move(next_belief);
    key = next_key;
    if (result.terminal) {
      record.success = true;
      break;
    }
  }
  return record;
}

TrainResult train(const Hyperparams& hp, const GridMap& map, const KnowledgeBase* kb,
                  MethodVariant variant) {
  hp.validate();
  const GridFilter filter = build_grid_filter(map);

  std::optional<BiasBeliefs> bias;
  if (method_uses_knowledge(variant)) {
    if (kb == nullptr)
      throw ConfigError("method '" + to_string(variant) + "' needs a knowledge base");
    const auto by_name = compute_bias_beliefs(*kb, filter.model.space);
    if (by_name.empty())
      throw ConfigError("knowledge base has no two-way pair over the filter attributes");
    bias = align_bias(by_name, filter.model);
  }

  Environment env(map);
  Rng rng(Rng::derive(hp.seed, 0));
  TrainResult out;
  out.curve.reserve(hp.episodes);
  double alpha = hp.alpha;
  for (int episode = 0; episode < hp.episodes; ++episode) {
    out.curve.push_back(run_episode(env, filter, bias ? &*bias : nullptr, variant, out.table,
                                    hp, alpha, epsilon_at(hp, episode), rng, true));
    if ((episode + 1) % hp.decay_every == 0) alpha *= hp.alpha_decay;
  }
  out.final_alpha = alpha;
  return out;
}

}  // namespace beliefrev
