#include "beliefrev/belief.hpp"

#include <cmath>
#include <string>

namespace beliefrev {

namespace {

void check_transition(const Distribution& prior, const Matrix& transition) {
  if (transition.rows() != prior.size() || transition.cols() != prior.size())
    throw ConfigError("transition table does not match the distribution size");
}

}  // namespace

Distribution predict(const Distribution& prior, const Matrix& transition) {
  check_transition(prior, transition);
  const int n = prior.size();
  std::vector<double> out(n, 0.0);
  for (int prev = 0; prev < n; ++prev) {
    const double mass = prior[prev];
    if (mass == 0.0) continue;
    for (int next = 0; next < n; ++next) out[next] += transition(prev, next) * mass;
  }
  return Distribution::from_weights(std::move(out));
}

Distribution update_attribute_belief(const Distribution& prior, const Matrix& transition,
                                     std::span<const double> obs_likelihood) {
  check_transition(prior, transition);
  const int n = prior.size();
  if (static_cast<int>(obs_likelihood.size()) != n)
    throw ConfigError("observation likelihood does not match the distribution size");

  std::vector<double> weights(n, 0.0);
  double sum = 0.0;
  for (int next = 0; next < n; ++next) {
    double predicted = 0.0;
    for (int prev = 0; prev < n; ++prev) predicted += transition(prev, next) * prior[prev];
    const double like = obs_likelihood[next];
    if (!(like >= 0.0)) throw ConfigError("observation likelihoods must be nonnegative");
    weights[next] = like * predicted;
    sum += weights[next];
  }
  if (!(sum > 0.0))
    throw DegenerateEvidenceError("observation contradicts the predicted belief");
  for (double& w : weights) w /= sum;
  return Distribution(std::move(weights));
}

void FilterModel::validate() const {
  const int n = space.size();
  if (n < 1) throw ConfigError("filter model needs a populated attribute space");
  if (static_cast<int>(fully_observable.size()) != n ||
      static_cast<int>(attributes.size()) != n)
    throw ConfigError("filter model arrays do not match the attribute space");
  if (num_actions < 1) throw ConfigError("filter model needs at least one action");
  for (int i = 0; i < n; ++i) {
    if (fully_observable[i]) continue;
    const auto& attr = attributes[i];
    const int m = space.attribute(i).cardinality;
    if (static_cast<int>(attr.transition.size()) != num_actions ||
        static_cast<int>(attr.observation.size()) != num_actions)
      throw ConfigError("attribute '" + space.attribute(i).name +
                        "' is missing per-action tables");
    for (int a = 0; a < num_actions; ++a) {
      const auto& t = attr.transition[a];
      const auto& z = attr.observation[a];
      if (t.rows() != m || t.cols() != m || z.rows() != m || z.cols() != m)
        throw ConfigError("table dimensions for attribute '" + space.attribute(i).name +
                          "' do not match its cardinality");
      if (!t.row_stochastic(kSimplexTol) || !z.row_stochastic(kSimplexTol))
        throw ConfigError("tables for attribute '" + space.attribute(i).name +
                          "' must be row-stochastic");
    }
  }
}

FactoredBelief update_factored_belief(const FactoredBelief& belief, int action,
                                      std::span<const int> observation,
                                      const FilterModel& model, EvidencePolicy policy,
                                      int* degenerate_count) {
  const int n = model.space.size();
  check_belief(belief, model.space);
  if (static_cast<int>(observation.size()) != n)
    throw ConfigError("observation has wrong number of attributes");
  if (action < 0 || action >= model.num_actions) throw ConfigError("action id out of range");

  FactoredBelief out;
  out.per_attribute.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int m = model.space.attribute(i).cardinality;
    const int obs = observation[i];
    if (obs < 0 || obs >= m)
      throw ConfigError("observation for attribute '" + model.space.attribute(i).name +
                        "' is out of range");
    if (model.fully_observable[i]) {
      out.per_attribute.push_back(Distribution::one_hot(m, obs));
      continue;
    }
    const auto& tables = model.attributes[i];
    const Matrix& transition = tables.transition[action];
    const Matrix& z = tables.observation[action];
    std::vector<double> likelihood(m);
    for (int v = 0; v < m; ++v) likelihood[v] = z(v, obs);
    try {
      out.per_attribute.push_back(
          update_attribute_belief(belief.per_attribute[i], transition, likelihood));
    } catch (const DegenerateEvidenceError&) {
      if (policy == EvidencePolicy::kStrict)
        throw DegenerateEvidenceError("degenerate evidence for attribute '" +
                                          model.space.attribute(i).name + "'",
                                      i);
      out.per_attribute.push_back(predict(belief.per_attribute[i], transition));
      if (degenerate_count != nullptr) ++*degenerate_count;
    }
  }
  return out;
}

std::vector<int> quantize(const Distribution& d, double step) {
  if (!(step > 0.0) || step > 1.0) throw ConfigError("quantization step must be in (0, 1]");
  std::vector<int> out(d.size());
  for (int i = 0; i < d.size(); ++i) {
    // Half-up rounding; the 1e-9 nudge keeps decimal ties (0.25 / 0.1) from
    // landing just below .5 in binary.
    out[i] = static_cast<int>(std::floor(d[i] / step + 0.5 + 1e-9));
  }
  return out;
}

std::vector<int> quantize(const FactoredBelief& b, double step) {
  std::vector<int> out;
  for (const auto& d : b.per_attribute) {
    const auto part = quantize(d, step);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace beliefrev
