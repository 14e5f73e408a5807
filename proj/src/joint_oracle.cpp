#include "beliefrev/joint_oracle.hpp"

#include <string>

namespace beliefrev {

std::size_t joint_index(const AttributeSpace& space, std::span<const int> values) {
  if (static_cast<int>(values.size()) != space.size())
    throw ConfigError("joint value tuple has wrong length");
  std::size_t index = 0;
  for (int i = 0; i < space.size(); ++i) {
    const int m = space.attribute(i).cardinality;
    if (values[i] < 0 || values[i] >= m) throw ConfigError("joint value out of range");
    index = index * m + values[i];
  }
  return index;
}

std::vector<int> joint_values(const AttributeSpace& space, std::size_t index) {
  std::vector<int> values(space.size());
  for (int i = space.size() - 1; i >= 0; --i) {
    const int m = space.attribute(i).cardinality;
    values[i] = static_cast<int>(index % m);
    index /= m;
  }
  return values;
}

std::vector<double> joint_filter_update(const std::vector<double>& prior,
                                        const Matrix& transition,
                                        std::span<const double> obs_likelihood,
                                        unsigned long long limit) {
  const std::size_t n = prior.size();
  if (n == 0) throw ConfigError("joint prior must not be empty");
  if (static_cast<unsigned long long>(n) > limit)
    throw ConfigError("joint state space of size " + std::to_string(n) +
                      " exceeds the oracle limit of " + std::to_string(limit));
  if (transition.rows() != static_cast<int>(n) || transition.cols() != static_cast<int>(n))
    throw ConfigError("joint transition does not match the state space");
  if (obs_likelihood.size() != n)
    throw ConfigError("joint observation likelihood does not match the state space");

  std::vector<double> weights(n, 0.0);
  for (std::size_t prev = 0; prev < n; ++prev) {
    const double mass = prior[prev];
    if (mass == 0.0) continue;
    for (std::size_t next = 0; next < n; ++next)
      weights[next] += transition(static_cast<int>(prev), static_cast<int>(next)) * mass;
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    weights[s] *= obs_likelihood[s];
    sum += weights[s];
  }
  if (!(sum > 0.0))
    throw DegenerateEvidenceError("observation contradicts the joint predicted belief");
  for (double& w : weights) w /= sum;
  return weights;
}

Distribution joint_marginal(const std::vector<double>& joint, const AttributeSpace& space,
                            int attr) {
  if (attr < 0 || attr >= space.size()) throw ConfigError("marginal attribute out of range");
  if (joint.size() != space.joint_size())
    throw ConfigError("joint vector does not match the attribute space");
  std::vector<double> out(space.attribute(attr).cardinality, 0.0);
  // Stride of the attribute in the row-major layout (last attribute fastest).
  std::size_t stride = 1;
  for (int i = space.size() - 1; i > attr; --i) stride *= space.attribute(i).cardinality;
  const std::size_t m = space.attribute(attr).cardinality;
  for (std::size_t s = 0; s < joint.size(); ++s) out[(s / stride) % m] += joint[s];
  return Distribution::from_weights(std::move(out));
}

std::vector<double> joint_from_factored(const FactoredBelief& belief,
                                        const AttributeSpace& space) {
  check_belief(belief, space);
  const std::size_t n = space.joint_size();
  std::vector<double> joint(n, 1.0);
  for (std::size_t s = 0; s < n; ++s) {
    const auto values = joint_values(space, s);
    for (int i = 0; i < space.size(); ++i) joint[s] *= belief.per_attribute[i][values[i]];
  }
  return joint;
}

Matrix joint_transition_product(const AttributeSpace& space,
                                const std::vector<Matrix>& per_attribute) {
  if (static_cast<int>(per_attribute.size()) != space.size())
    throw ConfigError("need one transition table per attribute");
  const auto n = space.joint_size();
  if (n > kJointStateLimit) throw ConfigError("joint state space exceeds the oracle limit");
  Matrix joint(static_cast<int>(n), static_cast<int>(n), 1.0);
  for (std::size_t prev = 0; prev < n; ++prev) {
    const auto pv = joint_values(space, prev);
    for (std::size_t next = 0; next < n; ++next) {
      const auto nv = joint_values(space, next);
      double p = 1.0;
      for (int i = 0; i < space.size(); ++i) p *= per_attribute[i](pv[i], nv[i]);
      joint(static_cast<int>(prev), static_cast<int>(next)) = p;
    }
  }
  return joint;
}

std::vector<double> joint_likelihood_product(
    const AttributeSpace& space, const std::vector<std::vector<double>>& per_attribute) {
  if (static_cast<int>(per_attribute.size()) != space.size())
    throw ConfigError("need one likelihood vector per attribute");
  const auto n = space.joint_size();
  if (n > kJointStateLimit) throw ConfigError("joint state space exceeds the oracle limit");
  std::vector<double> joint(n, 1.0);
  for (std::size_t s = 0; s < n; ++s) {
    const auto values = joint_values(space, s);
    for (int i = 0; i < space.size(); ++i) joint[s] *= per_attribute[i][values[i]];
  }
  return joint;
}

}  // namespace beliefrev
