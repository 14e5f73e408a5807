#include "beliefrev/types.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

namespace beliefrev {

AttributeSpace::AttributeSpace(std::vector<Attribute> attributes)
    : attributes_(std::move(attributes)) {
  if (attributes_.empty()) throw ConfigError("attribute space needs at least one attribute");
  std::unordered_set<std::string> names;
  for (const auto& attr : attributes_) {
    if (attr.cardinality < 1)
      throw ConfigError("attribute '" + attr.name + "' has cardinality < 1");
    if (!names.insert(attr.name).second)
      throw ConfigError("duplicate attribute name '" + attr.name + "'");
  }
}

int AttributeSpace::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (attributes_[i].name == name) return i;
  return -1;
}

unsigned long long AttributeSpace::joint_size() const {
  unsigned long long product = 1;
  constexpr auto kMax = std::numeric_limits<unsigned long long>::max();
  for (const auto& attr : attributes_) {
    const auto m = static_cast<unsigned long long>(attr.cardinality);
    if (product > kMax / m) return kMax;
    product *= m;
  }
  return product;
}

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ConfigError("distribution must not be empty");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw ConfigError("distribution entries must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexTol)
    throw ConfigError("distribution entries must sum to 1");
}

Distribution Distribution::uniform(int n) {
  if (n < 1) throw ConfigError("uniform distribution needs n >= 1");
  Distribution d;
  d.probs_.assign(n, 1.0 / n);
  return d;
}

Distribution Distribution::one_hot(int n, int index) {
  if (n < 1 || index < 0 || index >= n) throw ConfigError("one_hot index out of range");
  Distribution d;
  d.probs_.assign(n, 0.0);
  d.probs_[index] = 1.0;
  return d;
}

Distribution Distribution::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw ConfigError("weights must not be empty");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("weights must be nonnegative");
    sum += w;
  }
  if (!(sum > 0.0)) throw DegenerateEvidenceError("total weight is zero");
  Distribution d;
  d.probs_ = std::move(weights);
  for (double& p : d.probs_) p /= sum;
  return d;
}

int Distribution::argmax() const {
  int best = 0;
  for (int i = 1; i < size(); ++i)
    if (probs_[i] > probs_[best]) best = i;
  return best;
}

void check_belief(const FactoredBelief& belief, const AttributeSpace& space) {
  if (static_cast<int>(belief.per_attribute.size()) != space.size())
    throw ConfigError("belief has wrong number of attributes");
  for (int i = 0; i < space.size(); ++i)
    if (belief.per_attribute[i].size() != space.attribute(i).cardinality)
      throw ConfigError("belief component '" + space.attribute(i).name +
                        "' has wrong cardinality");
}

}  // namespace beliefrev
