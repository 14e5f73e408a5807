#pragma once

#include <string>
#include <vector>

#include "beliefrev/error.hpp"

namespace beliefrev {

// Tolerance for the simplex invariant (entries nonnegative, sum equal to 1).
inline constexpr double kSimplexTol = 1e-9;

struct Attribute {
  std::string name;
  int cardinality = 0;
};

// Ordered collection of named discrete attributes; fixes the factorization
// (number of attributes and each value-space size).
class AttributeSpace {
 public:
  AttributeSpace() = default;  // empty placeholder, filled in later
  explicit AttributeSpace(std::vector<Attribute> attributes);

  int size() const { return static_cast<int>(attributes_.size()); }
  const Attribute& attribute(int i) const { return attributes_[i]; }
  const std::vector<Attribute>& attributes() const { return attributes_; }

  // Index of the named attribute, or -1 when absent.
  int index_of(const std::string& name) const;

  // Product of cardinalities, saturating at the maximum representable value.
  unsigned long long joint_size() const;

  bool operator==(const AttributeSpace&) const = default;

 private:
  std::vector<Attribute> attributes_;
};

// Probability vector over one attribute's values. Validated at construction
// and immutable afterwards.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(int n);
  static Distribution one_hot(int n, int index);

  // Normalizes nonnegative weights into a distribution. Throws
  // DegenerateEvidenceError when the total mass is not positive.
  static Distribution from_weights(std::vector<double> weights);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  // Index of the largest entry; ties resolve to the lowest index.
  int argmax() const;

  bool operator==(const Distribution&) const = default;

 private:
  Distribution() = default;
  std::vector<double> probs_;
};

// One Distribution per attribute, in attribute order.
struct FactoredBelief {
  std::vector<Distribution> per_attribute;

  bool operator==(const FactoredBelief&) const = default;
};

// Throws ConfigError when the belief does not match the space.
void check_belief(const FactoredBelief& belief, const AttributeSpace& space);

}  // namespace beliefrev
