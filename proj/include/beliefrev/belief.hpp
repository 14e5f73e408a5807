#pragma once

#include <span>
#include <vector>

#include "beliefrev/matrix.hpp"
#include "beliefrev/types.hpp"

namespace beliefrev {

// Transition-only prediction: the prior pushed through one attribute's
// row-stochastic transition table (entry [previous][next]).
Distribution predict(const Distribution& prior, const Matrix& transition);

// Single-attribute Bayes update. obs_likelihood[v] = P(observation | value v);
// the posterior is likelihood * prediction, renormalized. Throws
// DegenerateEvidenceError when every posterior weight is zero.
Distribution update_attribute_belief(const Distribution& prior, const Matrix& transition,
                                     std::span<const double> obs_likelihood);

// What to do when an observation contradicts the entire predicted belief of
// one attribute.
enum class EvidencePolicy {
  kStrict,               // propagate DegenerateEvidenceError
  kPredictOnDegenerate,  // keep the transition-predicted belief
};

// Tables for one partially observable attribute, indexed by action.
struct AttributeModel {
  std::vector<Matrix> transition;   // [action] M x M, entry [previous][next]
  std::vector<Matrix> observation;  // [action] M x M, entry [value][observed]
};

// Factored filter model over an attribute space. Fully observable attributes
// carry no tables; their beliefs are pinned to the observed value.
struct FilterModel {
  AttributeSpace space;
  std::vector<bool> fully_observable;      // aligned with space
  std::vector<AttributeModel> attributes;  // aligned with space
  int num_actions = 0;

  // Dimension and stochasticity checks; throws ConfigError.
  void validate() const;
};

// Factored Bayes update, one attribute at a time. `observation` holds one
// value per attribute in attribute order. Fully observable attributes come
// back as one-hot vectors at the observed value. `degenerate_count`, when
// given, accumulates how many attributes used the prediction fallback.
FactoredBelief update_factored_belief(const FactoredBelief& belief, int action,
                                      std::span<const int> observation,
                                      const FilterModel& model,
                                      EvidencePolicy policy = EvidencePolicy::kStrict,
                                      int* degenerate_count = nullptr);

// Rounds each probability to the nearest multiple of `step` (ties round up)
// and returns the integer multiples. Quantization is only ever used to build
// lookup keys; the belief itself is never quantized in place.
std::vector<int> quantize(const Distribution& d, double step = 0.1);
std::vector<int> quantize(const FactoredBelief& b, double step = 0.1);

}  // namespace beliefrev
