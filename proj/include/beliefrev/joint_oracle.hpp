#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "beliefrev/matrix.hpp"
#include "beliefrev/types.hpp"

namespace beliefrev {

// Brute-force filtering over the full joint state space. Exact but
// exponential; intended for desk-scale cross-checks of the factored
// approximation, and refuses anything larger.
inline constexpr unsigned long long kJointStateLimit = 10000;

// Row-major joint indexing, last attribute fastest.
std::size_t joint_index(const AttributeSpace& space, std::span<const int> values);
std::vector<int> joint_values(const AttributeSpace& space, std::size_t index);

// Exact joint Bayes posterior. `transition` entry [previous][next];
// `obs_likelihood` indexed by joint state. Throws ConfigError when the joint
// space exceeds `limit`, DegenerateEvidenceError when all mass vanishes.
std::vector<double> joint_filter_update(const std::vector<double>& prior,
                                        const Matrix& transition,
                                        std::span<const double> obs_likelihood,
                                        unsigned long long limit = kJointStateLimit);

// Marginal of a joint distribution onto one attribute.
Distribution joint_marginal(const std::vector<double>& joint, const AttributeSpace& space,
                            int attr);

// Product constructions for factored-consistent joint instances.
std::vector<double> joint_from_factored(const FactoredBelief& belief,
                                        const AttributeSpace& space);
Matrix joint_transition_product(const AttributeSpace& space,
                                const std::vector<Matrix>& per_attribute);
std::vector<double> joint_likelihood_product(
    const AttributeSpace& space, const std::vector<std::vector<double>>& per_attribute);

}  // namespace beliefrev
