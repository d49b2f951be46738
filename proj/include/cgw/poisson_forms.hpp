#pragma once

#include <Eigen/Core>

#include "cgw/class_probs.hpp"
#include "cgw/offspring.hpp"

namespace cgw {

/// One backward step of the mutant-at-generation-k class probabilities under
/// the Poisson thinning model, in closed form.  Layers are 2x2 with entry
/// (t-1, i-1); the recursion uses only the class-1 column of the next layer:
///   p^(2)(t) = exp(-mu_t (p_t q1 + (1-p_t) q2)),  p^(1)(t) = 1 - p^(2)(t)
/// where q_j = next(j-1, 0).
Eigen::Matrix2d closed_form_poisson_step(const Eigen::Matrix2d& next_layer,
                                         const PoissonThinningParams& params);

/// Full table for the mutant event on trees of height <= k, built from the
/// closed-form steps (no support enumeration, no truncation).
ClassProbTable<double> closed_form_poisson_table(
    const PoissonThinningParams& params, int k);

/// Shape-checked variant: requires a Poisson thinning model and a two-class
/// two-type event with the leaf-type base partition (the mutant events).
ClassProbTable<double> closed_form_poisson_table(
    const OffspringModel<double>& model, const Event& event);

/// Extinction probability of a single-type Galton-Watson process with
/// Poisson(mean) offspring: the smallest root of s = exp(mean (s - 1)),
/// found to 1e-12.  Returns 1 when mean <= 1.
double extinction_probability(double mean_offspring);

}  // namespace cgw
