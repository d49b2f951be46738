#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cgw/class_probs.hpp"
#include "cgw/events.hpp"
#include "cgw/measure.hpp"
#include "cgw/rng.hpp"
#include "cgw/tree.hpp"

namespace cgw {

/// Precomputed state for conditioned sampling: the event, the model, the
/// class tables, and inclusive-prefix CDFs over every conditional cell.
/// Immutable after construction; one context serves any number of draws and
/// threads.
struct SamplerContext {
  Event event;
  GwParams<double> params;
  ClassTables<double> tables;
  /// Prefix sums over tables.cond.cell(l, t, i) masses, same indexing.
  std::vector<std::vector<double>> cond_cdf;
  /// Prefix sums over tables.base.cell(t, i) masses.
  std::vector<std::vector<double>> base_cdf;

  int num_types() const { return tables.probs.num_types; }
  int num_classes() const { return tables.probs.num_classes; }
};

SamplerContext make_sampler_context(Event event, GwParams<double> params,
                                    std::uint64_t enumeration_guard = 1'000'000);

/// Plain draw from the unconditioned measure rooted at (type, level); child
/// types are placed uniformly at random over the distinct orderings.
TypedTree sample_unconditioned(const GwParams<double>& params, int root_type,
                               int level, RngStream& rng);

/// Draw from the measure conditioned on the root's subtree lying in class
/// `target_class`; throws ImpossibleEventError when that class has
/// probability zero.
TypedTree sample_conditioned_class(const SamplerContext& ctx, int root_type,
                                   int level, int target_class, RngStream& rng);

/// Two-stage draw of the unconditioned measure: pick a class by its
/// probability, then a conditioned tree within it.  Returns (class, tree).
std::pair<int, TypedTree> sample_tilde(const SamplerContext& ctx, int root_type,
                                       int level, RngStream& rng);

/// One conditional offspring draw at (root_type, level, target_class):
/// returns (child counts by type, counting matrix by class and type).
std::pair<CountVector, CountMatrix> draw_wx_conditioned(
    const SamplerContext& ctx, int root_type, int level, int target_class,
    RngStream& rng);

/// Rejection-based reference for draw_wx_conditioned: draw W from the model,
/// spread children over classes by the next layer's probabilities, retry
/// until the matrix classifies into target_class.  Refuses (throws) when the
/// class probability is below min_class_prob.
std::pair<CountVector, CountMatrix> draw_wx_rejection(
    const SamplerContext& ctx, int root_type, int level, int target_class,
    RngStream& rng, double min_class_prob = 1e-6);

}  // namespace cgw
