#include "cgw/poisson_forms.hpp"

#include <algorithm>
#include <cmath>

#include "cgw/errors.hpp"

namespace cgw {

Eigen::Matrix2d closed_form_poisson_step(const Eigen::Matrix2d& next_layer,
                                         const PoissonThinningParams& params) {
  Eigen::Matrix2d out;
  const double q1 = next_layer(0, 0);
  const double q2 = next_layer(1, 0);
  const double mu[2] = {params.mu1, params.mu2};
  const double p[2] = {params.p1, params.p2};
  for (int t = 0; t < 2; ++t) {
    const double none = std::exp(-mu[t] * (p[t] * q1 + (1 - p[t]) * q2));
    out(t, 0) = 1 - none;
    out(t, 1) = none;
  }
  return out;
}

ClassProbTable<double> closed_form_poisson_table(
    const PoissonThinningParams& params, int k) {
  if (k < 0) throw DomainError("closed_form_poisson_table: negative k");
  ClassProbTable<double> table;
  table.k = k;
  table.base_height = 0;
  table.num_classes = 2;
  table.num_types = 2;
  table.layers.resize(static_cast<std::size_t>(k) + 1);
  Eigen::Matrix2d layer;
  layer << 1, 0, 0, 1;  // a type-t leaf is in class t
  table.layers[static_cast<std::size_t>(k)] = layer;
  for (int l = k - 1; l >= 0; --l) {
    layer = closed_form_poisson_step(layer, params);
    table.layers[static_cast<std::size_t>(l)] = layer;
  }
  return table;
}

ClassProbTable<double> closed_form_poisson_table(
    const OffspringModel<double>& model, const Event& event) {
  if (!model.poisson_params())
    throw DomainError(
        "closed_form_poisson_table: model is not Poisson thinning");
  const RecursivePartition& part = event.partition;
  if (part.num_classes() != 2 || part.num_types() != 2 ||
      part.base_height() != 0)
    throw DomainError(
        "closed_form_poisson_table: event is not a two-class two-type event "
        "with a leaf base layer");
  for (int t = 1; t <= 2; ++t)
    if (part.classify_base(TypedTree{t, {}}) != t)
      throw DomainError(
          "closed_form_poisson_table: base layer must classify leaves by type");
  // The closed form hinges on class 1 propagating through any child in
  // class 1; spot-check that against the event's own predicates.
  const int probe_level = std::max(1, event.tree_height);
  CountMatrix c = CountMatrix::Zero(2, 2);
  for (int j = 0; j < 2; ++j) {
    c.setZero();
    c(0, j) = 1;
    if (part.classify_matrix(probe_level, c) != 1)
      throw DomainError(
          "closed_form_poisson_table: event does not propagate class 1 "
          "through class-1 children");
  }
  c.setZero();
  c(1, 0) = 2;
  c(1, 1) = 3;
  if (part.classify_matrix(probe_level, c) != 2)
    throw DomainError(
        "closed_form_poisson_table: event does not assign class 2 to "
        "class-2-only offspring");
  return closed_form_poisson_table(*model.poisson_params(), event.tree_height);
}

double extinction_probability(double mean_offspring) {
  if (!(mean_offspring > 0))
    throw DomainError("extinction_probability: mean must be positive");
  if (mean_offspring <= 1) return 1.0;
  const auto f = [mean_offspring](double s) {
    return std::exp(mean_offspring * (s - 1)) - s;
  };
  // f(0) > 0 and f < 0 just left of the trivial root at 1; bracket and bisect.
  double lo = 0.0;
  double hi = 1.0;
  for (int j = 1; j < 60; ++j) {
    const double candidate = 1.0 - std::ldexp(1.0, -j);
    if (f(candidate) < 0) {
      hi = candidate;
      break;
    }
    lo = candidate;
  }
  if (f(hi) >= 0)
    throw Error("extinction_probability: failed to bracket the root");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  // Newton polish to push past bisection granularity.
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 5; ++it) {
    const double e = std::exp(mean_offspring * (s - 1));
    const double deriv = mean_offspring * e - 1;
    if (deriv == 0) break;
    s -= (e - s) / deriv;
  }
  return s;
}

}  // namespace cgw
