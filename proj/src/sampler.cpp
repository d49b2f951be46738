#include "cgw/sampler.hpp"

#include <algorithm>
#include <string>

#include "cgw/errors.hpp"

namespace cgw {

namespace {

std::size_t cond_index(const SamplerContext& ctx, int l, int t, int i) {
  return (static_cast<std::size_t>(l) * ctx.num_types() + (t - 1)) *
             ctx.num_classes() +
         (i - 1);
}

std::size_t base_index(const SamplerContext& ctx, int t, int i) {
  return static_cast<std::size_t>(t - 1) * ctx.num_classes() + (i - 1);
}

/// Index into an inclusive-prefix CDF; clamps to the last entry so a stray
/// 1.0 draw cannot fall off the end.
std::size_t cdf_pick(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
  return std::min(idx, cdf.size() - 1);
}

/// Unbiased in-place shuffle; each distinct ordering of a label multiset
/// comes out with probability 1 / (number of distinct orderings).
template <class T>
void shuffle_labels(std::vector<T>& labels, RngStream& rng) {
  for (std::size_t idx = labels.size(); idx > 1; --idx)
    std::swap(labels[idx - 1],
              labels[static_cast<std::size_t>(rng.next_below(idx))]);
}

void check_root_args(const SamplerContext& ctx, int root_type, int level,
                     int target_class) {
  if (root_type < 1 || root_type > ctx.num_types())
    throw DomainError("sampler: root type outside 1..num_types");
  if (target_class < 1 || target_class > ctx.num_classes())
    throw DomainError("sampler: class outside 1..num_classes");
  const int top_level = ctx.params.height - ctx.tables.probs.base_height;
  if (level < 0 || level > top_level)
    throw DomainError("sampler: level outside 0.." + std::to_string(top_level));
}

}  // namespace

SamplerContext make_sampler_context(Event event, GwParams<double> params,
                                    std::uint64_t enumeration_guard) {
  SamplerContext ctx{std::move(event), std::move(params), {}, {}, {}};
  ctx.tables = build_class_tables(ctx.event, ctx.params, enumeration_guard);
  const int m = ctx.num_classes();
  const int theta = ctx.num_types();
  const int levels = ctx.tables.cond.levels();
  ctx.cond_cdf.resize(static_cast<std::size_t>(levels) * theta * m);
  for (int l = 0; l < levels; ++l)
    for (int t = 1; t <= theta; ++t)
      for (int i = 1; i <= m; ++i) {
        auto& cdf = ctx.cond_cdf[cond_index(ctx, l, t, i)];
        double cum = 0;
        for (const auto& atom : ctx.tables.cond.cell(l, t, i)) {
          cum += atom.mass;
          cdf.push_back(cum);
        }
        if (!cdf.empty()) cdf.back() = std::max(cdf.back(), 1.0);
      }
  ctx.base_cdf.resize(static_cast<std::size_t>(theta) * m);
  for (int t = 1; t <= theta; ++t)
    for (int i = 1; i <= m; ++i) {
      auto& cdf = ctx.base_cdf[base_index(ctx, t, i)];
      double cum = 0;
      for (const auto& [tree, mass] : ctx.tables.base.cell(t, i)) {
        cum += mass;
        cdf.push_back(cum);
      }
      if (!cdf.empty()) cdf.back() = std::max(cdf.back(), 1.0);
    }
  return ctx;
}

TypedTree sample_unconditioned(const GwParams<double>& params, int root_type,
                               int level, RngStream& rng) {
  if (root_type < 1 || root_type > params.offspring.num_types())
    throw DomainError("sample_unconditioned: bad root type");
  if (level < 0 || level > params.height)
    throw DomainError("sample_unconditioned: level outside 0..k");
  TypedTree root{root_type, {}};
  struct Frame {
    TypedTree* node;
    int level;
  };
  std::vector<Frame> stack{{&root, level}};
  while (!stack.empty()) {
    auto [node, l] = stack.back();
    stack.pop_back();
    if (l == params.height) continue;  // forced leaf
    const CountVector w = params.offspring.sample(node->type, l, rng);
    std::vector<int> labels;
    for (Eigen::Index j = 0; j < w.size(); ++j)
      labels.insert(labels.end(), static_cast<std::size_t>(w[j]),
                    static_cast<int>(j + 1));
    shuffle_labels(labels, rng);
    node->children.resize(labels.size());
    for (std::size_t c = 0; c < labels.size(); ++c)
      node->children[c].type = labels[c];
    for (std::size_t c = labels.size(); c > 0; --c)
      stack.push_back({&node->children[c - 1], l + 1});
  }
  return root;
}

TypedTree sample_conditioned_class(const SamplerContext& ctx, int root_type,
                                   int level, int target_class,
                                   RngStream& rng) {
  check_root_args(ctx, root_type, level, target_class);
  if (ctx.tables.probs.prob(root_type, level, target_class) == 0)
    throw ImpossibleEventError(
        "sample_conditioned_class: class " + std::to_string(target_class) +
        " has probability 0 for type " + std::to_string(root_type) +
        " at level " + std::to_string(level));
  const int base_level = ctx.params.height - ctx.tables.probs.base_height;
  TypedTree root{root_type, {}};
  struct Frame {
    TypedTree* node;
    int level;
    int cls;
  };
  std::vector<Frame> stack{{&root, level, target_class}};
  while (!stack.empty()) {
    auto [node, l, cls] = stack.back();
    stack.pop_back();
    if (l == base_level) {
      const auto& cell = ctx.tables.base.cell(node->type, cls);
      const auto& cdf = ctx.base_cdf[base_index(ctx, node->type, cls)];
      *node = cell[cdf_pick(cdf, rng.next_double())].first;
      continue;
    }
    const auto& cell = ctx.tables.cond.cell(l, node->type, cls);
    const auto& cdf = ctx.cond_cdf[cond_index(ctx, l, node->type, cls)];
    const CountMatrix& x = cell[cdf_pick(cdf, rng.next_double())].x;
    // one label per child: (type, class), placed uniformly over orderings
    std::vector<std::pair<int, int>> labels;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j)
        labels.insert(labels.end(), static_cast<std::size_t>(x(i, j)),
                      {static_cast<int>(j + 1), static_cast<int>(i + 1)});
    shuffle_labels(labels, rng);
    node->children.resize(labels.size());
    for (std::size_t c = 0; c < labels.size(); ++c)
      node->children[c].type = labels[c].first;
    for (std::size_t c = labels.size(); c > 0; --c)
      stack.push_back({&node->children[c - 1], l + 1, labels[c - 1].second});
  }
  return root;
}

std::pair<int, TypedTree> sample_tilde(const SamplerContext& ctx, int root_type,
                                       int level, RngStream& rng) {
  check_root_args(ctx, root_type, level, 1);
  const double u = rng.next_double();
  double cum = 0;
  int cls = ctx.num_classes();
  for (int i = 1; i <= ctx.num_classes(); ++i) {
    cum += ctx.tables.probs.prob(root_type, level, i);
    if (u < cum) {
      cls = i;
      break;
    }
  }
  // a zero-probability class can only be hit through the final fallback;
  // walk back to the last feasible class
  while (cls > 1 && ctx.tables.probs.prob(root_type, level, cls) == 0) --cls;
  return {cls, sample_conditioned_class(ctx, root_type, level, cls, rng)};
}

std::pair<CountVector, CountMatrix> draw_wx_conditioned(
    const SamplerContext& ctx, int root_type, int level, int target_class,
    RngStream& rng) {
  check_root_args(ctx, root_type, level, target_class);
  const int base_level = ctx.params.height - ctx.tables.probs.base_height;
  if (level >= base_level)
    throw DomainError("draw_wx_conditioned: level at or below the base layer");
  const auto& cell = ctx.tables.cond.cell(level, root_type, target_class);
  if (cell.empty())
    throw ImpossibleEventError("draw_wx_conditioned: class " +
                               std::to_string(target_class) +
                               " has probability 0");
  const auto& cdf = ctx.cond_cdf[cond_index(ctx, level, root_type, target_class)];
  const CountMatrix& x = cell[cdf_pick(cdf, rng.next_double())].x;
  return {column_totals(x), x};
}

std::pair<CountVector, CountMatrix> draw_wx_rejection(
    const SamplerContext& ctx, int root_type, int level, int target_class,
    RngStream& rng, double min_class_prob) {
  check_root_args(ctx, root_type, level, target_class);
  const int base_level = ctx.params.height - ctx.tables.probs.base_height;
  if (level >= base_level)
    throw DomainError("draw_wx_rejection: level at or below the base layer");
  const double p = ctx.tables.probs.prob(root_type, level, target_class);
  if (p < min_class_prob)
    throw Error("draw_wx_rejection: refusing, class probability " +
                std::to_string(p) + " is below " +
                std::to_string(min_class_prob));
  const int m = ctx.num_classes();
  const int theta = ctx.num_types();
  const auto& next = ctx.tables.probs.layers[static_cast<std::size_t>(level) + 1];
  const int class_level = ctx.params.height - level;
  while (true) {
    const CountVector w = ctx.params.offspring.sample(root_type, level, rng);
    CountMatrix x = CountMatrix::Zero(m, theta);
    for (int j = 1; j <= theta; ++j)
      for (std::int64_t n = 0; n < w[j - 1]; ++n) {
        const double u = rng.next_double();
        double cum = 0;
        int cls = m;
        for (int i = 1; i <= m; ++i) {
          cum += next(j - 1, i - 1);
          if (u < cum) {
            cls = i;
            break;
          }
        }
        ++x(cls - 1, j - 1);
      }
    if (ctx.event.partition.classify_matrix(class_level, x) == target_class)
      return {w, x};
  }
}

}  // namespace cgw
