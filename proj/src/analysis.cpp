#include "cgw/analysis.hpp"

#include "cgw/errors.hpp"
#include "cgw/poisson_forms.hpp"

namespace cgw {

Eigen::VectorXd conditional_offspring_mean(const ClassTables<double>& tables,
                                           int t, int l, int i) {
  const int m = tables.probs.num_classes;
  const int theta = tables.probs.num_types;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m * theta);
  for (const auto& atom : tables.cond.cell(l, t, i))
    for (int ic = 1; ic <= m; ++ic)
      for (int tc = 1; tc <= theta; ++tc)
        mean[flat_index(ic, tc, m)] +=
            atom.mass * static_cast<double>(atom.x(ic - 1, tc - 1));
  return mean;
}

MeanMatrices build_mean_matrices(const ClassTables<double>& tables) {
  const int m = tables.probs.num_classes;
  const int theta = tables.probs.num_types;
  const int levels = tables.cond.levels();
  MeanMatrices out;
  out.num_classes = m;
  out.num_types = theta;
  for (int l = 0; l < levels; ++l) {
    Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(m * theta, m * theta);
    std::vector<char> used(static_cast<std::size_t>(m * theta), 0);
    for (int t = 1; t <= theta; ++t)
      for (int i = 1; i <= m; ++i) {
        const int col = flat_index(i, t, m);
        if (tables.probs.prob(t, l, i) == 0) continue;  // unused column
        used[static_cast<std::size_t>(col)] = 1;
        matrix.col(col) = conditional_offspring_mean(tables, t, l, i);
      }
    out.level.push_back(std::move(matrix));
    out.column_used.push_back(std::move(used));
  }
  return out;
}

MeanMatrices poisson_mutant_mean_matrices(const PoissonThinningParams& params,
                                          int k) {
  // Class probabilities from the closed-form recursion; the matrices only
  // need the layers, not the support tables.
  const ClassProbTable<double> probs = closed_form_poisson_table(params, k);
  const int m = 2, theta = 2;
  const double mu[2] = {params.mu1, params.mu2};
  const double p1[2] = {params.p1, params.p2};  // chance a child has type 1
  MeanMatrices out;
  out.num_classes = m;
  out.num_types = theta;
  for (int l = 0; l < k; ++l) {
    Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(m * theta, m * theta);
    std::vector<char> used(static_cast<std::size_t>(m * theta), 0);
    const auto& next = probs.layers[static_cast<std::size_t>(l) + 1];
    for (int t = 1; t <= theta; ++t) {
      // unconditioned rate of (class ic, type tc) children of a type-t parent
      auto rate = [&](int ic, int tc) {
        const double type_frac = tc == 1 ? p1[t - 1] : 1 - p1[t - 1];
        return next(tc - 1, ic - 1) * type_frac * mu[t - 1];
      };
      for (int i = 1; i <= m; ++i) {
        const int col = flat_index(i, t, m);
        const double p_class = probs.prob(t, l, i);
        if (p_class == 0) continue;
        used[static_cast<std::size_t>(col)] = 1;
        for (int tc = 1; tc <= theta; ++tc) {
          // class-2 parents have no class-1 children; the class-1 row of a
          // class-1 parent is conditioned on being nonempty, the rest keeps
          // its rate by independence of the entries.
          if (i == 1)
            matrix(flat_index(1, tc, m), col) = rate(1, tc) / p_class;
          matrix(flat_index(2, tc, m), col) = rate(2, tc);
        }
      }
    }
    out.level.push_back(std::move(matrix));
    out.column_used.push_back(std::move(used));
  }
  return out;
}

}  // namespace cgw
