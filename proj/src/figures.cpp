#include <cstdio>

#include "cgw/analysis.hpp"
#include "cgw/errors.hpp"
#include "cgw/poisson_forms.hpp"

namespace cgw {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

FigureFile figure1(const PoissonThinningParams& params) {
  std::string csv = "k,class1_from_mutant,class1_from_nonmutant,survival_limit\n";
  const double limit = 1 - extinction_probability(params.mu2);
  for (int k = 1; k <= 100; ++k) {
    const ClassProbTable<double> probs = closed_form_poisson_table(params, k);
    csv += std::to_string(k) + "," + num(probs.prob(1, 0, 1)) + "," +
           num(probs.prob(2, 0, 1)) + "," + num(limit) + "\n";
  }
  return {"fig1.csv", std::move(csv)};
}

FigureFile figure2(const PoissonThinningParams& params) {
  const int k = 60;
  const MeanMatrices matrices = poisson_mutant_mean_matrices(params, k);
  const auto from_nonmutant = expected_counts<double>(matrices, 1, 2);
  const auto from_mutant = expected_counts<double>(matrices, 1, 1);
  std::string csv = "l,mutants_from_nonmutant_root,mutants_from_mutant_root\n";
  for (int l = 0; l <= k; ++l) {
    const auto& a = from_nonmutant[static_cast<std::size_t>(l)];
    const auto& b = from_mutant[static_cast<std::size_t>(l)];
    csv += std::to_string(l) + "," + num(type_total(a, 1, 2)) + "," +
           num(type_total(b, 1, 2)) + "\n";
  }
  return {"fig2.csv", std::move(csv)};
}

FigureFile figure3(const PoissonThinningParams& params, int k) {
  const MeanMatrices matrices = poisson_mutant_mean_matrices(params, k);
  // Non-mutant root conditioned on the complement class: no mutant in the
  // bottom generation.
  const auto counts = expected_counts<double>(matrices, 2, 2);
  std::string csv = "l,expected_size\n";
  for (int l = 0; l <= k; ++l)
    csv += std::to_string(l) + "," +
           num(grand_total(counts[static_cast<std::size_t>(l)])) + "\n";
  return {"fig3_k" + std::to_string(k) + ".csv", std::move(csv)};
}

}  // namespace

std::vector<FigureFile> figure_data(int figure_id,
                                    const PoissonThinningParams& params) {
  std::vector<FigureFile> out;
  if (figure_id == 0 || figure_id == 1) out.push_back(figure1(params));
  if (figure_id == 0 || figure_id == 2) out.push_back(figure2(params));
  if (figure_id == 0 || figure_id == 3) {
    out.push_back(figure3(params, 60));
    out.push_back(figure3(params, 90));
  }
  if (out.empty())
    throw DomainError("figure_data: figure id must be 0 (all), 1, 2 or 3");
  return out;
}

}  // namespace cgw
