#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cgw/analysis.hpp"
#include "cgw/errors.hpp"
#include "cgw/events.hpp"
#include "cgw/partition.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cgw;
namespace tm_ = testing_models;

namespace {

PoissonThinningParams study_params() {
  PoissonThinningParams p;
  p.mu1 = 1.0;
  p.p1 = 1.0;
  p.mu2 = 1.5;
  p.p2 = 1e-9;
  return p;
}

/// One class that holds everything: conditioning on it is a no-op.
Event trivial_event(int k) {
  RecursivePartition part(
      1, 1, 0, [](const TypedTree&) { return 1; },
      {MatrixPredicate::conjunction({})});
  return Event{"always", std::move(part), 1, k};
}

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Csv parse_csv(const std::string& text) {
  Csv out;
  std::istringstream in(text);
  std::string line;
  REQUIRE(std::getline(in, line));
  std::istringstream header(line);
  for (std::string col; std::getline(header, col, ',');)
    out.columns.push_back(col);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream fields(line);
    for (std::string f; std::getline(fields, f, ',');)
      row.push_back(std::stod(f));
    REQUIRE(row.size() == out.columns.size());
    out.rows.push_back(std::move(row));
  }
  return out;
}

void check_rel(double got, double want, double rel) {
  INFO("got ", got, " want ", want);
  CHECK(std::abs(got - want) <= rel * std::max({1e-300, std::abs(got), std::abs(want)}));
}

}  // namespace

TEST_CASE("a one-class partition degenerates to plain expected offspring") {
  const Event event = trivial_event(3);
  const GwParams<double> params{3, tm_::single_mixed_leveldep<double>()};
  const auto tables = build_class_tables<double>(event, params);
  const MeanMatrices matrices = build_mean_matrices(tables);

  REQUIRE(matrices.level.size() == 3);
  CHECK(matrices.num_classes == 1);
  CHECK(matrices.num_types == 1);
  CHECK(matrices.level[0](0, 0) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(matrices.level[1](0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(matrices.level[2](0, 0) == doctest::Approx(1.25).epsilon(1e-12));

  const auto counts = expected_counts<double>(matrices, 1, 1);
  REQUIRE(counts.size() == 4);
  CHECK(grand_total(counts[3]) == doctest::Approx(1.5625).epsilon(1e-12));

  CHECK_THROWS_AS(expected_counts<double>(matrices, 2, 1), DomainError);
  CHECK_THROWS_AS(expected_counts<double>(matrices, 1, 2), DomainError);
}

TEST_CASE("constant supercritical law grows like mean^level") {
  TypeOffspring<double> t;
  t.law = tm_::atoms<double>({{{0}, 1, 4}, {{2}, 3, 4}});
  const GwParams<double> params{5, OffspringModel<double>({t})};
  const auto tables = build_class_tables<double>(trivial_event(5), params);
  const auto counts =
      expected_counts<double>(build_mean_matrices(tables), 1, 1);
  for (int l = 0; l <= 5; ++l)
    CHECK(grand_total(counts[static_cast<std::size_t>(l)]) ==
          doctest::Approx(std::pow(1.5, l)).epsilon(1e-12));
}

TEST_CASE("conditional offspring means by hand for survival") {
  const GwParams<double> params{2, tm_::single_half<double>()};
  const auto tables = build_class_tables<double>(survival_event(2), params);

  // Root conditioned on reaching depth 2: W=2 and at least one child still
  // alive.  Masses 1/3 for two live children, 2/3 for one each way.
  const Eigen::VectorXd alive = conditional_offspring_mean(tables, 1, 0, 1);
  REQUIRE(alive.size() == 2);
  CHECK(alive[flat_index(1, 1, 2)] == doctest::Approx(4.0 / 3).epsilon(1e-12));
  CHECK(alive[flat_index(2, 1, 2)] == doctest::Approx(2.0 / 3).epsilon(1e-12));

  // Conditioned on dying out: either no children, or two dead ones.
  const Eigen::VectorXd dead = conditional_offspring_mean(tables, 1, 0, 2);
  CHECK(dead[flat_index(1, 1, 2)] == 0.0);
  CHECK(dead[flat_index(2, 1, 2)] == doctest::Approx(0.4).epsilon(1e-12));

  const MeanMatrices matrices = build_mean_matrices(tables);
  REQUIRE(matrices.level.size() == 2);
  CHECK(matrices.level[0].col(flat_index(1, 1, 2)).isApprox(alive, 1e-12));
  CHECK(matrices.level[0].col(flat_index(2, 1, 2)).isApprox(dead, 1e-12));
  CHECK(matrices.column_used[0][static_cast<std::size_t>(flat_index(1, 1, 2))]);
}

TEST_CASE("closed-form mutant means match the generic construction") {
  const PoissonThinningParams sp = study_params();
  const int k = 8;
  const auto model = OffspringModel<double>::poisson_thinning(sp);
  const auto tables =
      build_class_tables<double>(mutant_at_generation(k), GwParams<double>{k, model});
  const MeanMatrices generic = build_mean_matrices(tables);
  const MeanMatrices closed = poisson_mutant_mean_matrices(sp, k);

  REQUIRE(generic.level.size() == static_cast<std::size_t>(k));
  REQUIRE(closed.level.size() == static_cast<std::size_t>(k));
  for (int l = 0; l < k; ++l) {
    for (int col = 0; col < 4; ++col) {
      REQUIRE(generic.column_used[static_cast<std::size_t>(l)]
                                 [static_cast<std::size_t>(col)]);
      REQUIRE(closed.column_used[static_cast<std::size_t>(l)]
                                [static_cast<std::size_t>(col)]);
      for (int row = 0; row < 4; ++row) {
        const double g = generic.level[static_cast<std::size_t>(l)](row, col);
        const double c = closed.level[static_cast<std::size_t>(l)](row, col);
        // The absolute floor absorbs a truncation artifact: cells pairing a
        // dead mutant child with the rare class (joint mass ~1e-18) lose
        // their W=2 support atoms to the 1e-12 tail cut, which shifts those
        // conditional means at the 1e-10 scale.  The closed form needs no
        // truncation; everything of size >= 1e-4 must agree tightly.
        INFO("l=", l, " row=", row, " col=", col, " generic=", g,
             " closed=", c);
        CHECK(std::abs(g - c) <= 1e-5 * std::max(std::abs(g), std::abs(c)) +
                                     1e-9);
      }
    }
    // A parent with no bottom mutant cannot have children that sprout one.
    for (int t = 1; t <= 2; ++t)
      for (int s = 1; s <= 2; ++s) {
        CHECK(generic.level[static_cast<std::size_t>(l)](
                  flat_index(1, s, 2), flat_index(2, t, 2)) == 0.0);
        CHECK(closed.level[static_cast<std::size_t>(l)](
                  flat_index(1, s, 2), flat_index(2, t, 2)) == 0.0);
      }
  }

  // Pinpoint the truncation-sensitive cell at l = k-2 (children one step
  // above the bottom): the count of dying mutant children is independent of
  // the event coordinates, so its conditional mean is exactly the thinned
  // rate mu2*p2*exp(-mu1).
  const double exact = sp.mu2 * sp.p2 * std::exp(-sp.mu1);
  CHECK(closed.level[6](flat_index(2, 1, 2), flat_index(1, 2, 2)) ==
        doctest::Approx(exact).epsilon(1e-9));
  CHECK(closed.level[6](flat_index(2, 1, 2), flat_index(2, 2, 2)) ==
        doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("expected mutant counts below a non-mutant root, height 8") {
  const std::vector<double> frozen = {0,        0.00655728, 0.0234114,
                                      0.056982, 0.118546,   0.228572,
                                      0.426165, 0.793155,   1.5414};
  const MeanMatrices matrices = poisson_mutant_mean_matrices(study_params(), 8);
  const auto counts = expected_counts<double>(matrices, 1, 2);
  REQUIRE(counts.size() == frozen.size());
  CHECK(type_total(counts[0], 1, 2) == 0.0);
  for (std::size_t l = 1; l < frozen.size(); ++l)
    check_rel(type_total(counts[l], 1, 2), frozen[l], 1e-4);
}

TEST_CASE("log-scale count propagation tracks the double version") {
  const MeanMatrices matrices = poisson_mutant_mean_matrices(study_params(), 60);
  const auto dbl = expected_counts<double>(matrices, 2, 2);
  const auto log = expected_counts<LogDouble>(matrices, 2, 2);
  REQUIRE(log.size() == dbl.size());
  for (std::size_t l = 0; l < dbl.size(); ++l) {
    const double a = grand_total(dbl[l]);
    const double b = to_double(grand_total(log[l]));
    check_rel(b, a, 1e-9);
  }
}

TEST_CASE("rendered study figures carry the expected landmarks") {
  const auto files = figure_data(0, study_params());
  REQUIRE(files.size() == 4);
  CHECK(files[0].name == "fig1.csv");
  CHECK(files[1].name == "fig2.csv");
  CHECK(files[2].name == "fig3_k60.csv");
  CHECK(files[3].name == "fig3_k90.csv");

  SUBCASE("figure 1: root class probabilities against the survival level") {
    const Csv fig1 = parse_csv(files[0].csv);
    REQUIRE(fig1.columns ==
            std::vector<std::string>{"k", "class1_from_mutant",
                                     "class1_from_nonmutant", "survival_limit"});
    REQUIRE(fig1.rows.size() == 100);
    const double limit = fig1.rows[0][3];
    check_rel(limit, 0.5828116438658115, 1e-12);
    int crossing = -1;
    for (const auto& row : fig1.rows)
      if (row[2] >= limit / 2) {
        crossing = static_cast<int>(row[0]);
        break;
      }
    CHECK(crossing == 48);  // where the non-mutant curve passes half its limit
    const auto& last = fig1.rows.back();
    CHECK(last[0] == 100);
    check_rel(last[1], 0.0193528915428, 1e-9);
    CHECK(std::abs(last[2] - limit) < 1e-8);
  }

  SUBCASE("figure 2: expected mutants per level at height 60") {
    const Csv fig2 = parse_csv(files[1].csv);
    REQUIRE(fig2.rows.size() == 61);
    const auto& bottom = fig2.rows.back();
    CHECK(bottom[0] == 60);
    check_rel(bottom[1], 190.025157168, 1e-9);
    check_rel(bottom[2], 31.5896797623, 1e-9);
    CHECK(fig2.rows[0][1] == 0.0);  // a non-mutant root contributes none
    CHECK(fig2.rows[0][2] == 1.0);  // a mutant root is itself one
  }

  SUBCASE("figure 3: generation sizes without a bottom mutant") {
    const Csv k60 = parse_csv(files[2].csv);
    const Csv k90 = parse_csv(files[3].csv);
    REQUIRE(k60.rows.size() == 61);
    REQUIRE(k90.rows.size() == 91);

    auto arg_extreme = [](const Csv& csv, bool max) {
      std::size_t best = 0;
      for (std::size_t r = 1; r < csv.rows.size(); ++r)
        if (max ? csv.rows[r][1] > csv.rows[best][1]
                : csv.rows[r][1] < csv.rows[best][1])
          best = r;
      return best;
    };
    const std::size_t peak = arg_extreme(k60, true);
    CHECK(k60.rows[peak][0] == 60);
    check_rel(k60.rows[peak][1], 3.388e6, 1e-3);
    const std::size_t dip60 = arg_extreme(k60, false);
    CHECK(k60.rows[dip60][0] == 11);
    check_rel(k60.rows[dip60][1], 0.02738, 1e-3);

    const std::size_t dip90 = arg_extreme(k90, false);
    CHECK(k90.rows[dip90][0] == 41);
    check_rel(k90.rows[dip90][1], 2.298e-8, 1e-3);
    check_rel(k90.rows.back()[1], 2.686, 1e-3);
  }

  SUBCASE("single-figure selection and bad ids") {
    const auto only2 = figure_data(2, study_params());
    REQUIRE(only2.size() == 1);
    CHECK(only2[0].name == "fig2.csv");
    CHECK(only2[0].csv == files[1].csv);
    CHECK_THROWS_AS(figure_data(7, study_params()), DomainError);
  }
}
