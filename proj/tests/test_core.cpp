#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cgw/combinatorics.hpp"
#include "cgw/errors.hpp"
#include "cgw/measure.hpp"
#include "cgw/offspring.hpp"
#include "cgw/rng.hpp"
#include "cgw/scalars.hpp"
#include "cgw/tree.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cgw;
namespace tm_ = testing_models;

TEST_CASE("tree text round-trips and rejects malformed input") {
  const TypedTree t = parse_tree("3(1,2(2,1),1)");
  CHECK(t.type == 3);
  REQUIRE(t.children.size() == 3);
  CHECK(t.children[1].type == 2);
  CHECK(t.children[1].children.size() == 2);
  CHECK(format_tree(t) == "3(1,2(2,1),1)");
  CHECK(format_tree(parse_tree("7")) == "7");

  CHECK_THROWS_AS(parse_tree(""), DomainError);
  CHECK_THROWS_AS(parse_tree("x"), DomainError);
  CHECK_THROWS_AS(parse_tree("1("), DomainError);
  CHECK_THROWS_AS(parse_tree("1(2,)"), DomainError);
  CHECK_THROWS_AS(parse_tree("1)2"), DomainError);
  CHECK_THROWS_AS(parse_tree("1 (2)"), DomainError);
  CHECK_THROWS_AS(parse_tree("0"), DomainError);
  CHECK_THROWS_AS(parse_tree("1(2)x"), DomainError);

  // Error messages carry the byte offset of the first bad character.
  try {
    parse_tree("1(2,");
    FAIL("expected a parse error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("4") != std::string::npos);
  }

  RngStream rng(41);
  for (int round = 0; round < 200; ++round) {
    const TypedTree random = tm_::random_tree(rng, 3, 4);
    CHECK(parse_tree(format_tree(random)) == random);
  }
}

TEST_CASE("node, height, and generation counts agree") {
  const TypedTree t = parse_tree("1(1(1,1),2,2(1(2)))");
  CHECK(num_nodes(t) == 8);
  CHECK(height(t) == 3);
  CHECK(generation_count(t, 0) == 1);
  CHECK(generation_count(t, 1) == 3);
  CHECK(generation_count(t, 2) == 3);
  CHECK(generation_count(t, 3) == 1);
  CHECK(generation_count(t, 4) == 0);

  RngStream rng(42);
  for (int round = 0; round < 100; ++round) {
    const TypedTree random = tm_::random_tree(rng, 2, 5);
    std::int64_t total = 0;
    for (int depth = 0; depth <= height(random); ++depth)
      total += generation_count(random, depth);
    CHECK(total == num_nodes(random));
  }

  const CountVector kids = count_children(parse_tree("1(2,1,2)"), 2);
  CHECK(kids[0] == 1);
  CHECK(kids[1] == 2);
  CHECK_THROWS_AS(count_children(parse_tree("1(3)"), 2), DomainError);
}

TEST_CASE("multinomial coefficients") {
  CountVector v(2);
  v << 2, 1;
  CHECK(multinomial_coefficient(v) == 3);
  CountVector w(2);
  w << 3, 2;
  CHECK(multinomial_coefficient(w) == 10);
  CountVector z = CountVector::Zero(3);
  CHECK(multinomial_coefficient(z) == 1);

  CountMatrix m(2, 2);
  m << 2, 1, 0, 3;  // flattened counts (2,1,0,3): 6!/(2!1!3!) = 60
  CHECK(multinomial_coefficient(m) == 60);

  RngStream rng(7);
  for (int round = 0; round < 50; ++round) {
    CountVector c(3);
    for (int j = 0; j < 3; ++j)
      c[j] = static_cast<std::int64_t>(rng.next_below(6));
    const double exact =
        std::log(static_cast<double>(multinomial_coefficient(c)));
    CHECK(std::abs(log_multinomial(c) - exact) < 1e-9);
    const LogDouble as_log = multinomial_as<LogDouble>(c);
    CHECK(std::abs(as_log.log() - exact) < 1e-9);
    CHECK(multinomial_as<double>(c) ==
          doctest::Approx(std::exp(exact)).epsilon(1e-9));
  }
}

TEST_CASE("compositions and distinct label sequences") {
  std::vector<std::vector<std::int64_t>> seen;
  for_each_composition(4, 3, [&](const CountVector& parts) {
    seen.push_back({parts[0], parts[1], parts[2]});
    CHECK(parts.sum() == 4);
  });
  CHECK(seen.size() == 15);  // C(4+2, 2)
  for (std::size_t a = 1; a < seen.size(); ++a)
    CHECK(seen[a - 1] < seen[a]);  // strictly increasing lexicographic order

  CountVector counts(2);
  counts << 2, 1;
  const auto sequences = distinct_label_sequences(counts);
  REQUIRE(sequences.size() == 3);
  std::set<std::vector<int>> unique(sequences.begin(), sequences.end());
  CHECK(unique.size() == 3);
  for (const auto& seq : unique) {
    CHECK(seq.size() == 3);
    CHECK(std::count(seq.begin(), seq.end(), 1) == 2);
    CHECK(std::count(seq.begin(), seq.end(), 2) == 1);
  }

  RngStream rng(11);
  for (int round = 0; round < 20; ++round) {
    CountVector c(3);
    for (int j = 0; j < 3; ++j)
      c[j] = static_cast<std::int64_t>(rng.next_below(4));
    CHECK(BigInt(distinct_label_sequences(c).size()) ==
          multinomial_coefficient(c));
  }
}

TEST_CASE("offspring model validation") {
  using Spec = TypeOffspring<double>;

  Spec bad_sum;
  bad_sum.law.atoms = {{{0}, 0.5}, {{2}, 0.4}};
  CHECK_THROWS_AS(OffspringModel<double>({bad_sum}), DomainError);

  Spec duplicate;
  duplicate.law.atoms = {{{0}, 0.5}, {{0}, 0.5}};
  CHECK_THROWS_AS(OffspringModel<double>({duplicate}), DomainError);

  Spec negative;
  negative.law.atoms = {{{-1}, 0.5}, {{2}, 0.5}};
  CHECK_THROWS_AS(OffspringModel<double>({negative}), DomainError);

  Spec overlapping;
  overlapping.law.atoms = {{{0}, 1.0}};
  overlapping.overrides.push_back({0, 2, {{{{1}, 1.0}}}});
  overlapping.overrides.push_back({2, 5, {{{{2}, 1.0}}}});
  CHECK_THROWS_AS(OffspringModel<double>({overlapping}), DomainError);

  Spec open_ended_overlap;
  open_ended_overlap.law.atoms = {{{0}, 1.0}};
  open_ended_overlap.overrides.push_back({3, -1, {{{{1}, 1.0}}}});
  open_ended_overlap.overrides.push_back({5, 6, {{{{2}, 1.0}}}});
  CHECK_THROWS_AS(OffspringModel<double>({open_ended_overlap}), DomainError);

  // Disjoint ranges are fine in any declaration order.
  Spec fine;
  fine.law.atoms = {{{0}, 1.0}};
  fine.overrides.push_back({4, 6, {{{{2}, 1.0}}}});
  fine.overrides.push_back({1, 2, {{{{1}, 1.0}}}});
  const OffspringModel<double> model({fine});
  CHECK(model.num_types() == 1);
  CHECK(model.finite_support());
  CHECK(model.law(1, 0).support.front()[0] == 0);
  CHECK(model.law(1, 2).support.front()[0] == 1);
  CHECK(model.law(1, 5).support.front()[0] == 2);
  CHECK(model.law(1, 7).support.front()[0] == 0);

  const auto mixed = tm_::single_mixed_leveldep<double>();
  CHECK(mixed.law(1, 1).support.size() == 2);   // override layer
  CHECK(mixed.law(1, 0).support.size() == 3);   // default law
  CHECK(mixed.point_mass(1, 1, tm_::cv({2})) == doctest::Approx(0.5));
  CHECK(mixed.point_mass(1, 2, tm_::cv({2})) == doctest::Approx(0.0));
}

TEST_CASE("tree enumeration and the plain measure agree") {
  using R = BigRational;
  const GwParams<R> params{2, tm_::single_half<R>()};

  CHECK(count_trees(1, 0, params) == 5);
  const auto trees = enumerate_trees<R>(1, 0, params);
  REQUIRE(trees.size() == 5);

  const R half = scalar_ratio<R>(1, 2);
  const R eighth = scalar_ratio<R>(1, 8);
  std::map<std::string, R> expected = {
      {"1", half},
      {"1(1,1)", eighth},
      {"1(1(1,1),1)", eighth},
      {"1(1,1(1,1))", eighth},
      {"1(1(1,1),1(1,1))", eighth},
  };
  R total(0);
  for (const auto& [tree, mass] : trees) {
    REQUIRE(expected.count(format_tree(tree)) == 1);
    CHECK(expected.at(format_tree(tree)) == mass);
    CHECK(gw_probability<R>(tree, 1, 0, params) == mass);
    total = total + mass;
  }
  CHECK(total == R(1));

  // Level-dependent two-type model: exact unit mass and per-tree agreement.
  const GwParams<R> two{2, tm_::two_type_leveldep<R>()};
  for (int root = 1; root <= 2; ++root) {
    const auto all = enumerate_trees<R>(root, 0, two);
    CHECK(BigInt(all.size()) == count_trees(root, 0, two));
    R sum(0);
    for (const auto& [tree, mass] : all) {
      CHECK(gw_probability<R>(tree, root, 0, two) == mass);
      sum = sum + mass;
    }
    CHECK(sum == R(1));
  }
}

TEST_CASE("thinned poisson offspring") {
  PoissonThinningParams params;
  params.mu1 = 1.0;
  params.p1 = 1.0;
  params.mu2 = 1.5;
  params.p2 = 1e-9;
  const auto model = OffspringModel<double>::poisson_thinning(params);
  CHECK(model.num_types() == 2);
  CHECK(!model.finite_support());
  REQUIRE(model.poisson_params().has_value());
  CHECK(model.poisson_params()->mu2 == 1.5);

  // Exact point masses: product of the two component laws.
  auto poisson = [](double lambda, std::int64_t n) {
    return std::exp(-lambda + n * std::log(lambda) - std::lgamma(n + 1.0));
  };
  for (std::int64_t w1 : {0, 1, 3})
    for (std::int64_t w2 : {0, 2}) {
      const double expected =
          poisson(1.5 * 1e-9, w1) * poisson(1.5 * (1 - 1e-9), w2);
      CHECK(model.point_mass(2, 0, tm_::cv({w1, w2})) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  // Type 1 puts no mass on non-mutant children when p1 = 1.
  CHECK(model.point_mass(1, 0, tm_::cv({0, 1})) == doctest::Approx(0.0));

  const auto law = model.law(2, 0);
  double sum = 0;
  for (const double p : law.prob) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(model.max_truncation_tail() <= 1e-11);

  const GwParams<double> params_d{3, model};
  CHECK_THROWS_AS(enumerate_trees<double>(1, 0, params_d),
                  UnsupportedModelError);

  RngStream rng(5);
  for (int draw = 0; draw < 200; ++draw) {
    const auto w = model.sample(2, 0, rng);
    REQUIRE(w.size() == 2);
    CHECK(w[0] >= 0);
    CHECK(w[1] >= 0);
    CHECK(w[1] < 60);
  }
}

TEST_CASE("rng streams are deterministic and splittable") {
  RngStream a(123);
  RngStream b(123);
  for (int draw = 0; draw < 5; ++draw) CHECK(a.next_u64() == b.next_u64());

  RngStream base(9);
  RngStream s1 = base.split(7);
  RngStream s2 = base.split(7);
  RngStream s3 = base.split(8);
  bool all_equal = true;
  bool any_diff = false;
  for (int draw = 0; draw < 8; ++draw) {
    const auto x = s1.next_u64();
    all_equal = all_equal && x == s2.next_u64();
    any_diff = any_diff || x != s3.next_u64();
  }
  CHECK(all_equal);
  CHECK(any_diff);

  RngStream u(31);
  CHECK(u.next_below(1) == 0);
  std::vector<int> buckets(4, 0);
  for (int draw = 0; draw < 4000; ++draw) {
    const double x = u.next_double();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    ++buckets[u.next_below(4)];
  }
  for (const int count : buckets) {
    CHECK(count > 1000 - 90);  // 3 sigma around n/4
    CHECK(count < 1000 + 90);
  }
}

TEST_CASE("scalar helpers") {
  const BigRational third = scalar_ratio<BigRational>(1, 3);
  CHECK(third * BigRational(3) == BigRational(1));
  CHECK(to_double(third) == doctest::Approx(1.0 / 3));

  const LogDouble x(0.25);
  const LogDouble y(0.5);
  CHECK(to_double(x * y) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(to_double(x + y) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(to_double(x / y) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(x < y);
  CHECK(y > x);
  CHECK(x == LogDouble(0.25));
  CHECK(is_zero(LogDouble(0.0)));
  CHECK(!is_zero(x));
  CHECK(is_zero(0.0));
  CHECK(is_zero(BigRational(0)));

  const LogDouble tiny = scalar_ratio<LogDouble>(1, 1000000);
  CHECK(to_double(tiny) == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(scalar_pow(2.0, 10) == doctest::Approx(1024.0));
  CHECK(to_double(scalar_pow(LogDouble(0.5), 40)) ==
        doctest::Approx(std::pow(0.5, 40)).epsilon(1e-10));
  CHECK(scalar_pow(scalar_ratio<BigRational>(1, 2), 3) ==
        scalar_ratio<BigRational>(1, 8));
}
