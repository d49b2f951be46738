#include "cgw/verify.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <utility>

#include "cgw/oracle.hpp"
#include "cgw/sampler.hpp"

namespace cgw {

namespace {

/// Shared integer-ratio atom specs so the exact-rational and double modes
/// build the same model.
struct RatioAtom {
  std::vector<std::int64_t> counts;
  std::int64_t num;
  std::int64_t den;
};

struct TypeSpec {
  std::vector<RatioAtom> atoms;
  struct Range {
    int first;
    int last;
    std::vector<RatioAtom> atoms;
  };
  std::vector<Range> overrides;
};

struct ModelSpec {
  std::string name;
  std::vector<TypeSpec> types;
};

template <class Scalar>
LawAtoms<Scalar> to_atoms(const std::vector<RatioAtom>& spec) {
  LawAtoms<Scalar> out;
  for (const auto& atom : spec)
    out.atoms.push_back(
        {atom.counts, scalar_ratio<Scalar>(atom.num, atom.den)});
  return out;
}

template <class Scalar>
OffspringModel<Scalar> build_model(const ModelSpec& spec) {
  std::vector<TypeOffspring<Scalar>> types;
  for (const auto& type_spec : spec.types) {
    TypeOffspring<Scalar> t;
    t.law = to_atoms<Scalar>(type_spec.atoms);
    for (const auto& range : type_spec.overrides)
      t.overrides.push_back(
          {range.first, range.last, to_atoms<Scalar>(range.atoms)});
    types.push_back(std::move(t));
  }
  return OffspringModel<Scalar>(std::move(types));
}

const std::vector<ModelSpec>& model_zoo() {
  static const std::vector<ModelSpec> zoo = {
      {"single_half", {{{{{0}, 1, 2}, {{2}, 1, 2}}, {}}}},
      {"single_mixed_leveldep",
       {{{{{0}, 1, 4}, {{1}, 1, 2}, {{3}, 1, 4}},
         {{1, 1, {{{0}, 1, 2}, {{2}, 1, 2}}}}}}},
      {"two_type_leveldep",
       {{{{{0, 0}, 1, 3}, {{1, 1}, 1, 3}, {{2, 0}, 1, 6}, {{0, 1}, 1, 6}},
         {{0, 0, {{{0, 0}, 1, 4}, {{1, 1}, 1, 2}, {{0, 2}, 1, 4}}}}},
        {{{{0, 0}, 1, 2}, {{0, 2}, 1, 4}, {{1, 0}, 1, 4}}, {}}}},
      {"two_type_small",
       {{{{{0, 0}, 1, 2}, {{1, 0}, 1, 4}, {{0, 1}, 1, 4}}, {}},
        {{{{0, 0}, 1, 3}, {{1, 0}, 1, 3}, {{0, 1}, 1, 3}}, {}}}},
      {"two_type_wide",
       {{{{{0, 0}, 1, 4}, {{2, 2}, 1, 2}, {{1, 0}, 1, 4}}, {}},
        {{{{0, 0}, 1, 4}, {{2, 1}, 1, 4}, {{2, 2}, 1, 2}}, {}}}},
  };
  return zoo;
}

const ModelSpec& model_named(const std::string& name) {
  for (const auto& spec : model_zoo())
    if (spec.name == name) return spec;
  throw Error("verify: unknown model " + name);
}

struct Instance {
  std::string label;
  std::string model;
  std::function<Event()> make_event;
  int k;
};

std::vector<Instance> grid(VerifyScale scale) {
  auto ev = [](std::function<Event()> f) { return f; };
  std::vector<Instance> quick = {
      {"survival/single_half/k=2", "single_half",
       ev([] { return survival_event(2); }), 2},
      {"mutant_at_generation/two_type_leveldep/k=2", "two_type_leveldep",
       ev([] { return mutant_at_generation(2); }), 2},
      {"generation_size(2)/single_mixed_leveldep/k=2", "single_mixed_leveldep",
       ev([] { return generation_size_event(2, 2); }), 2},
      {"exact_height(2)/single_half/K=3", "single_half",
       ev([] { return exact_height_event(2); }), 3},
  };
  if (scale == VerifyScale::quick) return quick;
  std::vector<Instance> full = {
      {"survival/single_half/k=1", "single_half",
       ev([] { return survival_event(1); }), 1},
      {"survival/single_half/k=3", "single_half",
       ev([] { return survival_event(3); }), 3},
      {"survival/single_mixed_leveldep/k=3", "single_mixed_leveldep",
       ev([] { return survival_event(3); }), 3},
      {"survival2/two_type_leveldep/k=2", "two_type_leveldep",
       ev([] { return survival_event(2, 2); }), 2},
      {"mutant_at_generation/two_type_leveldep/k=3", "two_type_leveldep",
       ev([] { return mutant_at_generation(3); }), 3},
      {"root_lineage_mutant/two_type_leveldep/k=2", "two_type_leveldep",
       ev([] { return root_lineage_mutant(2); }), 2},
      {"root_lineage_mutant/two_type_small/k=3", "two_type_small",
       ev([] { return root_lineage_mutant(3); }), 3},
      {"spontaneous_mutation_4class/two_type_small/k=2", "two_type_small",
       ev([] { return spontaneous_mutation_4class(2); }), 2},
      {"spontaneous_mutation_4class/two_type_small/k=3", "two_type_small",
       ev([] { return spontaneous_mutation_4class(3); }), 3},
      {"generation_size(0)/single_half/k=2", "single_half",
       ev([] { return generation_size_event(0, 2); }), 2},
      {"generation_size(3)/single_half/k=3", "single_half",
       ev([] { return generation_size_event(3, 3); }), 3},
      {"exact_height(2)/single_mixed_leveldep/K=3", "single_mixed_leveldep",
       ev([] { return exact_height_event(2); }), 3},
      {"mutant_at_generation/two_type_wide/k=3", "two_type_wide",
       ev([] { return mutant_at_generation(3); }), 3},
  };
  full.insert(full.begin(), quick.begin(), quick.end());
  return full;
}

/// Check one (event, model) pair in one scalar mode.  Appends to `problems`
/// and keeps the worst TV seen; `exact` demands identically-zero distances.
template <class Scalar>
void check_instance(const Event& event, const GwParams<Scalar>& params,
                    bool exact, double& worst_tv, std::string& problems) {
  const double tv_tol = exact ? 0.0 : 1e-10;
  const double mix_tol = exact ? 0.0 : 1e-12;
  const ClassTables<Scalar> tables = build_class_tables(event, params);
  const int theta = params.offspring.num_types();
  const int m = event.partition.num_classes();
  for (int t = 1; t <= theta; ++t) {
    const auto trees = enumerate_trees(t, 0, params);
    for (int i = 1; i <= m; ++i) {
      if (is_zero(tables.probs.prob(t, 0, i))) continue;
      const auto brute = conditioned_bruteforce(event, params, t, i);
      TreeDistribution<Scalar> constructed;
      for (const auto& [tree, mass] : trees) {
        Scalar q = tilde_mass(tree, t, 0, i, tables, event.partition, params);
        if (!is_zero(q)) constructed.emplace(format_tree(tree), std::move(q));
      }
      const Scalar tv = total_variation(brute, constructed);
      worst_tv = std::max(worst_tv, to_double(tv));
      const bool bad = exact ? !is_zero(tv) : to_double(tv) > tv_tol;
      if (bad)
        problems += " tv(" + (exact ? std::string("exact") : "double") +
                    ",t=" + std::to_string(t) + ",i=" + std::to_string(i) +
                    ")=" + std::to_string(to_double(tv));
    }
    // Mixture identity: sum_i p_i * constructed_i recovers the plain law.
    for (const auto& [tree, mass] : trees) {
      Scalar mix(0);
      for (int i = 1; i <= m; ++i) {
        const Scalar& p = tables.probs.prob(t, 0, i);
        if (is_zero(p)) continue;
        mix = mix + p * tilde_mass(tree, t, 0, i, tables, event.partition,
                                   params);
      }
      const Scalar diff = mix < mass ? mass - mix : mix - mass;
      const bool bad = exact ? !is_zero(diff) : to_double(diff) > mix_tol;
      if (bad) {
        problems += " mixture(t=" + std::to_string(t) +
                    ") off by " + std::to_string(to_double(diff));
        break;
      }
    }
  }
}

VerifyOutcome run_instance(const Instance& inst) {
  VerifyOutcome outcome;
  outcome.label = inst.label;
  const ModelSpec& spec = model_named(inst.model);
  std::string problems;
  try {
    {
      GwParams<BigRational> params{inst.k, build_model<BigRational>(spec)};
      check_instance(inst.make_event(), params, /*exact=*/true,
                     outcome.worst_tv, problems);
    }
    {
      GwParams<double> params{inst.k, build_model<double>(spec)};
      check_instance(inst.make_event(), params, /*exact=*/false,
                     outcome.worst_tv, problems);
    }
  } catch (const EnumerationLimitError& e) {
    outcome.status = VerifyOutcome::Status::skip;
    outcome.note = e.what();
    return outcome;
  }
  if (!problems.empty()) {
    outcome.status = VerifyOutcome::Status::fail;
    outcome.note = problems;
  }
  return outcome;
}

/// The self-test instance: corrupt one conditional mass and confirm the
/// comparison notices.  Returns a FAIL outcome when the harness works.
VerifyOutcome run_broken() {
  VerifyOutcome outcome;
  outcome.label = "selftest/corrupted_conditional_mass (expected FAIL)";
  const Event event = survival_event(2);
  GwParams<double> params{2, build_model<double>(model_named("single_half"))};
  ClassTables<double> tables = build_class_tables(event, params);
  auto& cell = tables.cond.cell(0, 1, 1);
  if (cell.empty()) throw Error("verify: broken instance has no atoms");
  cell.front().mass *= 1.25;  // deliberate corruption
  const auto brute = conditioned_bruteforce(event, params, 1, 1);
  TreeDistribution<double> constructed;
  for (const auto& [tree, mass] : enumerate_trees(1, 0, params)) {
    const double q =
        tilde_mass(tree, 1, 0, 1, tables, event.partition, params);
    if (q != 0) constructed.emplace(format_tree(tree), q);
  }
  outcome.worst_tv = total_variation(brute, constructed);
  if (outcome.worst_tv > 1e-10) {
    outcome.status = VerifyOutcome::Status::fail;
    outcome.note = "corruption detected, as intended";
  } else {
    outcome.note = "corruption NOT detected; the comparison is broken";
  }
  return outcome;
}

}  // namespace

std::vector<VerifyOutcome> run_verification(VerifyScale scale) {
  std::vector<VerifyOutcome> outcomes;
  if (scale == VerifyScale::broken) {
    outcomes.push_back(run_broken());
    return outcomes;
  }
  for (const auto& inst : grid(scale)) outcomes.push_back(run_instance(inst));
  return outcomes;
}

bool verification_passed(const std::vector<VerifyOutcome>& outcomes) {
  for (const auto& outcome : outcomes)
    if (outcome.status == VerifyOutcome::Status::fail) return false;
  return true;
}

std::string format_verification_report(
    const std::vector<VerifyOutcome>& outcomes) {
  std::ostringstream out;
  for (const auto& outcome : outcomes) {
    const char* tag = outcome.status == VerifyOutcome::Status::pass   ? "PASS"
                      : outcome.status == VerifyOutcome::Status::fail ? "FAIL"
                                                                      : "SKIP";
    out << tag << " " << outcome.label;
    if (outcome.status != VerifyOutcome::Status::skip)
      out << " worst_tv=" << outcome.worst_tv;
    if (!outcome.note.empty()) out << " (" << outcome.note << ")";
    out << "\n";
  }
  return out.str();
}

}  // namespace cgw
