#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgw/counts.hpp"
#include "cgw/errors.hpp"
#include "cgw/rng.hpp"
#include "cgw/scalars.hpp"

namespace cgw {

/// One finite offspring law: P(W = support[a]) = prob[a].
template <class Scalar>
struct FiniteLaw {
  std::vector<CountVector> support;
  std::vector<Scalar> prob;
  /// Upper-tail mass removed before renormalization (0 for exact tables).
  double truncated_tail = 0.0;
  /// Inclusive cumulative probabilities for inverse-CDF sampling
  /// (populated for Scalar = double only).
  std::vector<double> cdf;
};

/// Builder-friendly description of a finite law.
template <class Scalar>
struct LawAtoms {
  std::vector<std::pair<std::vector<std::int64_t>, Scalar>> atoms;
};

/// Per-type offspring specification: a default law plus optional laws bound
/// to inclusive level ranges (last = -1 means unbounded above).
template <class Scalar>
struct TypeOffspring {
  LawAtoms<Scalar> law;
  struct Range {
    int first = 0;
    int last = -1;
    LawAtoms<Scalar> law;
  };
  std::vector<Range> overrides;
};

/// Two-type model where a type-t individual bears Poisson(mu_t) children,
/// each independently of type 1 with probability p_t and type 2 otherwise;
/// equivalently W = (Poisson(mu_t p_t), Poisson(mu_t (1-p_t))) independent.
struct PoissonThinningParams {
  double mu1 = 0;
  double p1 = 0;
  double mu2 = 0;
  double p2 = 0;
  /// Per-component upper-tail bound when a finite support table is needed.
  double truncation_tail = 1e-12;

  friend bool operator==(const PoissonThinningParams&,
                         const PoissonThinningParams&) = default;
};

namespace detail {

inline double poisson_pmf(double lambda, std::int64_t n) {
  if (lambda == 0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-lambda + static_cast<double>(n) * std::log(lambda) -
                  std::lgamma(static_cast<double>(n) + 1));
}

/// Smallest prefix 0..N of Poisson(lambda) whose tail mass is < tail.
inline std::vector<double> poisson_prefix(double lambda, double tail) {
  std::vector<double> pmf;
  double p = std::exp(-lambda);
  double cum = p;
  pmf.push_back(p);
  std::int64_t n = 0;
  while (1.0 - cum >= tail) {
    ++n;
    p *= lambda / static_cast<double>(n);
    cum += p;
    pmf.push_back(p);
    if (n > 100000) throw DomainError("poisson_prefix: rate too large");
  }
  return pmf;
}

inline std::int64_t sample_poisson(double lambda, RngStream& rng) {
  if (lambda == 0) return 0;
  const double u = rng.next_double();
  double p = std::exp(-lambda);
  double cum = p;
  std::int64_t n = 0;
  const std::int64_t cap =
      static_cast<std::int64_t>(lambda + 40 * std::sqrt(lambda + 1) + 100);
  while (u >= cum && n < cap) {
    ++n;
    p *= lambda / static_cast<double>(n);
    cum += p;
  }
  return n;
}

}  // namespace detail

/// Offspring distributions W_l^t for every type and level.  Immutable after
/// construction; all lookups are const and safe to share across threads.
template <class Scalar>
class OffspringModel {
 public:
  /// Explicit finite tables, one TypeOffspring per type (index = type-1).
  explicit OffspringModel(std::vector<TypeOffspring<Scalar>> per_type) {
    if (per_type.empty())
      throw DomainError("OffspringModel: at least one type required");
    num_types_ = static_cast<int>(per_type.size());
    for (int t = 1; t <= num_types_; ++t) {
      auto& spec = per_type[static_cast<std::size_t>(t - 1)];
      TypeLaws laws;
      laws.fallback = compile(spec.law, t);
      for (auto& range : spec.overrides) {
        if (range.first < 0 || (range.last != -1 && range.last < range.first))
          throw DomainError("OffspringModel: bad level range for type " +
                            std::to_string(t));
        laws.ranges.push_back({range.first, range.last, compile(range.law, t)});
      }
      std::sort(laws.ranges.begin(), laws.ranges.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t r = 1; r < laws.ranges.size(); ++r) {
        const int prev_last = laws.ranges[r - 1].last;
        if (prev_last == -1 || laws.ranges[r].first <= prev_last)
          throw DomainError(
              "OffspringModel: overlapping level ranges for type " +
              std::to_string(t));
      }
      types_.push_back(std::move(laws));
    }
  }

  int num_types() const { return num_types_; }

  /// True when every law is an exact finite table (no truncation happened).
  bool finite_support() const { return !poisson_.has_value(); }

  const std::optional<PoissonThinningParams>& poisson_params() const {
    return poisson_;
  }

  /// Largest truncated tail across all stored tables.
  double max_truncation_tail() const { return max_tail_; }

  /// Exact point probability P(W_l^t = w); for Poisson models this uses the
  /// untruncated law.
  Scalar point_mass(int type, int level, const CountVector& w) const {
    check_type(type);
    if (w.size() != num_types_)
      throw DomainError("point_mass: count vector has wrong length");
    for (Eigen::Index j = 0; j < w.size(); ++j)
      if (w[j] < 0) throw DomainError("point_mass: negative count");
    if (poisson_) {
      const auto [l1, l2] = poisson_rates(type);
      return Scalar(detail::poisson_pmf(l1, w[0]) *
                    detail::poisson_pmf(l2, w[1]));
    }
    const FiniteLaw<Scalar>& fl = law(type, level);
    for (std::size_t a = 0; a < fl.support.size(); ++a)
      if (fl.support[a] == w) return fl.prob[a];
    return Scalar(0);
  }

  /// Finite table for (type, level).  Exact for explicit models; truncated
  /// and renormalized (tail < truncation_tail per component) for Poisson.
  const FiniteLaw<Scalar>& law(int type, int level) const {
    check_type(type);
    if (level < 0) throw DomainError("law: negative level");
    const TypeLaws& tl = types_[static_cast<std::size_t>(type - 1)];
    for (const auto& r : tl.ranges)
      if (level >= r.first && (r.last == -1 || level <= r.last)) return r.law;
    return tl.fallback;
  }

  /// Draw W from the exact (untruncated) law; double scalars only.
  CountVector sample(int type, int level, RngStream& rng) const
    requires std::is_same_v<Scalar, double>
  {
    check_type(type);
    if (poisson_) {
      const auto [l1, l2] = poisson_rates(type);
      CountVector w(2);
      w[0] = detail::sample_poisson(l1, rng);
      w[1] = detail::sample_poisson(l2, rng);
      return w;
    }
    const FiniteLaw<Scalar>& fl = law(type, level);
    const double u = rng.next_double();
    auto it = std::upper_bound(fl.cdf.begin(), fl.cdf.end(), u);
    std::size_t a = std::min(static_cast<std::size_t>(it - fl.cdf.begin()),
                             fl.support.size() - 1);
    return fl.support[a];
  }

  /// Factory for the two-type Poisson thinning model (double scalars only).
  static OffspringModel poisson_thinning(const PoissonThinningParams& params)
    requires std::is_same_v<Scalar, double>
  {
    if (params.mu1 < 0 || params.mu2 < 0)
      throw DomainError("poisson_thinning: negative rate");
    if (params.p1 < 0 || params.p1 > 1 || params.p2 < 0 || params.p2 > 1)
      throw DomainError("poisson_thinning: type-1 probability outside [0,1]");
    if (!(params.truncation_tail > 0) || params.truncation_tail >= 1)
      throw DomainError("poisson_thinning: truncation tail outside (0,1)");
    OffspringModel model(params);
    return model;
  }

 private:
  struct TypeLaws {
    FiniteLaw<Scalar> fallback;
    struct RangeLaw {
      int first;
      int last;
      FiniteLaw<Scalar> law;
    };
    std::vector<RangeLaw> ranges;
  };

  explicit OffspringModel(const PoissonThinningParams& params)
      : num_types_(2), poisson_(params) {
    // Pre-build the truncated product tables used for support enumeration.
    for (int t = 1; t <= 2; ++t) {
      const auto [l1, l2] = poisson_rates(t);
      const auto pmf1 = detail::poisson_prefix(l1, params.truncation_tail);
      const auto pmf2 = detail::poisson_prefix(l2, params.truncation_tail);
      FiniteLaw<Scalar> fl;
      double total = 0;
      for (std::size_t a = 0; a < pmf1.size(); ++a)
        for (std::size_t b = 0; b < pmf2.size(); ++b) {
          CountVector w(2);
          w[0] = static_cast<std::int64_t>(a);
          w[1] = static_cast<std::int64_t>(b);
          fl.support.push_back(std::move(w));
          fl.prob.push_back(pmf1[a] * pmf2[b]);
          total += pmf1[a] * pmf2[b];
        }
      fl.truncated_tail = 1.0 - total;
      for (auto& p : fl.prob) p /= total;
      finalize(fl, 2);
      max_tail_ = std::max(max_tail_, fl.truncated_tail);
      TypeLaws laws;
      laws.fallback = std::move(fl);
      types_.push_back(std::move(laws));
    }
  }

  std::pair<double, double> poisson_rates(int type) const {
    const auto& pp = *poisson_;
    const double mu = type == 1 ? pp.mu1 : pp.mu2;
    const double p = type == 1 ? pp.p1 : pp.p2;
    return {mu * p, mu * (1 - p)};
  }

  FiniteLaw<Scalar> compile(const LawAtoms<Scalar>& atoms, int type) const {
    if (atoms.atoms.empty())
      throw DomainError("OffspringModel: empty law for type " +
                        std::to_string(type));
    FiniteLaw<Scalar> fl;
    for (const auto& [counts, p] : atoms.atoms) {
      if (static_cast<int>(counts.size()) != num_types_)
        throw DomainError("OffspringModel: count vector length != num_types");
      CountVector w(num_types_);
      for (int j = 0; j < num_types_; ++j) {
        if (counts[static_cast<std::size_t>(j)] < 0)
          throw DomainError("OffspringModel: negative count");
        w[j] = counts[static_cast<std::size_t>(j)];
      }
      for (const auto& seen : fl.support)
        if (seen == w)
          throw DomainError("OffspringModel: duplicate support point");
      if (p < Scalar(0))
        throw DomainError("OffspringModel: negative probability");
      fl.support.push_back(std::move(w));
      fl.prob.push_back(p);
    }
    Scalar total(0);
    for (const auto& p : fl.prob) total = total + p;
    if constexpr (std::is_same_v<Scalar, BigRational>) {
      if (total != Scalar(1))
        throw DomainError("OffspringModel: probabilities must sum to 1 exactly");
    } else {
      if (std::abs(to_double(total) - 1.0) > 1e-12)
        throw DomainError("OffspringModel: probabilities sum to " +
                          std::to_string(to_double(total)) + ", expected 1");
    }
    finalize(fl, num_types_);
    return fl;
  }

  static void finalize(FiniteLaw<Scalar>& fl, int /*num_types*/) {
    if constexpr (std::is_same_v<Scalar, double>) {
      double cum = 0;
      fl.cdf.reserve(fl.prob.size());
      for (double p : fl.prob) {
        cum += p;
        fl.cdf.push_back(cum);
      }
      if (!fl.cdf.empty()) fl.cdf.back() = 1.0;
    }
  }

  void check_type(int type) const {
    if (type < 1 || type > num_types_)
      throw DomainError("offspring model: type " + std::to_string(type) +
                        " outside 1.." + std::to_string(num_types_));
  }

  int num_types_ = 0;
  std::vector<TypeLaws> types_;
  std::optional<PoissonThinningParams> poisson_;
  double max_tail_ = 0.0;
};

}  // namespace cgw
