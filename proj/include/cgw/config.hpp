#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgw/events.hpp"
#include "cgw/measure.hpp"
#include "cgw/offspring.hpp"

namespace cgw {

/// One explicit offspring law block from a config file.
struct TableLawConfig {
  int type = 1;
  bool has_range = false;  // false: the type's default law
  int first_level = 0;
  int last_level = -1;  // -1 = unbounded
  std::vector<std::pair<std::vector<std::int64_t>, double>> atoms;

  bool operator==(const TableLawConfig&) const = default;
};

struct OffspringConfig {
  enum class Kind { poisson_thinning, table };
  Kind kind = Kind::table;
  PoissonThinningParams poisson;
  std::vector<TableLawConfig> laws;

  bool operator==(const OffspringConfig&) const = default;
};

/// A custom-event predicate; expr is stored in canonical form after parsing,
/// so structural equality is equality of these fields.
struct PredicateConfig {
  int cls = 1;
  int level = -1;  // -1: the default list; otherwise an override level
  std::string expr;
  int line = 0;  // source line, for error anchoring (not part of equality)

  bool operator==(const PredicateConfig& o) const {
    return cls == o.cls && level == o.level && expr == o.expr;
  }
};

struct EventConfig {
  std::string builder;  // survival | mutant_at_generation |
                        // root_lineage_mutant | spontaneous_mutation_4class |
                        // generation_size | exact_height | custom
  int size = 0;         // generation_size only
  int classes = 0;      // custom only
  std::vector<std::pair<int, int>> base_map;  // custom: (leaf type, class)
  std::vector<PredicateConfig> predicates;    // custom
  int target_class = 0;  // 0 = builder default

  bool operator==(const EventConfig&) const = default;
};

struct SampleConfig {
  std::uint64_t seed = 1;
  int count = 10;
  int root_type = 1;

  bool operator==(const SampleConfig&) const = default;
};

struct ModelConfig {
  int num_types = 1;
  int height = 1;
  OffspringConfig offspring;
  EventConfig event;
  SampleConfig sample;

  bool operator==(const ModelConfig&) const = default;
};

/// Parse config text; `name` labels error messages ("file.cfg:12: ...").
/// Custom-event predicate expressions are validated and canonicalized here.
ModelConfig parse_config(const std::string& text, const std::string& name);

/// Read and parse a config file.
ModelConfig load_config(const std::string& path);

/// Canonical text form; parse_config(dump_config(c)) == c.
std::string dump_config(const ModelConfig& config);

/// Build the offspring model / event / full parameter set described by the
/// config.  Failures surface as ConfigError.
OffspringModel<double> make_offspring(const ModelConfig& config);
Event make_event(const ModelConfig& config);
GwParams<double> make_params(const ModelConfig& config);

}  // namespace cgw
