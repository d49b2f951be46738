#include "cgw/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cgw/errors.hpp"
#include "cgw/predicate.hpp"

namespace cgw {

namespace {

struct RawKV {
  std::string key;
  std::string value;
  int line = 0;
};

struct RawSection {
  std::string name;
  int line = 0;
  std::vector<RawKV> kvs;
};

[[noreturn]] void fail(const std::string& name, int line,
                       const std::string& what) {
  throw ConfigError(name + ":" + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<RawSection> parse_ini(const std::string& text,
                                  const std::string& name) {
  std::vector<RawSection> sections;
  std::istringstream in(text);
  std::string raw_line;
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    const std::string line = trim(raw_line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(name, line_no, "unterminated section header");
      sections.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}});
      if (sections.back().name.empty())
        fail(name, line_no, "empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(name, line_no, "expected 'key = value' or a [section] header");
    if (sections.empty())
      fail(name, line_no, "key outside of any [section]");
    RawKV kv{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (kv.key.empty()) fail(name, line_no, "empty key");
    for (const auto& seen : sections.back().kvs)
      if (seen.key == kv.key)
        fail(name, line_no,
             "duplicate key '" + kv.key + "' (first at line " +
                 std::to_string(seen.line) + ")");
    sections.back().kvs.push_back(std::move(kv));
  }
  return sections;
}

/// Wraps one section for checked key access; remembers which keys were read
/// so unknown keys can be reported afterwards.
class SectionReader {
 public:
  SectionReader(const RawSection& section, const std::string& name)
      : section_(section), name_(name) {}

  const RawKV* find(const std::string& key) {
    used_.insert(key);
    for (const auto& kv : section_.kvs)
      if (kv.key == key) return &kv;
    return nullptr;
  }

  const RawKV& require(const std::string& key) {
    const RawKV* kv = find(key);
    if (!kv)
      fail(name_, section_.line,
           "missing key '" + key + "' in [" + section_.name + "]");
    return *kv;
  }

  std::int64_t get_int(const std::string& key, std::int64_t fallback) {
    const RawKV* kv = find(key);
    return kv ? to_int(*kv) : fallback;
  }

  std::int64_t require_int(const std::string& key) {
    return to_int(require(key));
  }

  double require_double(const std::string& key) {
    return to_double_value(require(key));
  }

  std::int64_t to_int(const RawKV& kv) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(kv.value.c_str(), &end, 10);
    if (errno != 0 || end == kv.value.c_str() || *end != '\0')
      fail(name_, kv.line, "'" + kv.key + "' must be an integer, got '" +
                               kv.value + "'");
    return v;
  }

  std::uint64_t to_uint(const RawKV& kv) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(kv.value.c_str(), &end, 10);
    if (errno != 0 || end == kv.value.c_str() || *end != '\0' ||
        kv.value.find('-') != std::string::npos)
      fail(name_, kv.line, "'" + kv.key + "' must be a nonnegative integer");
    return v;
  }

  double to_double_value(const RawKV& kv) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(kv.value.c_str(), &end);
    if (errno != 0 || end == kv.value.c_str() || *end != '\0')
      fail(name_, kv.line,
           "'" + kv.key + "' must be a number, got '" + kv.value + "'");
    return v;
  }

  std::vector<double> to_double_list(const RawKV& kv) {
    std::vector<double> out;
    std::size_t start = 0;
    const std::string& v = kv.value;
    while (start <= v.size()) {
      std::size_t comma = v.find(',', start);
      if (comma == std::string::npos) comma = v.size();
      const std::string item = trim(v.substr(start, comma - start));
      if (item.empty())
        fail(name_, kv.line, "'" + kv.key + "': empty list entry");
      errno = 0;
      char* end = nullptr;
      const double x = std::strtod(item.c_str(), &end);
      if (errno != 0 || end == item.c_str() || *end != '\0')
        fail(name_, kv.line, "'" + kv.key + "': bad number '" + item + "'");
      out.push_back(x);
      if (comma == v.size()) break;
      start = comma + 1;
    }
    return out;
  }

  void reject_unknown_keys() const {
    for (const auto& kv : section_.kvs)
      if (!used_.contains(kv.key))
        fail(name_, kv.line,
             "unknown key '" + kv.key + "' in [" + section_.name + "]");
  }

  const RawSection& raw() const { return section_; }

 private:
  const RawSection& section_;
  const std::string& name_;
  std::set<std::string> used_;
};

/// Parse "(c1,c2,...): p, (d1,...): q, ..." into law atoms.
std::vector<std::pair<std::vector<std::int64_t>, double>> parse_atoms(
    const RawKV& kv, int num_types, const std::string& name) {
  std::vector<std::pair<std::vector<std::int64_t>, double>> out;
  const std::string& v = kv.value;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos])))
      ++pos;
  };
  while (true) {
    skip();
    if (pos >= v.size()) break;
    if (v[pos] != '(')
      fail(name, kv.line, "law: expected '(' at position " +
                              std::to_string(pos) + " of '" + v + "'");
    ++pos;
    std::vector<std::int64_t> counts;
    while (true) {
      skip();
      errno = 0;
      char* end = nullptr;
      const long long c = std::strtoll(v.c_str() + pos, &end, 10);
      if (errno != 0 || end == v.c_str() + pos || c < 0)
        fail(name, kv.line, "law: bad count in '" + v + "'");
      counts.push_back(c);
      pos = static_cast<std::size_t>(end - v.c_str());
      skip();
      if (pos < v.size() && v[pos] == ',') {
        ++pos;
        continue;
      }
      break;
    }
    if (pos >= v.size() || v[pos] != ')')
      fail(name, kv.line, "law: expected ')' in '" + v + "'");
    ++pos;
    skip();
    if (pos >= v.size() || v[pos] != ':')
      fail(name, kv.line, "law: expected ':' after the count tuple");
    ++pos;
    skip();
    errno = 0;
    char* end = nullptr;
    const double p = std::strtod(v.c_str() + pos, &end);
    if (errno != 0 || end == v.c_str() + pos)
      fail(name, kv.line, "law: bad probability in '" + v + "'");
    pos = static_cast<std::size_t>(end - v.c_str());
    if (static_cast<int>(counts.size()) != num_types)
      fail(name, kv.line,
           "law: count tuple has " + std::to_string(counts.size()) +
               " entries, model has " + std::to_string(num_types) + " types");
    out.push_back({std::move(counts), p});
    skip();
    if (pos < v.size()) {
      if (v[pos] != ',')
        fail(name, kv.line, "law: expected ',' between atoms");
      ++pos;
    }
  }
  if (out.empty()) fail(name, kv.line, "law: no atoms given");
  return out;
}

/// Parse "a..b", "a..", or "a" into an inclusive level range.
std::pair<int, int> parse_level_range(const RawKV& kv, const std::string& name) {
  const std::string& v = kv.value;
  const std::size_t dots = v.find("..");
  auto to_level = [&](const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(s.c_str(), &end, 10);
    if (errno != 0 || end == s.c_str() || *end != '\0' || x < 0)
      fail(name, kv.line, "levels: bad level '" + s + "'");
    return static_cast<int>(x);
  };
  if (dots == std::string::npos) {
    const int l = to_level(trim(v));
    return {l, l};
  }
  const int first = to_level(trim(v.substr(0, dots)));
  const std::string rest = trim(v.substr(dots + 2));
  if (rest.empty()) return {first, -1};
  const int last = to_level(rest);
  if (last < first) fail(name, kv.line, "levels: range end before start");
  return {first, last};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::set<std::string>& known_builders() {
  static const std::set<std::string> names = {
      "survival",        "mutant_at_generation",
      "root_lineage_mutant", "spontaneous_mutation_4class",
      "generation_size", "exact_height",
      "custom"};
  return names;
}

}  // namespace

ModelConfig parse_config(const std::string& text, const std::string& name) {
  const std::vector<RawSection> sections = parse_ini(text, name);
  auto find_one = [&](const std::string& section_name,
                      bool required) -> const RawSection* {
    const RawSection* found = nullptr;
    for (const auto& s : sections)
      if (s.name == section_name) {
        if (found)
          fail(name, s.line, "duplicate section [" + section_name + "]");
        found = &s;
      }
    if (!found && required)
      fail(name, 1, "missing required section [" + section_name + "]");
    return found;
  };
  for (const auto& s : sections)
    if (s.name != "model" && s.name != "offspring" &&
        s.name != "offspring.table" && s.name != "event" &&
        s.name != "event.predicate" && s.name != "sample")
      fail(name, s.line, "unknown section [" + s.name + "]");

  ModelConfig config;

  {
    SectionReader model(*find_one("model", true), name);
    config.num_types = static_cast<int>(model.require_int("types"));
    config.height = static_cast<int>(model.require_int("height"));
    if (config.num_types < 1)
      fail(name, model.raw().line, "types must be >= 1");
    if (config.height < 0) fail(name, model.raw().line, "height must be >= 0");
    model.reject_unknown_keys();
  }

  {
    SectionReader off(*find_one("offspring", true), name);
    const std::string kind = off.require("kind").value;
    if (kind == "poisson_thinning") {
      config.offspring.kind = OffspringConfig::Kind::poisson_thinning;
      if (config.num_types != 2)
        fail(name, off.raw().line, "poisson_thinning requires types = 2");
      const auto mu = off.to_double_list(off.require("mu"));
      const auto p = off.to_double_list(off.require("mutant_prob"));
      if (mu.size() != 2 || p.size() != 2)
        fail(name, off.raw().line, "mu and mutant_prob must have 2 entries");
      config.offspring.poisson.mu1 = mu[0];
      config.offspring.poisson.mu2 = mu[1];
      config.offspring.poisson.p1 = p[0];
      config.offspring.poisson.p2 = p[1];
      if (const RawKV* tail = off.find("truncation_tail"))
        config.offspring.poisson.truncation_tail = off.to_double_value(*tail);
    } else if (kind == "table") {
      config.offspring.kind = OffspringConfig::Kind::table;
    } else {
      fail(name, off.raw().line,
           "kind must be poisson_thinning or table, got '" + kind + "'");
    }
    off.reject_unknown_keys();
  }

  for (const auto& s : sections) {
    if (s.name != "offspring.table") continue;
    if (config.offspring.kind != OffspringConfig::Kind::table)
      fail(name, s.line, "[offspring.table] requires kind = table");
    SectionReader block(s, name);
    TableLawConfig law;
    law.type = static_cast<int>(block.require_int("type"));
    if (law.type < 1 || law.type > config.num_types)
      fail(name, s.line, "type outside 1.." + std::to_string(config.num_types));
    if (const RawKV* levels = block.find("levels")) {
      law.has_range = true;
      std::tie(law.first_level, law.last_level) =
          parse_level_range(*levels, name);
    }
    law.atoms = parse_atoms(block.require("law"), config.num_types, name);
    block.reject_unknown_keys();
    config.offspring.laws.push_back(std::move(law));
  }
  if (config.offspring.kind == OffspringConfig::Kind::table) {
    for (int t = 1; t <= config.num_types; ++t) {
      int defaults = 0;
      for (const auto& law : config.offspring.laws)
        if (law.type == t && !law.has_range) ++defaults;
      if (defaults != 1)
        fail(name, 1,
             "type " + std::to_string(t) + " needs exactly one " +
                 "[offspring.table] block without 'levels' (found " +
                 std::to_string(defaults) + ")");
    }
  }

  {
    SectionReader event(*find_one("event", true), name);
    config.event.builder = event.require("builder").value;
    if (!known_builders().contains(config.event.builder))
      fail(name, event.raw().line,
           "unknown builder '" + config.event.builder + "'");
    if (config.event.builder == "generation_size") {
      config.event.size = static_cast<int>(event.require_int("size"));
      if (config.event.size < 0)
        fail(name, event.raw().line, "size must be >= 0");
    } else if (const RawKV* kv = event.find("size"); kv) {
      fail(name, kv->line, "'size' only applies to generation_size");
    }
    if (config.event.builder == "custom") {
      config.event.classes = static_cast<int>(event.require_int("classes"));
      if (config.event.classes < 1)
        fail(name, event.raw().line, "classes must be >= 1");
      const RawKV& base = event.require("base");
      // "type:class, type:class, ..."
      std::istringstream pairs(base.value);
      std::string item;
      while (std::getline(pairs, item, ',')) {
        const std::string entry = trim(item);
        const std::size_t colon = entry.find(':');
        if (colon == std::string::npos)
          fail(name, base.line, "base: expected 'type:class' pairs");
        errno = 0;
        char* end = nullptr;
        const long long t = std::strtoll(entry.c_str(), &end, 10);
        bool ok = errno == 0 && end == entry.c_str() + colon;
        errno = 0;
        const long long cls = std::strtoll(entry.c_str() + colon + 1, &end, 10);
        ok = ok && errno == 0 && *end == '\0';
        if (!ok) fail(name, base.line, "base: bad pair '" + entry + "'");
        if (t < 1 || t > config.num_types)
          fail(name, base.line, "base: type " + std::to_string(t) +
                                    " outside 1.." +
                                    std::to_string(config.num_types));
        if (cls < 1 || cls > config.event.classes)
          fail(name, base.line, "base: class " + std::to_string(cls) +
                                    " outside 1.." +
                                    std::to_string(config.event.classes));
        for (const auto& [seen_t, seen_c] : config.event.base_map)
          if (seen_t == t)
            fail(name, base.line,
                 "base: type " + std::to_string(t) + " mapped twice");
        config.event.base_map.push_back(
            {static_cast<int>(t), static_cast<int>(cls)});
      }
      if (static_cast<int>(config.event.base_map.size()) != config.num_types)
        fail(name, base.line, "base: every type needs a class");
      std::sort(config.event.base_map.begin(), config.event.base_map.end());
    }
    config.event.target_class =
        static_cast<int>(event.get_int("target_class", 0));
    if (config.event.target_class < 0)
      fail(name, event.raw().line, "target_class must be >= 1 (or omitted)");
    event.reject_unknown_keys();
  }

  for (const auto& s : sections) {
    if (s.name != "event.predicate") continue;
    if (config.event.builder != "custom")
      fail(name, s.line, "[event.predicate] requires builder = custom");
    SectionReader block(s, name);
    PredicateConfig pred;
    pred.cls = static_cast<int>(block.require_int("class"));
    if (pred.cls < 1 || pred.cls > config.event.classes)
      fail(name, s.line,
           "class outside 1.." + std::to_string(config.event.classes));
    const RawKV& expr = block.require("expr");
    pred.level = static_cast<int>(block.get_int("level", -1));
    if (pred.level == 0 || pred.level < -1)
      fail(name, s.line, "level must be >= 1 when given");
    pred.line = expr.line;
    // Validate and canonicalize now so equality is structural.
    try {
      pred.expr = parse_predicate(expr.value, config.event.classes,
                                  config.num_types)
                      .to_string();
    } catch (const DomainError& e) {
      fail(name, expr.line, e.what());
    }
    block.reject_unknown_keys();
    config.event.predicates.push_back(std::move(pred));
  }
  if (config.event.builder == "custom") {
    for (int i = 1; i <= config.event.classes; ++i) {
      int found = 0;
      for (const auto& pred : config.event.predicates)
        if (pred.cls == i && pred.level == -1) ++found;
      if (found != 1)
        fail(name, 1,
             "custom event: class " + std::to_string(i) +
                 " needs exactly one default [event.predicate] block");
    }
    std::set<int> override_levels;
    for (const auto& pred : config.event.predicates)
      if (pred.level != -1) override_levels.insert(pred.level);
    for (int level : override_levels)
      for (int i = 1; i <= config.event.classes; ++i) {
        int found = 0;
        for (const auto& pred : config.event.predicates)
          if (pred.cls == i && pred.level == level) ++found;
        if (found != 1)
          fail(name, 1,
               "custom event: override level " + std::to_string(level) +
                   " needs exactly one predicate for class " +
                   std::to_string(i));
      }
    std::stable_sort(config.event.predicates.begin(),
                     config.event.predicates.end(),
                     [](const PredicateConfig& a, const PredicateConfig& b) {
                       if (a.level != b.level) return a.level < b.level;
                       return a.cls < b.cls;
                     });
  }

  if (const RawSection* s = find_one("sample", false)) {
    SectionReader sample(*s, name);
    if (const RawKV* kv = sample.find("seed"))
      config.sample.seed = sample.to_uint(*kv);
    config.sample.count = static_cast<int>(sample.get_int("count", 10));
    if (config.sample.count < 0)
      fail(name, s->line, "count must be >= 0");
    config.sample.root_type =
        static_cast<int>(sample.get_int("root_type", 1));
    if (config.sample.root_type < 1 ||
        config.sample.root_type > config.num_types)
      fail(name, s->line, "root_type outside 1.." +
                              std::to_string(config.num_types));
    sample.reject_unknown_keys();
  }

  return config;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::string dump_config(const ModelConfig& config) {
  std::ostringstream out;
  out << "[model]\n";
  out << "types = " << config.num_types << "\n";
  out << "height = " << config.height << "\n\n";
  out << "[offspring]\n";
  if (config.offspring.kind == OffspringConfig::Kind::poisson_thinning) {
    const auto& pp = config.offspring.poisson;
    out << "kind = poisson_thinning\n";
    out << "mu = " << format_double(pp.mu1) << ", " << format_double(pp.mu2)
        << "\n";
    out << "mutant_prob = " << format_double(pp.p1) << ", "
        << format_double(pp.p2) << "\n";
    out << "truncation_tail = " << format_double(pp.truncation_tail) << "\n";
  } else {
    out << "kind = table\n";
    for (const auto& law : config.offspring.laws) {
      out << "\n[offspring.table]\n";
      out << "type = " << law.type << "\n";
      if (law.has_range) {
        out << "levels = " << law.first_level << "..";
        if (law.last_level != -1) out << law.last_level;
        out << "\n";
      }
      out << "law = ";
      for (std::size_t a = 0; a < law.atoms.size(); ++a) {
        if (a > 0) out << ", ";
        out << "(";
        for (std::size_t j = 0; j < law.atoms[a].first.size(); ++j) {
          if (j > 0) out << ",";
          out << law.atoms[a].first[j];
        }
        out << "): " << format_double(law.atoms[a].second);
      }
      out << "\n";
    }
  }
  out << "\n[event]\n";
  out << "builder = " << config.event.builder << "\n";
  if (config.event.builder == "generation_size")
    out << "size = " << config.event.size << "\n";
  if (config.event.builder == "custom") {
    out << "classes = " << config.event.classes << "\n";
    out << "base = ";
    for (std::size_t b = 0; b < config.event.base_map.size(); ++b) {
      if (b > 0) out << ", ";
      out << config.event.base_map[b].first << ":"
          << config.event.base_map[b].second;
    }
    out << "\n";
  }
  if (config.event.target_class != 0)
    out << "target_class = " << config.event.target_class << "\n";
  for (const auto& pred : config.event.predicates) {
    out << "\n[event.predicate]\n";
    out << "class = " << pred.cls << "\n";
    if (pred.level != -1) out << "level = " << pred.level << "\n";
    out << "expr = " << pred.expr << "\n";
  }
  out << "\n[sample]\n";
  out << "seed = " << config.sample.seed << "\n";
  out << "count = " << config.sample.count << "\n";
  out << "root_type = " << config.sample.root_type << "\n";
  return out.str();
}

OffspringModel<double> make_offspring(const ModelConfig& config) {
  try {
    if (config.offspring.kind == OffspringConfig::Kind::poisson_thinning)
      return OffspringModel<double>::poisson_thinning(config.offspring.poisson);
    std::vector<TypeOffspring<double>> types(
        static_cast<std::size_t>(config.num_types));
    for (const auto& law : config.offspring.laws) {
      LawAtoms<double> atoms{law.atoms};
      auto& spec = types[static_cast<std::size_t>(law.type - 1)];
      if (law.has_range)
        spec.overrides.push_back(
            {law.first_level, law.last_level, std::move(atoms)});
      else
        spec.law = std::move(atoms);
    }
    return OffspringModel<double>(std::move(types));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("offspring: ") + e.what());
  }
}

namespace {

std::string matrix_to_string(const CountMatrix& c) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    out += i == 0 ? "[" : ",[";
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (j > 0) out += ",";
      out += std::to_string(c(i, j));
    }
    out += "]";
  }
  return out + "]";
}

Event make_custom_event(const ModelConfig& config) {
  const int m = config.event.classes;
  const int theta = config.num_types;
  // leaf type -> class lookup (base_map is sorted and complete)
  std::vector<int> base(static_cast<std::size_t>(theta) + 1, 1);
  for (const auto& [type, cls] : config.event.base_map)
    base[static_cast<std::size_t>(type)] = cls;
  auto base_classifier = [base](const TypedTree& tree) {
    return base[static_cast<std::size_t>(tree.type)];
  };
  std::vector<MatrixPredicate> defaults(static_cast<std::size_t>(m),
                                        MatrixPredicate::conjunction({}));
  std::map<int, std::vector<MatrixPredicate>> overrides;
  for (const auto& pred : config.event.predicates) {
    MatrixPredicate parsed = parse_predicate(pred.expr, m, theta);
    if (pred.level == -1) {
      defaults[static_cast<std::size_t>(pred.cls - 1)] = std::move(parsed);
    } else {
      auto it = overrides
                    .try_emplace(pred.level,
                                 std::vector<MatrixPredicate>(
                                     static_cast<std::size_t>(m),
                                     MatrixPredicate::conjunction({})))
                    .first;
      it->second[static_cast<std::size_t>(pred.cls - 1)] = std::move(parsed);
    }
  }
  RecursivePartition part(m, theta, 0, base_classifier, std::move(defaults),
                          std::move(overrides));
  const PartitionCheck check = validate_partition(part);
  if (!check.ok)
    throw ConfigError(
        "custom event: " + std::to_string(check.holds) +
        " predicates hold at level " + std::to_string(check.level) +
        " on counting matrix " + matrix_to_string(check.counterexample) +
        "; the classes must partition");
  const int target = config.event.target_class == 0
                         ? 1
                         : config.event.target_class;
  return Event{"custom", std::move(part), target, config.height};
}

}  // namespace

Event make_event(const ModelConfig& config) {
  try {
    const std::string& builder = config.event.builder;
    Event event = [&] {
      if (builder == "survival")
        return survival_event(config.height, config.num_types);
      if (builder == "mutant_at_generation") {
        if (config.num_types != 2)
          throw ConfigError("mutant_at_generation requires types = 2");
        return mutant_at_generation(config.height);
      }
      if (builder == "root_lineage_mutant") {
        if (config.num_types != 2)
          throw ConfigError("root_lineage_mutant requires types = 2");
        return root_lineage_mutant(config.height);
      }
      if (builder == "spontaneous_mutation_4class") {
        if (config.num_types != 2)
          throw ConfigError("spontaneous_mutation_4class requires types = 2");
        return spontaneous_mutation_4class(config.height);
      }
      if (builder == "generation_size") {
        if (config.num_types != 1)
          throw ConfigError("generation_size requires types = 1");
        return generation_size_event(config.event.size, config.height);
      }
      if (builder == "exact_height") {
        if (config.num_types != 1)
          throw ConfigError("exact_height requires types = 1");
        if (config.height < 3)
          throw ConfigError(
              "exact_height requires height >= 3 (conditions on height = "
              "height - 1, which must be >= 2)");
        return exact_height_event(config.height - 1);
      }
      return make_custom_event(config);
    }();
    if (config.event.target_class != 0) {
      if (config.event.target_class > event.partition.num_classes())
        throw ConfigError("target_class " +
                          std::to_string(config.event.target_class) +
                          " exceeds the event's " +
                          std::to_string(event.partition.num_classes()) +
                          " classes");
      event.target_class = config.event.target_class;
    }
    return event;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("event: ") + e.what());
  }
}

GwParams<double> make_params(const ModelConfig& config) {
  return GwParams<double>{config.height, make_offspring(config)};
}

}  // namespace cgw
