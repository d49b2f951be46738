// Command-line front end: class-probability tables, conditioned sampling,
// self-verification, and the mutation-model study figures.
//
// Exit codes: 0 success, 2 configuration problem, 3 the requested event has
// probability zero, 4 verification failure, 1 anything unexpected.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cgw/analysis.hpp"
#include "cgw/class_probs.hpp"
#include "cgw/config.hpp"
#include "cgw/errors.hpp"
#include "cgw/events.hpp"
#include "cgw/rng.hpp"
#include "cgw/sampler.hpp"
#include "cgw/tree.hpp"
#include "cgw/verify.hpp"

namespace {

struct Options {
  std::string config_path;
  bool dump_config = false;
  bool annotate = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int count = 0;
  bool count_set = false;
  int target_class = 0;  // 0: keep the event's target
  int root_type = 0;     // 0: keep the config's root type
  int threads = 1;
  std::string out;
  std::string scale = "quick";
  std::string figure = "all";
};

cgw::ModelConfig require_config(const Options& opt) {
  if (opt.config_path.empty())
    throw cgw::ConfigError("this command needs --config <file>");
  return cgw::load_config(opt.config_path);
}

/// Stream to --out when given, else stdout.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_)
        throw cgw::ConfigError(path + ": cannot open for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int run_probs(const Options& opt) {
  const cgw::ModelConfig config = require_config(opt);
  cgw::Event event = cgw::make_event(config);
  const cgw::GwParams<double> params = cgw::make_params(config);
  const auto tables = cgw::build_class_tables<double>(event, params);
  for (const std::string& warning : tables.probs.warnings)
    std::cerr << "warning: " << warning << "\n";

  OutputTarget target(opt.out);
  std::ostream& out = target.stream();
  out << "t,l,i,p\n";
  char buf[64];
  for (int t = 1; t <= tables.probs.num_types; ++t)
    for (int l = 0; l < static_cast<int>(tables.probs.layers.size()); ++l)
      for (int i = 1; i <= tables.probs.num_classes; ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", tables.probs.prob(t, l, i));
        out << t << "," << l << "," << i << "," << buf << "\n";
      }
  return 0;
}

void append_annotated(std::string& out, const cgw::TypedTree& tree, int level,
                      const cgw::RecursivePartition& part) {
  out += std::to_string(tree.type);
  out += ':';
  out += std::to_string(cgw::classify(tree, level, part));
  if (tree.children.empty()) return;
  out += '(';
  for (std::size_t j = 0; j < tree.children.size(); ++j) {
    if (j > 0) out += ',';
    append_annotated(out, tree.children[j], level - 1, part);
  }
  out += ')';
}

int run_sample(const Options& opt) {
  cgw::ModelConfig config = require_config(opt);
  if (opt.seed_set) config.sample.seed = opt.seed;
  if (opt.count_set) config.sample.count = opt.count;
  if (opt.root_type != 0) config.sample.root_type = opt.root_type;
  if (config.sample.root_type < 1 || config.sample.root_type > config.num_types)
    throw cgw::ConfigError("--root-type outside 1.." +
                           std::to_string(config.num_types));
  if (opt.threads < 1) throw cgw::ConfigError("--threads must be >= 1");

  cgw::Event event = cgw::make_event(config);
  if (opt.target_class != 0) {
    if (opt.target_class > event.partition.num_classes())
      throw cgw::ConfigError(
          "--class " + std::to_string(opt.target_class) + " exceeds the " +
          std::to_string(event.partition.num_classes()) + " event classes");
    event.target_class = opt.target_class;
  }
  const cgw::SamplerContext ctx =
      cgw::make_sampler_context(std::move(event), cgw::make_params(config));

  const int n = config.sample.count;
  const int root_type = config.sample.root_type;
  const int target = ctx.event.target_class;
  const cgw::RngStream base(config.sample.seed);

  // One independent stream per tree index: the output is a pure function of
  // (seed, index), so any thread count yields byte-identical results.
  std::vector<std::string> lines(static_cast<std::size_t>(n));
  auto render = [&](int index) {
    cgw::RngStream rng = base.split(static_cast<std::uint64_t>(index));
    const cgw::TypedTree tree =
        cgw::sample_conditioned_class(ctx, root_type, 0, target, rng);
    std::string& line = lines[static_cast<std::size_t>(index)];
    if (opt.annotate)
      append_annotated(line, tree, config.height, ctx.event.partition);
    else
      line = cgw::format_tree(tree);
  };

  const int workers = std::min(opt.threads, std::max(n, 1));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) render(i);
  } else {
    std::vector<std::exception_ptr> failures(
        static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < n; i += workers) render(i);
        } catch (...) {
          failures[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    for (auto& worker : pool) worker.join();
    for (const auto& failure : failures)
      if (failure) std::rethrow_exception(failure);
  }

  OutputTarget target_stream(opt.out);
  std::ostream& out = target_stream.stream();
  for (const std::string& line : lines) out << line << "\n";
  return 0;
}

int run_verify(const Options& opt) {
  cgw::VerifyScale scale = cgw::VerifyScale::quick;
  if (opt.scale == "quick")
    scale = cgw::VerifyScale::quick;
  else if (opt.scale == "full")
    scale = cgw::VerifyScale::full;
  else if (opt.scale == "broken")
    scale = cgw::VerifyScale::broken;
  else
    throw cgw::ConfigError("--scale must be quick, full, or broken");
  const auto outcomes = cgw::run_verification(scale);
  std::cout << cgw::format_verification_report(outcomes);
  return cgw::verification_passed(outcomes) ? 0 : 4;
}

int run_figures(const Options& opt) {
  const cgw::ModelConfig config = require_config(opt);
  if (config.offspring.kind != cgw::OffspringConfig::Kind::poisson_thinning)
    throw cgw::ConfigError(
        "figures need a poisson_thinning offspring model");
  int figure_id = 0;
  if (opt.figure == "all")
    figure_id = 0;
  else if (opt.figure == "1" || opt.figure == "2" || opt.figure == "3")
    figure_id = opt.figure[0] - '0';
  else
    throw cgw::ConfigError("figure must be 1, 2, 3, or all");

  const std::filesystem::path dir = opt.out.empty() ? "." : opt.out;
  std::filesystem::create_directories(dir);
  for (const cgw::FigureFile& file :
       cgw::figure_data(figure_id, config.offspring.poisson)) {
    const std::filesystem::path path = dir / file.name;
    std::ofstream out(path);
    if (!out)
      throw cgw::ConfigError(path.string() + ": cannot open for writing");
    out << file.csv;
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{
      "Level-dependent multi-type branching trees: class probabilities, "
      "exactly conditioned sampling, verification, and study figures."};
  app.fallthrough();
  app.require_subcommand(0, 1);
  app.add_option("--config", opt.config_path, "model/event config file");
  app.add_flag("--dump-config", opt.dump_config,
               "print the canonical form of --config and exit");
  auto* seed_opt =
      app.add_option("--seed", opt.seed, "sampling seed (overrides config)");
  auto* count_opt =
      app.add_option("--n", opt.count, "number of trees (overrides config)")
          ->check(CLI::NonNegativeNumber);
  app.add_option("--class", opt.target_class,
                 "condition on this class instead of the event's target")
      ->check(CLI::PositiveNumber);
  app.add_option("--root-type", opt.root_type,
                 "root type (overrides config)")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", opt.threads, "worker threads for sampling")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", opt.out,
                 "output file (probs/sample) or directory (figures)");
  app.add_flag("--annotate", opt.annotate,
               "print each node as type:class instead of type");

  CLI::App* probs =
      app.add_subcommand("probs", "print the class probability table as CSV");
  CLI::App* sample =
      app.add_subcommand("sample", "draw conditioned trees, one per line");
  CLI::App* verify = app.add_subcommand(
      "verify", "compare the sampler's law against brute-force enumeration");
  verify->add_option("--scale", opt.scale, "quick, full, or broken");
  CLI::App* figures = app.add_subcommand(
      "figures", "write the mutation-model study CSVs");
  figures->add_option("figure", opt.figure, "1, 2, 3, or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  opt.seed_set = seed_opt->count() > 0;
  opt.count_set = count_opt->count() > 0;

  try {
    if (opt.dump_config) {
      std::cout << cgw::dump_config(require_config(opt));
      return 0;
    }
    if (probs->parsed()) return run_probs(opt);
    if (sample->parsed()) return run_sample(opt);
    if (verify->parsed()) return run_verify(opt);
    if (figures->parsed()) return run_figures(opt);
    std::cout << app.help();
    return 2;
  } catch (const cgw::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cgw::ImpossibleEventError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
