// Command line front end: encode trees, generate synthetic workloads, verify
// evaluation strategies against the serial reference, time them, replay them
// on the lockstep simulator and evaluate the cost model.
//
// Exit codes: 0 success, 1 verification mismatch, 2 usage or configuration
// error, 3 I/O, parse or schema error.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectree/bench.hpp"
#include "spectree/cost_model.hpp"
#include "spectree/dataset.hpp"
#include "spectree/errors.hpp"
#include "spectree/eval_serial.hpp"
#include "spectree/io.hpp"
#include "spectree/synthetic.hpp"
#include "spectree/tree.hpp"
#include "spectree/warp_sim.hpp"

namespace {

using namespace spectree;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

void write_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw IoError("cannot open " + out_path + " for writing");
  }
  out << text;
  if (!out) {
    throw IoError("failed writing " + out_path);
  }
}

// ---------------------------------------------------------------------------
// shared evaluation geometry flags

struct GeometryOpts {
  std::uint32_t workers = 0;  // 0 resolves to hardware concurrency
  std::uint32_t chunk = 0;    // 0 resolves to ceil(records / workers)
  std::uint32_t group_lanes = 0;  // 0 resolves to one lane per internal node
  std::uint32_t groups = 0;       // 0 resolves to ceil(records / m)
  std::uint32_t records_per_group = 32;
  std::uint32_t reductions = 2;
  bool compound = false;
};

void add_geometry_flags(CLI::App& cmd, GeometryOpts& opts) {
  cmd.add_option("--workers", opts.workers,
                 "Data-parallel logical workers (default: hardware threads)");
  cmd.add_option("--chunk", opts.chunk,
                 "Records per data-parallel worker (default: even split)");
  cmd.add_option("--group-lanes", opts.group_lanes,
                 "Speculative lanes per record group (default: one per "
                 "internal node)");
  cmd.add_option("--groups", opts.groups,
                 "Speculative record groups (default: cover the dataset)");
  cmd.add_option("--records-per-group", opts.records_per_group,
                 "Records per speculative group");
  cmd.add_option("--reductions-per-iter", opts.reductions,
                 "Successor reductions per loop iteration");
  cmd.add_flag("--compound", opts.compound,
               "Apply reductions as one in-place compound statement instead "
               "of barrier-separated steps");
}

DataParallelConfig resolve_data(const GeometryOpts& opts,
                                std::size_t records) {
  DataParallelConfig config;
  config.workers = opts.workers != 0
                       ? opts.workers
                       : std::max(1u, std::thread::hardware_concurrency());
  config.chunk =
      opts.chunk != 0
          ? opts.chunk
          : static_cast<std::uint32_t>(
                std::max<std::size_t>(1, (records + config.workers - 1) /
                                             config.workers));
  return config;
}

SpeculativeConfig resolve_speculative(const GeometryOpts& opts,
                                      const EncodedTree& tree,
                                      std::size_t records) {
  SpeculativeConfig config;
  config.group_lanes = opts.group_lanes != 0
                           ? opts.group_lanes
                           : std::max(1u, (tree.size() - 1) / 2);
  config.records_per_group = opts.records_per_group;
  config.groups =
      opts.groups != 0
          ? opts.groups
          : static_cast<std::uint32_t>(
                std::max<std::size_t>(1, (records + config.records_per_group -
                                          1) /
                                             config.records_per_group));
  config.reductions_per_iteration = opts.reductions;
  config.mode = opts.compound ? ReductionMode::compound_in_place
                              : ReductionMode::barrier_separated;
  return config;
}

std::vector<Strategy> parse_strategies(const std::vector<std::string>& names,
                                       std::vector<Strategy> fallback) {
  if (names.empty()) {
    return fallback;
  }
  std::vector<Strategy> strategies;
  for (const std::string& name : names) {
    const auto strategy = strategy_from_name(name);
    if (!strategy) {
      throw ArgumentError("unknown strategy '" + name + "'");
    }
    strategies.push_back(*strategy);
  }
  return strategies;
}

// ---------------------------------------------------------------------------
// encode

struct EncodeOpts {
  std::string in_path;
  std::string out_path;
};

std::unique_ptr<LinkedNode> nested_from_json(const nlohmann::json& item,
                                             const std::string& name,
                                             const std::string& path) {
  if (!item.is_object()) {
    throw SchemaError(name + ": " + path + ": node must be an object");
  }
  if (item.contains("class")) {
    if (!item["class"].is_number_unsigned()) {
      throw SchemaError(name + ": " + path + ": class must be unsigned");
    }
    return make_leaf(item["class"].get<std::uint32_t>());
  }
  if (!item.contains("attr") || !item.contains("thr") ||
      !item.contains("left") || !item.contains("right")) {
    throw SchemaError(name + ": " + path +
                      ": split node needs attr, thr, left, right");
  }
  if (!item["attr"].is_number_unsigned() || !item["thr"].is_number()) {
    throw SchemaError(name + ": " + path + ": attr/thr types are invalid");
  }
  return make_split(item["attr"].get<std::uint32_t>(),
                    item["thr"].get<float>(),
                    nested_from_json(item["left"], name, path + ".left"),
                    nested_from_json(item["right"], name, path + ".right"));
}

int cmd_encode(const EncodeOpts& opts) {
  std::ifstream in(opts.in_path);
  if (!in) {
    throw IoError("cannot open " + opts.in_path + " for reading");
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(opts.in_path + ": invalid JSON: " + e.what());
  }

  std::optional<EncodedTree> tree;
  if (doc.is_object() && doc.contains("nodes")) {
    // Already breadth-first: reload through the schema validator.
    std::istringstream stream(doc.dump());
    tree = load_tree_json(stream, opts.in_path);
    const auto findings = validate(*tree);
    if (!findings.empty()) {
      for (const Diagnostic& finding : findings) {
        std::cerr << opts.in_path << ": node " << finding.node << ": "
                  << finding.message << "\n";
      }
      throw SchemaError(opts.in_path + ": " +
                        std::to_string(findings.size()) +
                        " structural problem(s)");
    }
  } else {
    const auto root = nested_from_json(doc, opts.in_path, "root");
    tree = encode_breadth_first(*root);
  }

  save_tree_json(*tree, opts.out_path);
  const TreeStats s = stats(*tree);
  std::cout << "nodes=" << s.nodes << " leaves=" << s.leaves
            << " depth=" << s.depth << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen

struct GenOpts {
  std::uint32_t depth = 4;
  std::uint32_t leaves = 8;
  std::uint32_t arity = 4;
  std::uint32_t classes = 4;
  std::uint64_t records = 1024;
  std::uint32_t tile = 1;
  std::string distribution = "uniform";
  std::uint64_t seed = 1;
  bool shuffle = false;
  bool like_paper = false;
  std::string out_tree = "tree.json";
  std::string out_data = "dataset.csv";
};

int cmd_gen(GenOpts opts) {
  if (opts.like_paper) {
    // Reference workload: 31-node/16-leaf/depth-11 tree over 19 attributes
    // and 16,384 base records tiled four times to 65,536.
    opts.depth = 11;
    opts.leaves = 16;
    opts.arity = 19;
    opts.classes = 7;
    opts.records = 16384;
    opts.tile = 4;
  }
  const EncodedTree tree = generate_synthetic_tree(
      opts.depth, opts.leaves, opts.arity, opts.classes, opts.seed);
  Dataset dataset = generate_synthetic_dataset(
      opts.records, opts.arity, opts.seed + 1,
      opts.distribution == "gaussian" ? Distribution::gaussian
                                      : Distribution::uniform);
  if (opts.shuffle) {
    dataset = shuffle_dataset(dataset, opts.seed + 2);
  }
  if (opts.tile != 1) {
    dataset = tile_dataset(dataset, opts.tile);
  }
  save_tree_json(tree, opts.out_tree);
  save_dataset_csv(dataset, opts.out_data);
  const TreeStats s = stats(tree);
  std::cout << "tree: nodes=" << s.nodes << " leaves=" << s.leaves
            << " depth=" << s.depth << " -> " << opts.out_tree << "\n";
  std::cout << "dataset: records=" << dataset.count()
            << " arity=" << dataset.arity() << " -> " << opts.out_data
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
  std::string tree_path;
  std::string data_path;
  std::vector<std::string> strategies;
  GeometryOpts geometry;
  bool inject_mismatch = false;
  std::string save_path;  // optionally persist the serial classes
};

int cmd_verify(const VerifyOpts& opts) {
  const EncodedTree tree = load_tree_json(opts.tree_path);
  const Dataset dataset = load_dataset_csv(opts.data_path);
  const auto strategies = parse_strategies(
      opts.strategies,
      {Strategy::serial, Strategy::data_parallel, Strategy::speculative,
       Strategy::speculative_basic});
  const DataParallelConfig data = resolve_data(opts.geometry, dataset.count());
  const SpeculativeConfig speculative =
      resolve_speculative(opts.geometry, tree, dataset.count());

  if (!opts.save_path.empty()) {
    save_assignments(eval_serial(tree, dataset), opts.save_path);
  }

  bool all_ok = true;
  const auto comparisons =
      verify_strategies(tree, dataset, strategies, data, speculative);
  for (const StrategyComparison& comparison : comparisons) {
    if (comparison.matches()) {
      std::cout << strategy_name(comparison.strategy) << ": OK ("
                << dataset.count() << " records)\n";
    } else {
      all_ok = false;
      std::cout << strategy_name(comparison.strategy) << ": MISMATCH at record "
                << *comparison.first_mismatch << ": expected "
                << comparison.expected << ", got " << comparison.actual << " ("
                << comparison.mismatches << " total)\n";
    }
  }

  if (opts.inject_mismatch) {
    // Detector self-test: corrupt one computed class and require the
    // comparison to flag exactly that record.
    ClassAssignment reference = eval_serial(tree, dataset);
    ClassAssignment corrupted = reference;
    if (corrupted.empty()) {
      throw ArgumentError("cannot inject a mismatch into an empty dataset");
    }
    const std::size_t index = corrupted.size() / 2;
    corrupted[index] += 1;
    std::uint64_t found = 0;
    std::size_t found_index = 0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
      if (corrupted[i] != reference[i]) {
        if (found == 0) {
          found_index = i;
        }
        ++found;
      }
    }
    std::cout << "injected corruption detected at record " << found_index
              << " (" << found << " mismatch)\n";
    return kExitMismatch;
  }
  return all_ok ? kExitOk : kExitMismatch;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOpts {
  std::string tree_path;
  std::string data_path;
  std::vector<std::string> strategies;
  GeometryOpts geometry;
  std::uint32_t iterations = 500;
  std::uint32_t warmup = 10;
  bool metrics = false;
  std::uint32_t warp_width = 32;
  bool no_half_warp = false;
  bool verbose = false;
  std::string format = "table";
  std::string out_path;
};

int cmd_bench(const BenchOpts& opts) {
  const EncodedTree tree = load_tree_json(opts.tree_path);
  const Dataset dataset = load_dataset_csv(opts.data_path);

  BenchConfig config;
  config.strategies = parse_strategies(
      opts.strategies, {Strategy::serial, Strategy::data_parallel,
                        Strategy::speculative});
  config.iterations = opts.iterations;
  config.warmup = opts.warmup;
  config.data_parallel = resolve_data(opts.geometry, dataset.count());
  config.speculative =
      resolve_speculative(opts.geometry, tree, dataset.count());
  config.collect_metrics = opts.metrics;
  config.warp = {opts.warp_width, !opts.no_half_warp};
  config.keep_samples = opts.verbose;

  const BenchReport report = run_bench(tree, dataset, config);
  std::string text;
  if (opts.format == "json") {
    text = report_to_json(report);
  } else if (opts.format == "csv") {
    text = report_to_csv(report);
  } else {
    text = report_to_table(report);
  }
  write_text(text, opts.out_path);
  return report.all_match ? kExitOk : kExitMismatch;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
  std::string tree_path;
  std::string data_path;
  std::vector<std::string> strategies;
  GeometryOpts geometry;
  std::uint32_t warp_width = 32;
  bool no_half_warp = false;
  std::string format = "csv";
  std::string out_path;
};

int cmd_simulate(const SimulateOpts& opts) {
  const EncodedTree tree = load_tree_json(opts.tree_path);
  const Dataset dataset = load_dataset_csv(opts.data_path);
  const auto strategies = parse_strategies(
      opts.strategies, {Strategy::data_parallel, Strategy::speculative});
  const DataParallelConfig data = resolve_data(opts.geometry, dataset.count());
  const SpeculativeConfig speculative =
      resolve_speculative(opts.geometry, tree, dataset.count());
  const WarpConfig warp{opts.warp_width, !opts.no_half_warp};

  std::vector<std::pair<Strategy, ExecMetrics>> runs;
  for (const Strategy strategy : strategies) {
    switch (strategy) {
      case Strategy::serial:
        throw ArgumentError(
            "the serial strategy has no lockstep execution to simulate");
      case Strategy::data_parallel:
        runs.emplace_back(strategy,
                          simulate_data_parallel(tree, dataset, warp, data));
        break;
      case Strategy::speculative:
        runs.emplace_back(
            strategy, simulate_speculative(tree, dataset, warp, speculative,
                                           SpeculativeVariant::mapped_lanes));
        break;
      case Strategy::speculative_basic: {
        SpeculativeConfig basic = speculative;
        basic.group_lanes = tree.size();
        runs.emplace_back(
            strategy, simulate_speculative(tree, dataset, warp, basic,
                                           SpeculativeVariant::all_lanes));
        break;
      }
    }
  }

  std::string text;
  if (opts.format == "json") {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& [strategy, metrics] : runs) {
      doc.push_back({{"strategy", strategy_name(strategy)},
                     {"warp_width", warp.warp_width},
                     {"half_warp", warp.half_warp},
                     {"divergent_branches", metrics.divergent_branches},
                     {"serialized_passes", metrics.serialized_passes},
                     {"barriers", metrics.barriers},
                     {"node_evals", metrics.node_evals},
                     {"reduction_iterations", metrics.reduction_iterations},
                     {"lane_idle_slots", metrics.lane_idle_slots}});
    }
    text = doc.dump(2) + "\n";
  } else if (opts.format == "table") {
    std::ostringstream table;
    for (const auto& [strategy, metrics] : runs) {
      table << strategy_name(strategy)
            << ": divergent_branches=" << metrics.divergent_branches
            << " serialized_passes=" << metrics.serialized_passes
            << " barriers=" << metrics.barriers
            << " node_evals=" << metrics.node_evals
            << " reduction_iterations=" << metrics.reduction_iterations
            << " lane_idle_slots=" << metrics.lane_idle_slots << "\n";
    }
    if (runs.size() == 2) {
      table << "\n" << to_text(compare(runs[0].second, runs[1].second));
    }
    text = table.str();
  } else {
    text =
        "strategy,warp_width,half_warp,divergent_branches,serialized_passes,"
        "barriers,node_evals,reduction_iterations,lane_idle_slots\n";
    for (const auto& [strategy, metrics] : runs) {
      text += strategy_name(strategy);
      text += ",";
      text += std::to_string(warp.warp_width);
      text += warp.half_warp ? ",true" : ",false";
      text += "," + std::to_string(metrics.divergent_branches);
      text += "," + std::to_string(metrics.serialized_passes);
      text += "," + std::to_string(metrics.barriers);
      text += "," + std::to_string(metrics.node_evals);
      text += "," + std::to_string(metrics.reduction_iterations);
      text += "," + std::to_string(metrics.lane_idle_slots);
      text += "\n";
    }
  }
  write_text(text, opts.out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// cost

struct CostOpts {
  CostParams base;
  std::vector<std::string> sweeps;
  bool asymptotic = false;
  std::string out_path;
};

SweepAxis parse_sweep(const std::string& text) {
  const auto equals = text.find('=');
  if (equals == std::string::npos) {
    throw ArgumentError("sweep must look like param=v1,v2,...: '" + text +
                        "'");
  }
  const std::string name = text.substr(0, equals);
  SweepAxis axis{CostParam::records, {}};
  bool known = false;
  for (const CostParam param :
       {CostParam::records, CostParam::processors, CostParam::group_lanes,
        CostParam::groups, CostParam::mean_depth, CostParam::t_eval,
        CostParam::t_link, CostParam::t_invoke, CostParam::sigma,
        CostParam::gamma}) {
    if (name == cost_param_name(param)) {
      axis.param = param;
      known = true;
      break;
    }
  }
  if (!known) {
    throw ArgumentError("unknown sweep parameter '" + name + "'");
  }
  std::string_view rest = std::string_view(text).substr(equals + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view cell =
        comma == std::string_view::npos ? rest : rest.substr(0, comma);
    double value = 0;
    const auto result =
        std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (result.ec != std::errc{} || result.ptr != cell.data() + cell.size() ||
        cell.empty()) {
      throw ArgumentError("bad sweep value '" + std::string(cell) + "'");
    }
    axis.values.push_back(value);
    if (comma == std::string_view::npos) {
      break;
    }
    rest.remove_prefix(comma + 1);
  }
  return axis;
}

int cmd_cost(const CostOpts& opts) {
  std::vector<SweepAxis> axes;
  axes.reserve(opts.sweeps.size());
  for (const std::string& sweep : opts.sweeps) {
    axes.push_back(parse_sweep(sweep));
  }
  const std::string csv =
      sweep_csv(opts.base, axes,
                opts.asymptotic ? CostMode::asymptotic : CostMode::exact);
  write_text(csv, opts.out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classification tree evaluation toolkit"};
  app.require_subcommand(1);

  EncodeOpts encode_opts;
  CLI::App* encode = app.add_subcommand(
      "encode", "Re-encode a tree (nested or breadth-first JSON) into "
                "canonical breadth-first JSON");
  encode->add_option("--in", encode_opts.in_path, "Input tree JSON")
      ->required();
  encode->add_option("--out", encode_opts.out_path, "Output tree JSON")
      ->required();

  GenOpts gen_opts;
  CLI::App* gen = app.add_subcommand(
      "gen", "Generate a synthetic tree and dataset");
  gen->add_option("--depth", gen_opts.depth, "Tree depth in edges");
  gen->add_option("--leaves", gen_opts.leaves, "Leaf count");
  gen->add_option("--arity", gen_opts.arity, "Attributes per record");
  gen->add_option("--classes", gen_opts.classes, "Class count");
  gen->add_option("--records", gen_opts.records, "Base record count");
  gen->add_option("--tile", gen_opts.tile, "Dataset tiling factor");
  gen->add_option("--distribution", gen_opts.distribution,
                  "Value distribution")
      ->check(CLI::IsMember({"uniform", "gaussian"}));
  gen->add_option("--seed", gen_opts.seed, "Generator seed");
  gen->add_flag("--shuffle", gen_opts.shuffle,
                "Shuffle record order before tiling");
  gen->add_flag("--like-paper", gen_opts.like_paper,
                "Reference workload: 31-node/16-leaf/depth-11 tree, 19 "
                "attributes, 16,384 records tiled to 65,536");
  gen->add_option("--out-tree", gen_opts.out_tree, "Tree output path");
  gen->add_option("--out-data", gen_opts.out_data, "Dataset output path");

  VerifyOpts verify_opts;
  CLI::App* verify = app.add_subcommand(
      "verify", "Check every strategy's classes against the serial "
                "reference");
  verify->add_option("--tree", verify_opts.tree_path, "Tree JSON")->required();
  verify->add_option("--data", verify_opts.data_path, "Dataset CSV")
      ->required();
  verify->add_option("--strategy", verify_opts.strategies,
                     "Strategy to check (repeatable; default: all)")
      ->check(CLI::IsMember({"serial", "data", "spec", "spec-basic"}));
  add_geometry_flags(*verify, verify_opts.geometry);
  verify->add_flag("--inject-mismatch", verify_opts.inject_mismatch,
                   "Self-test: corrupt one class and prove detection "
                   "(always exits 1)");
  verify->add_option("--save", verify_opts.save_path,
                     "Also write the serial classes to this file");

  BenchOpts bench_opts;
  CLI::App* bench = app.add_subcommand("bench", "Time evaluation strategies");
  bench->add_option("--tree", bench_opts.tree_path, "Tree JSON")->required();
  bench->add_option("--data", bench_opts.data_path, "Dataset CSV")
      ->required();
  bench->add_option("--strategy", bench_opts.strategies,
                    "Strategy to time (repeatable; default: serial, data, "
                    "spec)")
      ->check(CLI::IsMember({"serial", "data", "spec", "spec-basic"}));
  add_geometry_flags(*bench, bench_opts.geometry);
  bench->add_option("--iterations", bench_opts.iterations,
                    "Timed iterations per strategy");
  bench->add_option("--warmup", bench_opts.warmup,
                    "Untimed warm-up iterations per strategy");
  bench->add_flag("--metrics", bench_opts.metrics,
                  "Attach lockstep execution metrics per strategy");
  bench->add_option("--warp-width", bench_opts.warp_width,
                    "Warp width for --metrics");
  bench->add_flag("--no-half-warp", bench_opts.no_half_warp,
                  "Pack record groups at exact width for --metrics");
  bench->add_flag("--verbose", bench_opts.verbose,
                  "Keep raw per-iteration samples in the report");
  bench->add_option("--format", bench_opts.format, "Output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  bench->add_option("--out", bench_opts.out_path,
                    "Write the report here instead of stdout");

  SimulateOpts simulate_opts;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Replay strategies on the lockstep warp model");
  simulate->add_option("--tree", simulate_opts.tree_path, "Tree JSON")
      ->required();
  simulate->add_option("--data", simulate_opts.data_path, "Dataset CSV")
      ->required();
  simulate->add_option("--strategy", simulate_opts.strategies,
                       "Strategy to replay (repeatable; default: data, spec)")
      ->check(CLI::IsMember({"data", "spec", "spec-basic"}));
  add_geometry_flags(*simulate, simulate_opts.geometry);
  simulate->add_option("--warp-width", simulate_opts.warp_width,
                       "Lanes per warp (power of two)");
  simulate->add_flag("--no-half-warp", simulate_opts.no_half_warp,
                     "Pack record groups at exact width");
  simulate->add_option("--format", simulate_opts.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "table"}));
  simulate->add_option("--out", simulate_opts.out_path,
                       "Write the metrics here instead of stdout");

  CostOpts cost_opts;
  CLI::App* cost = app.add_subcommand(
      "cost", "Evaluate the execution time model over a parameter sweep");
  cost->add_option("--records", cost_opts.base.records, "M");
  cost->add_option("--processors", cost_opts.base.processors, "P");
  cost->add_option("--group-lanes", cost_opts.base.group_lanes, "p");
  cost->add_option("--groups", cost_opts.base.groups, "G");
  cost->add_option("--mean-depth", cost_opts.base.mean_depth, "d_mu");
  cost->add_option("--t-eval", cost_opts.base.t_eval,
                   "Per-node predicate cost");
  cost->add_option("--t-link", cost_opts.base.t_link,
                   "Per-node successor lookup cost");
  cost->add_option("--t-invoke", cost_opts.base.t_invoke,
                   "Kernel invocation overhead");
  cost->add_option("--sigma", cost_opts.base.sigma,
                   "Staging cost per record");
  cost->add_option("--gamma", cost_opts.base.gamma, "Fixed staging cost");
  cost->add_flag("--asymptotic", cost_opts.asymptotic,
                 "Drop constant overheads (gamma, t_invoke)");
  cost->add_option("--sweep", cost_opts.sweeps,
                   "Sweep axis param=v1,v2,... (repeatable, Cartesian)");
  cost->add_option("--out", cost_opts.out_path,
                   "Write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encode) {
      return cmd_encode(encode_opts);
    }
    if (*gen) {
      return cmd_gen(gen_opts);
    }
    if (*verify) {
      return cmd_verify(verify_opts);
    }
    if (*bench) {
      return cmd_bench(bench_opts);
    }
    if (*simulate) {
      return cmd_simulate(simulate_opts);
    }
    if (*cost) {
      return cmd_cost(cost_opts);
    }
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
