#include "spectree/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>
#include <utility>

#include <json.hpp>

#include "spectree/errors.hpp"
#include "spectree/eval_serial.hpp"

namespace spectree {

namespace {

using Clock = std::chrono::steady_clock;

double to_us(Clock::duration d) {
  return std::chrono::duration<double, std::micro>(d).count();
}

// Median gap between two adjacent clock reads. Reported alongside the
// timings so readers can judge resolution; never subtracted from samples.
double measure_timer_overhead() {
  std::vector<double> deltas(1000);
  for (double& delta : deltas) {
    const auto a = Clock::now();
    const auto b = Clock::now();
    delta = to_us(b - a);
  }
  std::nth_element(deltas.begin(), deltas.begin() + deltas.size() / 2,
                   deltas.end());
  return deltas[deltas.size() / 2];
}

const char* os_name() {
#if defined(__linux__)
  return "linux";
#elif defined(__APPLE__)
  return "darwin";
#elif defined(_WIN32)
  return "windows";
#else
  return "unknown";
#endif
}

SpeculativeConfig basic_config(const SpeculativeConfig& config,
                               const EncodedTree& tree) {
  // The all-lanes kernel fixes its lane count at one per node.
  SpeculativeConfig basic = config;
  basic.group_lanes = tree.size();
  return basic;
}

ClassAssignment run_kernel(Strategy strategy, const EncodedTree& tree,
                           const Dataset& dataset,
                           const DataParallelConfig& data,
                           const SpeculativeConfig& speculative) {
  switch (strategy) {
    case Strategy::serial:
      return eval_serial(tree, dataset);
    case Strategy::data_parallel:
      return eval_data_parallel(tree, dataset, data);
    case Strategy::speculative:
      return eval_speculative(tree, dataset, speculative);
    case Strategy::speculative_basic:
      return eval_speculative_basic(tree, dataset,
                                    basic_config(speculative, tree));
  }
  throw ArgumentError("unknown strategy");
}

StrategyComparison compare_to_reference(Strategy strategy,
                                        const ClassAssignment& reference,
                                        const ClassAssignment& actual) {
  StrategyComparison comparison;
  comparison.strategy = strategy;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (actual[i] != reference[i]) {
      if (comparison.mismatches == 0) {
        comparison.first_mismatch = i;
        comparison.expected = reference[i];
        comparison.actual = actual[i];
      }
      ++comparison.mismatches;
    }
  }
  return comparison;
}

}  // namespace

const char* strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::serial:
      return "serial";
    case Strategy::data_parallel:
      return "data";
    case Strategy::speculative:
      return "spec";
    case Strategy::speculative_basic:
      return "spec-basic";
  }
  return "unknown";
}

std::optional<Strategy> strategy_from_name(std::string_view name) {
  if (name == "serial") {
    return Strategy::serial;
  }
  if (name == "data") {
    return Strategy::data_parallel;
  }
  if (name == "spec") {
    return Strategy::speculative;
  }
  if (name == "spec-basic") {
    return Strategy::speculative_basic;
  }
  return std::nullopt;
}

TimingStats summarize(std::span<const double> samples_us) {
  TimingStats stats;
  if (samples_us.empty()) {
    return stats;
  }
  stats.iterations = static_cast<std::uint32_t>(samples_us.size());
  stats.min_us = samples_us[0];
  stats.max_us = samples_us[0];
  double sum = 0;
  for (const double sample : samples_us) {
    stats.min_us = std::min(stats.min_us, sample);
    stats.max_us = std::max(stats.max_us, sample);
    sum += sample;
  }
  stats.mean_us = sum / static_cast<double>(samples_us.size());
  double variance = 0;
  for (const double sample : samples_us) {
    const double centered = sample - stats.mean_us;
    variance += centered * centered;
  }
  variance /= static_cast<double>(samples_us.size());
  stats.stddev_us = std::sqrt(variance);
  return stats;
}

std::vector<StrategyComparison> verify_strategies(
    const EncodedTree& tree, const Dataset& dataset,
    std::span<const Strategy> strategies, const DataParallelConfig& data,
    const SpeculativeConfig& speculative) {
  const ClassAssignment reference = eval_serial(tree, dataset);
  std::vector<StrategyComparison> comparisons;
  comparisons.reserve(strategies.size());
  for (const Strategy strategy : strategies) {
    const ClassAssignment actual =
        run_kernel(strategy, tree, dataset, data, speculative);
    comparisons.push_back(compare_to_reference(strategy, reference, actual));
  }
  return comparisons;
}

BenchReport run_bench(const EncodedTree& tree, const Dataset& dataset,
                      const BenchConfig& config) {
  if (config.iterations == 0) {
    throw ArgumentError("bench iterations must be >= 1");
  }
  if (config.strategies.empty()) {
    throw ArgumentError("bench requires at least one strategy");
  }
  // Every decomposition is validated before any clock starts.
  check_attribute_range(tree, dataset);
  for (const Strategy strategy : config.strategies) {
    switch (strategy) {
      case Strategy::serial:
        break;
      case Strategy::data_parallel:
        validate_data_parallel(config.data_parallel, dataset.count());
        break;
      case Strategy::speculative:
        validate_speculative(config.speculative, tree, dataset.count(),
                             /*basic_lanes=*/false);
        break;
      case Strategy::speculative_basic:
        validate_speculative(basic_config(config.speculative, tree), tree,
                             dataset.count(), /*basic_lanes=*/true);
        break;
    }
  }

  BenchReport report;
  report.os = os_name();
  report.hardware_threads = std::max(1u, std::thread::hardware_concurrency());
  report.iterations = config.iterations;
  report.warmup = config.warmup;
  report.tree = stats(tree);
  report.records = dataset.count();
  report.arity = dataset.arity();
  report.data_parallel = config.data_parallel;
  report.speculative = config.speculative;
  report.warp = config.warp;
  report.metrics_collected = config.collect_metrics;
  report.checksum_before = dataset_checksum(dataset);

  // Lockstep metrics are deterministic; collect them up front so geometry
  // problems (warp width, lane fit) also surface before timing.
  std::vector<std::optional<ExecMetrics>> metrics(config.strategies.size());
  if (config.collect_metrics) {
    for (std::size_t s = 0; s < config.strategies.size(); ++s) {
      switch (config.strategies[s]) {
        case Strategy::serial:
          break;
        case Strategy::data_parallel:
          metrics[s] = simulate_data_parallel(tree, dataset, config.warp,
                                              config.data_parallel);
          break;
        case Strategy::speculative:
          metrics[s] =
              simulate_speculative(tree, dataset, config.warp,
                                   config.speculative,
                                   SpeculativeVariant::mapped_lanes);
          break;
        case Strategy::speculative_basic:
          metrics[s] = simulate_speculative(
              tree, dataset, config.warp, basic_config(config.speculative, tree),
              SpeculativeVariant::all_lanes);
          break;
      }
    }
  }

  const ClassAssignment reference = eval_serial(tree, dataset);
  report.timer_overhead_us = measure_timer_overhead();

  for (std::size_t s = 0; s < config.strategies.size(); ++s) {
    const Strategy strategy = config.strategies[s];
    StrategyReport entry;
    entry.strategy = strategy;
    entry.metrics = metrics[s];

    std::vector<double> outer_samples;
    std::vector<double> inner_samples;
    std::vector<double> alloc_samples;
    outer_samples.reserve(config.iterations);
    ClassAssignment last;

    const std::uint64_t total =
        static_cast<std::uint64_t>(config.warmup) + config.iterations;
    for (std::uint64_t i = 0; i < total; ++i) {
      const bool timed = i >= config.warmup;
      if (strategy == Strategy::serial) {
        // In-place on the caller's buffers: no staging, outer only.
        const auto outer0 = Clock::now();
        ClassAssignment result = eval_serial(tree, dataset);
        const auto outer1 = Clock::now();
        if (timed) {
          outer_samples.push_back(to_us(outer1 - outer0));
        }
        last = std::move(result);
        continue;
      }
      const auto outer0 = Clock::now();
      std::vector<float> values;
      std::vector<EncodedNode> node_copy;
      values.reserve(dataset.values().size());
      node_copy.reserve(tree.size());
      const auto alloc_done = Clock::now();
      values.insert(values.end(), dataset.values().begin(),
                    dataset.values().end());
      node_copy.assign(tree.nodes().begin(), tree.nodes().end());
      std::optional<Dataset> staged(std::in_place, dataset.arity(),
                                    std::move(values));
      std::optional<EncodedTree> staged_tree(std::in_place,
                                             std::move(node_copy));
      const auto inner0 = Clock::now();
      ClassAssignment result = run_kernel(strategy, *staged_tree, *staged,
                                          config.data_parallel,
                                          config.speculative);
      const auto inner1 = Clock::now();
      last = result;  // copy-out, still inside the outer window
      const auto free0 = Clock::now();
      staged.reset();
      staged_tree.reset();
      const auto free1 = Clock::now();
      const auto outer1 = Clock::now();
      if (timed) {
        outer_samples.push_back(to_us(outer1 - outer0));
        inner_samples.push_back(to_us(inner1 - inner0));
        alloc_samples.push_back(to_us(alloc_done - outer0) +
                                to_us(free1 - free0));
      }
    }

    entry.outer = summarize(outer_samples);
    if (!inner_samples.empty()) {
      entry.inner = summarize(inner_samples);
      entry.alloc = summarize(alloc_samples);
    }
    if (config.keep_samples) {
      entry.outer_samples_us = std::move(outer_samples);
      entry.inner_samples_us = std::move(inner_samples);
    }
    entry.verification = compare_to_reference(strategy, reference, last);
    report.all_match = report.all_match && entry.verification.matches();
    report.strategies.push_back(std::move(entry));
  }

  report.checksum_after = dataset_checksum(dataset);
  if (report.checksum_after != report.checksum_before) {
    throw Error("dataset checksum changed during benchmarking");
  }
  return report;
}

namespace {

using nlohmann::json;

json stats_to_json(const TimingStats& stats) {
  return json{{"mean_us", stats.mean_us},
              {"min_us", stats.min_us},
              {"max_us", stats.max_us},
              {"stddev_us", stats.stddev_us},
              {"iterations", stats.iterations}};
}

std::string hex64(std::uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

json metrics_to_json(const ExecMetrics& metrics) {
  return json{{"divergent_branches", metrics.divergent_branches},
              {"serialized_passes", metrics.serialized_passes},
              {"barriers", metrics.barriers},
              {"node_evals", metrics.node_evals},
              {"reduction_iterations", metrics.reduction_iterations},
              {"lane_idle_slots", metrics.lane_idle_slots}};
}

}  // namespace

std::string report_to_json(const BenchReport& report) {
  json doc;
  doc["version"] = 1;
  doc["machine"] = {{"os", report.os},
                    {"hardware_threads", report.hardware_threads},
                    {"timer", "steady_clock"}};
  doc["config"] = {
      {"iterations", report.iterations},
      {"warmup", report.warmup},
      {"tree",
       {{"nodes", report.tree.nodes},
        {"leaves", report.tree.leaves},
        {"depth", report.tree.depth}}},
      {"dataset", {{"records", report.records}, {"arity", report.arity}}},
      {"data_parallel",
       {{"workers", report.data_parallel.workers},
        {"chunk", report.data_parallel.chunk},
        {"exact_fit", report.data_parallel.exact_fit}}},
      {"speculative",
       {{"group_lanes", report.speculative.group_lanes},
        {"groups", report.speculative.groups},
        {"records_per_group", report.speculative.records_per_group},
        {"reductions_per_iteration",
         report.speculative.reductions_per_iteration},
        {"mode", report.speculative.mode == ReductionMode::barrier_separated
                     ? "barrier-separated"
                     : "compound-in-place"}}},
      {"warp",
       {{"warp_width", report.warp.warp_width},
        {"half_warp", report.warp.half_warp}}},
      {"metrics_collected", report.metrics_collected}};
  doc["timer_overhead_us"] = report.timer_overhead_us;
  doc["dataset_checksum_before"] = hex64(report.checksum_before);
  doc["dataset_checksum_after"] = hex64(report.checksum_after);

  json strategies = json::array();
  for (const StrategyReport& entry : report.strategies) {
    json item;
    item["name"] = strategy_name(entry.strategy);
    item["outer_us"] = stats_to_json(entry.outer);
    item["inner_us"] = entry.inner ? stats_to_json(*entry.inner) : json();
    item["alloc_us"] = entry.alloc ? stats_to_json(*entry.alloc) : json();
    item["metrics"] =
        entry.metrics ? metrics_to_json(*entry.metrics) : json();
    item["verification"] = {
        {"matches_serial", entry.verification.matches()},
        {"mismatches", entry.verification.mismatches}};
    if (!entry.outer_samples_us.empty()) {
      item["samples"] = {{"outer_us", entry.outer_samples_us},
                         {"inner_us", entry.inner_samples_us}};
    }
    strategies.push_back(std::move(item));
  }
  doc["strategies"] = std::move(strategies);
  doc["verification"] = {{"reference", "serial"},
                         {"all_match", report.all_match}};
  return doc.dump(2) + "\n";
}

namespace {

std::string fixed3(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  return buf;
}

void append_cell(std::string& line, const std::string& cell,
                 std::size_t width) {
  for (std::size_t pad = cell.size(); pad < width; ++pad) {
    line += ' ';
  }
  line += cell;
}

void append_stats(std::string& line, const std::optional<TimingStats>& stats) {
  constexpr std::size_t kWidth = 14;
  if (stats) {
    append_cell(line, fixed3(stats->mean_us), kWidth);
    append_cell(line, fixed3(stats->min_us), kWidth);
    append_cell(line, fixed3(stats->max_us), kWidth);
    append_cell(line, fixed3(stats->stddev_us), kWidth);
  } else {
    for (int c = 0; c < 4; ++c) {
      append_cell(line, "n/a", kWidth);
    }
  }
}

std::string left_cell(const std::string& cell, std::size_t width) {
  std::string padded = cell;
  while (padded.size() < width) {
    padded += ' ';
  }
  return padded;
}

}  // namespace

std::string report_to_table(const BenchReport& report) {
  std::ostringstream out;
  out << "records=" << report.records << " arity=" << report.arity
      << " tree_nodes=" << report.tree.nodes << " tree_leaves="
      << report.tree.leaves << " tree_depth=" << report.tree.depth << "\n";
  out << "iterations=" << report.iterations << " warmup=" << report.warmup
      << " (warm-up excluded from statistics)\n";
  out << "timer_overhead_us=" << fixed3(report.timer_overhead_us)
      << " (reported, not subtracted)\n";
  out << "dataset_checksum=" << hex64(report.checksum_before)
      << (report.checksum_after == report.checksum_before ? " (unchanged)"
                                                          : " (CHANGED)")
      << "\n\n";

  std::string header = left_cell("strategy", 12);
  append_cell(header, "iterations", 12);
  for (const char* window : {"outer", "inner"}) {
    append_cell(header, std::string(window) + "_mean_us", 14);
    append_cell(header, std::string(window) + "_min_us", 14);
    append_cell(header, std::string(window) + "_max_us", 14);
    append_cell(header, std::string(window) + "_sd_us", 14);
  }
  out << header << "\n";
  for (const StrategyReport& entry : report.strategies) {
    std::string line = left_cell(strategy_name(entry.strategy), 12);
    append_cell(line, std::to_string(entry.outer.iterations), 12);
    append_stats(line, entry.outer);
    append_stats(line, entry.inner);
    out << line << "\n";
  }

  bool any_alloc = false;
  for (const StrategyReport& entry : report.strategies) {
    any_alloc = any_alloc || entry.alloc.has_value();
  }
  if (any_alloc) {
    out << "\nstaging allocation (allocate + free, inside outer)\n";
    for (const StrategyReport& entry : report.strategies) {
      if (!entry.alloc) {
        continue;
      }
      std::string line = left_cell(strategy_name(entry.strategy), 12);
      append_cell(line, std::to_string(entry.alloc->iterations), 12);
      append_stats(line, entry.alloc);
      out << line << "\n";
    }
  }

  out << "\nverification: "
      << (report.all_match ? "all strategies match serial"
                           : "MISMATCH against serial")
      << "\n";
  return out.str();
}

std::string report_to_csv(const BenchReport& report) {
  std::string csv =
      "strategy,iterations,outer_mean_us,outer_min_us,outer_max_us,"
      "outer_stddev_us,inner_mean_us,inner_min_us,inner_max_us,"
      "inner_stddev_us,alloc_mean_us,alloc_min_us,alloc_max_us,"
      "alloc_stddev_us,matches_serial\n";
  const auto stats_cells = [](const std::optional<TimingStats>& stats) {
    if (!stats) {
      return std::string("n/a,n/a,n/a,n/a");
    }
    return fixed3(stats->mean_us) + "," + fixed3(stats->min_us) + "," +
           fixed3(stats->max_us) + "," + fixed3(stats->stddev_us);
  };
  for (const StrategyReport& entry : report.strategies) {
    csv += strategy_name(entry.strategy);
    csv += "," + std::to_string(entry.outer.iterations);
    csv += "," + stats_cells(entry.outer);
    csv += "," + stats_cells(entry.inner);
    csv += "," + stats_cells(entry.alloc);
    csv += entry.verification.matches() ? ",true\n" : ",false\n";
  }
  return csv;
}

}  // namespace spectree
