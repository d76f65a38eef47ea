#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spectree/dataset.hpp"
#include "spectree/eval_data_parallel.hpp"
#include "spectree/eval_speculative.hpp"
#include "spectree/tree.hpp"
#include "spectree/warp_sim.hpp"

namespace spectree {

enum class Strategy { serial, data_parallel, speculative, speculative_basic };

const char* strategy_name(Strategy strategy);  // serial, data, spec, spec-basic
std::optional<Strategy> strategy_from_name(std::string_view name);

/// Population statistics over microsecond samples; stddev is 0 for a single
/// sample by construction.
struct TimingStats {
  double mean_us = 0;
  double min_us = 0;
  double max_us = 0;
  double stddev_us = 0;
  std::uint32_t iterations = 0;
};

TimingStats summarize(std::span<const double> samples_us);

/// Result of checking one strategy's classes against the serial reference.
struct StrategyComparison {
  Strategy strategy = Strategy::serial;
  std::uint64_t mismatches = 0;
  std::optional<std::uint64_t> first_mismatch;
  std::uint32_t expected = 0;  // serial class at the first mismatch
  std::uint32_t actual = 0;

  [[nodiscard]] bool matches() const noexcept { return mismatches == 0; }
};

/// Runs each strategy once and compares its classes against eval_serial.
std::vector<StrategyComparison> verify_strategies(
    const EncodedTree& tree, const Dataset& dataset,
    std::span<const Strategy> strategies, const DataParallelConfig& data,
    const SpeculativeConfig& speculative);

struct BenchConfig {
  std::vector<Strategy> strategies{Strategy::serial};
  std::uint32_t iterations = 500;
  std::uint32_t warmup = 10;  // excluded from statistics, disclosed in report
  DataParallelConfig data_parallel{};
  SpeculativeConfig speculative{};
  bool collect_metrics = false;  // attach lockstep ExecMetrics per strategy
  WarpConfig warp{};
  bool keep_samples = false;  // retain raw per-iteration samples
};

/// Timing detail for one strategy.
///
/// Outer wraps the whole round trip: staging-buffer allocation, copy-in, the
/// kernel, copy-out and buffer release. Inner wraps only the kernel. The
/// serial strategy runs in place on the caller's buffers, so it has outer
/// timing only. Allocation (staging buffer allocate + free) is its own line
/// item; it is also inside the outer window.
struct StrategyReport {
  Strategy strategy = Strategy::serial;
  TimingStats outer;
  std::optional<TimingStats> inner;
  std::optional<TimingStats> alloc;
  std::vector<double> outer_samples_us;  // kept when keep_samples
  std::vector<double> inner_samples_us;
  std::optional<ExecMetrics> metrics;
  StrategyComparison verification;  // against the serial reference
};

struct BenchReport {
  std::string os;
  std::uint32_t hardware_threads = 0;
  std::uint32_t iterations = 0;
  std::uint32_t warmup = 0;
  double timer_overhead_us = 0;  // measured once, reported, never subtracted
  TreeStats tree;
  std::uint64_t records = 0;
  std::uint32_t arity = 0;
  std::uint64_t checksum_before = 0;  // dataset checksum around the runs
  std::uint64_t checksum_after = 0;
  DataParallelConfig data_parallel;
  SpeculativeConfig speculative;
  WarpConfig warp;
  bool metrics_collected = false;
  std::vector<StrategyReport> strategies;
  bool all_match = true;  // every strategy agreed with the serial reference
};

/// Times every configured strategy over the same tree and dataset.
/// Geometry is validated before any clock starts; warm-up iterations run
/// first and are excluded; the monotonic clock's overhead is measured and
/// reported, not subtracted. The dataset is checksummed before and after and
/// a changed checksum fails the run. Every strategy's classes are verified
/// against a serial reference computed outside the timed region.
BenchReport run_bench(const EncodedTree& tree, const Dataset& dataset,
                      const BenchConfig& config);

/// Stable machine-readable form (schema version 1, sorted keys). Timing
/// values vary run to run; everything else is deterministic for a fixed
/// tree, dataset and config.
std::string report_to_json(const BenchReport& report);

/// Fixed-width table: one row per strategy with mean/min/max/stddev for the
/// outer and inner windows, "n/a" where a window does not apply, followed by
/// the allocation line items.
std::string report_to_table(const BenchReport& report);

std::string report_to_csv(const BenchReport& report);

}  // namespace spectree
