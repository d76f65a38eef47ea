#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spectree/dataset.hpp"
#include "spectree/tree.hpp"

namespace spectree {

/// How one reduction-loop iteration applies its successor reductions.
///
/// barrier_separated: k synchronous doubling steps per iteration, each one
/// reading a consistent snapshot of the path array (double-buffered), with a
/// barrier between steps. The step-count law (ceil(log2 d) single doublings
/// to resolve a depth-d record) holds in this mode.
///
/// compound_in_place: one in-place sweep per iteration where each lane chases
/// k + 1 links in a single compound statement, lane order visible, no
/// intermediate barriers. Converges to the same classes but its iteration
/// count is not covered by the step-count law.
enum class ReductionMode { barrier_separated, compound_in_place };

struct SpeculativeConfig {
  std::uint32_t group_lanes = 0;             // lanes per record group (p)
  std::uint32_t groups = 0;                  // record groups (G)
  std::uint32_t records_per_group = 1;       // records per group (m)
  std::uint32_t reductions_per_iteration = 2;  // k
  ReductionMode mode = ReductionMode::barrier_separated;
  std::uint32_t os_threads = 0;  // 0 = hardware concurrency; execution width
};

/// Per-record successor table, one entry per tree node, confined to a record
/// group. Leaf entries are fixpoints (values[leaf] == leaf) at all times.
struct PathArray {
  std::vector<std::uint32_t> values;
};

/// Identity-seeded path array (leaf entries already at their fixpoints).
PathArray make_path_array(const EncodedTree& tree);

/// Node evaluation phase, every node gets a lane: values[n] becomes n's
/// branchless successor under the record. Used by the all-lanes kernel.
void speculative_node_eval(const EncodedTree& tree,
                           std::span<const float> record, PathArray& path);

/// Node evaluation phase for mapped lanes only: lane j evaluates internal
/// node map.values[j]. Leaf entries are left untouched.
void speculative_node_eval(const EncodedTree& tree,
                           std::span<const float> record,
                           const ProcessorNodeMap& map, PathArray& path);

/// One synchronous doubling step: new[n] = old[old[n]] for every node (or
/// for the mapped nodes only), computed against a snapshot so lane order
/// cannot matter. Every mapped entry's distance along its successor chain
/// doubles until it pins at a leaf; leaf entries never change.
void path_double_step(PathArray& path);
void path_double_step(PathArray& path,
                      std::span<const std::uint32_t> mapped_nodes);

/// One compound in-place sweep in lane order: each mapped lane chases
/// reductions + 1 links through the live array and writes the result back.
void path_compound_sweep(PathArray& path,
                         std::span<const std::uint32_t> mapped_nodes,
                         std::uint32_t reductions);

/// Reduction-loop guard: the record is classified once the root entry has
/// reached a leaf.
bool path_resolved(const EncodedTree& tree, const PathArray& path);

/// Optional per-record instrumentation, indexed like the dataset.
struct SpeculativeStats {
  std::vector<std::uint32_t> iterations;      // reduction-loop trips
  std::vector<std::uint32_t> doubling_steps;  // individual reductions applied
  std::uint64_t barriers = 0;                 // group barriers crossed
};

/// Geometry checks shared with the timing harness. basic_lanes selects the
/// all-lanes rule (group_lanes == N) versus the mapped rule
/// (group_lanes >= (N - 1) / 2). Also requires groups >= 1,
/// records_per_group >= 1, reductions >= 1 and groups * records_per_group
/// >= record count. Throws ArgumentError.
void validate_speculative(const SpeculativeConfig& config,
                          const EncodedTree& tree, std::size_t record_count,
                          bool basic_lanes);

/// All-lanes speculative kernel: every node is evaluated for every record
/// (group_lanes must equal the node count), then single synchronous doubling
/// steps run until the root entry is a leaf. Groups are emulated in lockstep
/// by one worker each and distributed over min(groups, os_threads) threads.
ClassAssignment eval_speculative_basic(const EncodedTree& tree,
                                       const Dataset& dataset,
                                       const SpeculativeConfig& config,
                                       SpeculativeStats* stats = nullptr);

/// Reduced-lane speculative kernel: lanes cover only the (N - 1) / 2
/// internal nodes via the processor-node map; leaf entries are initialized
/// once per group before its record loop and never rewritten. Each
/// reduction-loop iteration applies reductions_per_iteration reductions in
/// the configured mode. Extra lanes beyond the map are idle (their scratch
/// writes are elided in this emulation).
ClassAssignment eval_speculative(const EncodedTree& tree,
                                 const Dataset& dataset,
                                 const SpeculativeConfig& config,
                                 SpeculativeStats* stats = nullptr);

}  // namespace spectree
