#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectree/dataset.hpp"
#include "spectree/eval_data_parallel.hpp"
#include "spectree/eval_speculative.hpp"
#include "spectree/tree.hpp"

namespace spectree {

/// Lockstep execution geometry. Lanes in a warp execute one instruction
/// stream; diverging loop guards serialize the sides. Record groups are
/// packed into warps at half-warp (16 lane) granularity when half_warp is
/// set, at exact group width otherwise, always in index order.
struct WarpConfig {
  std::uint32_t warp_width = 32;  // power of two
  bool half_warp = true;          // requires warp_width >= 16
};

/// Counters for one simulated kernel run. Only loop-guard divergence is
/// modeled; straight-line phases never diverge.
///
/// divergent_branches   guard evaluations where co-resident active lanes
///                      (or groups) disagree, inner and outer loops both
/// serialized_passes    work-loop body executions a warp pays for: the max
///                      trip count over its lanes, summed over loop entries
/// barriers             group barrier crossings, summed over records
/// node_evals           node evaluations that produce a successor entry
/// reduction_iterations reduction-loop trips, summed over records
/// lane_idle_slots      allocated lane-phase slots without useful work:
///                      masked-out lanes riding along their warp, phantom
///                      lanes past the node map, and half-warp padding
struct ExecMetrics {
  std::uint64_t divergent_branches = 0;
  std::uint64_t serialized_passes = 0;
  std::uint64_t barriers = 0;
  std::uint64_t node_evals = 0;
  std::uint64_t reduction_iterations = 0;
  std::uint64_t lane_idle_slots = 0;
};

enum class SpeculativeVariant { all_lanes, mapped_lanes };

/// Replays the data-parallel decomposition on the lockstep model: one lane
/// per logical worker, warps of warp_width consecutive ranks. Per record
/// position the warp pays the deepest active lane's traversal; shallower
/// lanes sit masked (idle slots) and every depth disagreement is a divergent
/// guard. The classes come from the same branchless kernel the evaluators
/// use; when `out` is given it receives them.
ExecMetrics simulate_data_parallel(const EncodedTree& tree,
                                   const Dataset& dataset,
                                   const WarpConfig& warp,
                                   const DataParallelConfig& config,
                                   ClassAssignment* out = nullptr);

/// Replays the speculative kernel lane by lane via the public phase
/// functions. Within a group every lane reads the same root entry after each
/// barrier, so the reduction-loop guard is group-uniform; the replay checks
/// that read on every lane. Divergence can only arise between co-resident
/// groups whose records need different iteration counts. Groups occupy
/// half-warp aligned slots; idle slots cover phantom lanes, slot padding and
/// groups waiting on deeper neighbours.
ExecMetrics simulate_speculative(const EncodedTree& tree,
                                 const Dataset& dataset,
                                 const WarpConfig& warp,
                                 const SpeculativeConfig& config,
                                 SpeculativeVariant variant =
                                     SpeculativeVariant::mapped_lanes,
                                 ClassAssignment* out = nullptr);

/// Side-by-side metric ratios; ratio is empty where the denominator is zero
/// (rendered as "n/a").
struct MetricsComparison {
  struct Row {
    std::string name;
    std::uint64_t left = 0;
    std::uint64_t right = 0;
    std::optional<double> ratio;  // left / right
  };
  std::vector<Row> rows;
};

MetricsComparison compare(const ExecMetrics& left, const ExecMetrics& right);
std::string to_text(const MetricsComparison& comparison);

}  // namespace spectree
