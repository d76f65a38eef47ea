#include "spectree/warp_sim.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spectree/errors.hpp"
#include "spectree/eval_serial.hpp"

namespace spectree {

namespace {

void validate_warp(const WarpConfig& warp) {
  if (warp.warp_width == 0 ||
      (warp.warp_width & (warp.warp_width - 1)) != 0) {
    throw ArgumentError("warp width must be a power of two, got " +
                        std::to_string(warp.warp_width));
  }
  if (warp.half_warp && warp.warp_width < 16) {
    throw ArgumentError(
        "half-warp packing requires warp width >= 16, got " +
        std::to_string(warp.warp_width));
  }
}

}  // namespace

ExecMetrics simulate_data_parallel(const EncodedTree& tree,
                                   const Dataset& dataset,
                                   const WarpConfig& warp,
                                   const DataParallelConfig& config,
                                   ClassAssignment* out) {
  validate_warp(warp);
  validate_data_parallel(config, dataset.count());
  check_attribute_range(tree, dataset);

  // One pass of the real kernel gives depth and class per record.
  const std::vector<std::uint32_t> depths = traversal_depths(tree, dataset);
  if (out != nullptr) {
    *out = eval_serial(tree, dataset);
  }

  const std::uint64_t count = dataset.count();
  const std::uint64_t chunk = config.chunk;
  const auto trips_of = [&](std::uint32_t rank) -> std::uint64_t {
    const std::uint64_t begin = chunk * rank;
    const std::uint64_t end = std::min(begin + chunk, count);
    return begin >= end ? 0 : end - begin;
  };

  ExecMetrics metrics;
  const std::uint32_t width = warp.warp_width;
  for (std::uint32_t first = 0; first < config.workers; first += width) {
    const std::uint32_t resident =
        std::min(width, config.workers - first);  // ranks in this warp
    std::uint64_t max_trips = 0;
    std::uint64_t min_trips = std::numeric_limits<std::uint64_t>::max();
    for (std::uint32_t l = 0; l < resident; ++l) {
      const std::uint64_t trips = trips_of(first + l);
      max_trips = std::max(max_trips, trips);
      min_trips = std::min(min_trips, trips);
    }
    if (max_trips == 0) {
      continue;
    }
    // Record-loop guard diverges while some lanes have run out of records.
    if (resident > 1) {
      metrics.divergent_branches += max_trips - min_trips;
    }
    for (std::uint64_t j = 0; j < max_trips; ++j) {
      std::uint32_t active = 0;
      std::uint64_t max_depth = 0;
      std::uint64_t min_depth = std::numeric_limits<std::uint64_t>::max();
      std::uint64_t depth_sum = 0;
      for (std::uint32_t l = 0; l < resident; ++l) {
        if (j >= trips_of(first + l)) {
          continue;
        }
        const std::uint64_t record = chunk * (first + l) + j;
        const std::uint64_t depth = depths[record];
        ++active;
        max_depth = std::max(max_depth, depth);
        min_depth = std::min(min_depth, depth);
        depth_sum += depth;
      }
      metrics.serialized_passes += max_depth;
      metrics.node_evals += depth_sum;
      if (active > 1) {
        metrics.divergent_branches += max_depth - min_depth;
      }
      // Masked lanes (shallow or exhausted) ride along for max_depth hops.
      metrics.lane_idle_slots +=
          static_cast<std::uint64_t>(resident) * max_depth - depth_sum;
    }
  }
  return metrics;
}

namespace {

struct GroupReplay {
  std::vector<std::uint32_t> iterations;  // per record position
  std::uint64_t trips = 0;                // records in this group
};

// Lane-accurate replay of one record through the phase functions. Verifies
// that every lane of the group observes the same guard value after each
// barrier; the shared path array makes disagreement impossible, and the
// check pins that down.
std::uint32_t replay_record(const EncodedTree& tree,
                            std::span<const float> record,
                            const ProcessorNodeMap& map, PathArray& path,
                            const SpeculativeConfig& config,
                            SpeculativeVariant variant,
                            std::uint32_t* class_out) {
  const bool basic = variant == SpeculativeVariant::all_lanes;
  if (basic) {
    speculative_node_eval(tree, record, path);
  } else {
    speculative_node_eval(tree, record, map, path);
  }
  const auto guard_uniform = [&]() {
    const std::uint32_t first = path.values[0];
    for (std::uint32_t lane = 1; lane < config.group_lanes; ++lane) {
      if (path.values[0] != first) {
        throw std::logic_error("speculative guard diverged within a group");
      }
    }
    return tree.node(first).is_leaf();
  };

  std::uint32_t iterations = 0;
  bool resolved = guard_uniform();
  while (!resolved) {
    if (basic) {
      path_double_step(path);
    } else if (config.mode == ReductionMode::barrier_separated) {
      for (std::uint32_t s = 0; s < config.reductions_per_iteration; ++s) {
        path_double_step(path, map.values);
      }
    } else {
      path_compound_sweep(path, map.values,
                          config.reductions_per_iteration);
    }
    ++iterations;
    resolved = guard_uniform();
  }
  *class_out = tree.node(path.values[0]).class_id;
  return iterations;
}

}  // namespace

ExecMetrics simulate_speculative(const EncodedTree& tree,
                                 const Dataset& dataset,
                                 const WarpConfig& warp,
                                 const SpeculativeConfig& config,
                                 SpeculativeVariant variant,
                                 ClassAssignment* out) {
  validate_warp(warp);
  const bool basic = variant == SpeculativeVariant::all_lanes;
  validate_speculative(config, tree, dataset.count(), basic);
  check_attribute_range(tree, dataset);
  if (config.group_lanes > warp.warp_width) {
    throw ArgumentError("record group of " +
                        std::to_string(config.group_lanes) +
                        " lanes does not fit in a " +
                        std::to_string(warp.warp_width) + " lane warp");
  }

  // Slot width per group inside a warp; index-order packing.
  const std::uint32_t slot =
      warp.half_warp ? ((config.group_lanes + 15) / 16) * 16
                     : config.group_lanes;
  const std::uint32_t groups_per_warp = warp.warp_width / slot;

  const ProcessorNodeMap map = processor_node_map(tree);
  const std::uint64_t useful =
      basic ? tree.size() : static_cast<std::uint64_t>(map.values.size());
  const std::uint64_t count = dataset.count();
  const std::uint64_t m = config.records_per_group;
  // Lane work per reduction iteration: k separate steps, or one compound
  // sweep statement.
  const std::uint64_t steps_per_iteration =
      basic ? 1
            : (config.mode == ReductionMode::barrier_separated
                   ? config.reductions_per_iteration
                   : 1);
  const std::uint64_t barriers_per_iteration = steps_per_iteration;

  if (out != nullptr) {
    out->assign(count, 0);
  }

  ExecMetrics metrics;
  std::vector<GroupReplay> replays(config.groups);
  PathArray path = make_path_array(tree);
  for (std::uint32_t g = 0; g < config.groups; ++g) {
    const std::uint64_t begin = m * g;
    const std::uint64_t end = std::min(begin + m, count);
    GroupReplay& replay = replays[g];
    if (begin >= end) {
      continue;
    }
    replay.trips = end - begin;
    replay.iterations.reserve(replay.trips);
    for (std::uint64_t r = begin; r < end; ++r) {
      std::uint32_t class_id = 0;
      const std::uint32_t iterations = replay_record(
          tree, dataset.record(r), map, path, config, variant, &class_id);
      replay.iterations.push_back(iterations);
      if (out != nullptr) {
        (*out)[r] = class_id;
      }
      metrics.node_evals += useful;
      metrics.reduction_iterations += iterations;
      metrics.barriers += 1 + barriers_per_iteration * iterations;
    }
  }

  for (std::uint32_t first = 0; first < config.groups;
       first += groups_per_warp) {
    const std::uint32_t resident =
        std::min(groups_per_warp, config.groups - first);
    std::uint64_t max_trips = 0;
    std::uint64_t min_trips = std::numeric_limits<std::uint64_t>::max();
    for (std::uint32_t s = 0; s < resident; ++s) {
      const std::uint64_t trips = replays[first + s].trips;
      max_trips = std::max(max_trips, trips);
      min_trips = std::min(min_trips, trips);
    }
    if (max_trips == 0) {
      continue;
    }
    if (resident > 1) {
      metrics.divergent_branches += max_trips - min_trips;
    }
    for (std::uint64_t j = 0; j < max_trips; ++j) {
      std::uint32_t active = 0;
      std::uint64_t max_iters = 0;
      std::uint64_t min_iters = std::numeric_limits<std::uint64_t>::max();
      for (std::uint32_t s = 0; s < resident; ++s) {
        const GroupReplay& replay = replays[first + s];
        if (j >= replay.trips) {
          continue;
        }
        const std::uint64_t iters = replay.iterations[j];
        ++active;
        max_iters = std::max(max_iters, iters);
        min_iters = std::min(min_iters, iters);
      }
      metrics.serialized_passes += max_iters;
      if (active > 1) {
        metrics.divergent_branches += max_iters - min_iters;
      }
      // Lockstep schedule for this record position: one node-eval phase plus
      // the per-iteration lane work of the deepest group. Every allocated
      // slot lane pays the schedule; useful work is subtracted.
      const std::uint64_t phases = 1 + steps_per_iteration * max_iters;
      for (std::uint32_t s = 0; s < resident; ++s) {
        const GroupReplay& replay = replays[first + s];
        std::uint64_t useful_slots = 0;
        if (j < replay.trips) {
          useful_slots =
              useful * (1 + steps_per_iteration * replay.iterations[j]);
        }
        metrics.lane_idle_slots += slot * phases - useful_slots;
      }
    }
  }
  return metrics;
}

MetricsComparison compare(const ExecMetrics& left, const ExecMetrics& right) {
  MetricsComparison comparison;
  const auto add = [&comparison](const std::string& name, std::uint64_t a,
                                 std::uint64_t b) {
    MetricsComparison::Row row{name, a, b, std::nullopt};
    if (b != 0) {
      row.ratio = static_cast<double>(a) / static_cast<double>(b);
    }
    comparison.rows.push_back(std::move(row));
  };
  add("divergent_branches", left.divergent_branches, right.divergent_branches);
  add("serialized_passes", left.serialized_passes, right.serialized_passes);
  add("barriers", left.barriers, right.barriers);
  add("node_evals", left.node_evals, right.node_evals);
  add("reduction_iterations", left.reduction_iterations,
      right.reduction_iterations);
  add("lane_idle_slots", left.lane_idle_slots, right.lane_idle_slots);
  return comparison;
}

std::string to_text(const MetricsComparison& comparison) {
  std::ostringstream out;
  out << "metric                 left            right           ratio\n";
  for (const auto& row : comparison.rows) {
    out << row.name;
    for (std::size_t pad = row.name.size(); pad < 23; ++pad) {
      out << ' ';
    }
    std::string left = std::to_string(row.left);
    std::string right = std::to_string(row.right);
    out << left;
    for (std::size_t pad = left.size(); pad < 16; ++pad) {
      out << ' ';
    }
    out << right;
    for (std::size_t pad = right.size(); pad < 16; ++pad) {
      out << ' ';
    }
    if (row.ratio) {
      out << *row.ratio;
    } else {
      out << "n/a";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace spectree
