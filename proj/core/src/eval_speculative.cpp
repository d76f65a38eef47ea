#include "spectree/eval_speculative.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <thread>
#include <utility>

#include "spectree/errors.hpp"
#include "spectree/eval_serial.hpp"

namespace spectree {

PathArray make_path_array(const EncodedTree& tree) {
  PathArray path;
  path.values.resize(tree.size());
  std::iota(path.values.begin(), path.values.end(), 0u);
  return path;
}

void speculative_node_eval(const EncodedTree& tree,
                           std::span<const float> record, PathArray& path) {
  const auto nodes = tree.nodes();
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    path.values[i] = nodes[i].successor(record[nodes[i].attribute]);
  }
}

void speculative_node_eval(const EncodedTree& tree,
                           std::span<const float> record,
                           const ProcessorNodeMap& map, PathArray& path) {
  const auto nodes = tree.nodes();
  for (const std::uint32_t i : map.values) {
    path.values[i] = nodes[i].successor(record[nodes[i].attribute]);
  }
}

void path_double_step(PathArray& path) {
  const std::vector<std::uint32_t> snapshot = path.values;
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    path.values[i] = snapshot[snapshot[i]];
  }
}

void path_double_step(PathArray& path,
                      std::span<const std::uint32_t> mapped_nodes) {
  const std::vector<std::uint32_t> snapshot = path.values;
  for (const std::uint32_t i : mapped_nodes) {
    path.values[i] = snapshot[snapshot[i]];
  }
}

void path_compound_sweep(PathArray& path,
                         std::span<const std::uint32_t> mapped_nodes,
                         std::uint32_t reductions) {
  for (const std::uint32_t i : mapped_nodes) {
    std::uint32_t x = path.values[i];
    for (std::uint32_t r = 0; r < reductions; ++r) {
      x = path.values[x];
    }
    path.values[i] = x;
  }
}

bool path_resolved(const EncodedTree& tree, const PathArray& path) {
  return tree.node(path.values[0]).is_leaf();
}

void validate_speculative(const SpeculativeConfig& config,
                          const EncodedTree& tree, std::size_t record_count,
                          bool basic_lanes) {
  if (config.group_lanes == 0) {
    throw ArgumentError("speculative group_lanes must be >= 1");
  }
  if (basic_lanes) {
    if (config.group_lanes != tree.size()) {
      throw ArgumentError("all-lanes kernel requires group_lanes == " +
                          std::to_string(tree.size()) + " (one per node), got " +
                          std::to_string(config.group_lanes));
    }
  } else {
    const std::uint32_t internal = (tree.size() - 1) / 2;
    if (config.group_lanes < internal) {
      throw ArgumentError("mapped kernel requires group_lanes >= " +
                          std::to_string(internal) +
                          " (one per internal node), got " +
                          std::to_string(config.group_lanes));
    }
  }
  if (config.groups == 0) {
    throw ArgumentError("speculative groups must be >= 1");
  }
  if (config.records_per_group == 0) {
    throw ArgumentError("speculative records_per_group must be >= 1");
  }
  if (config.reductions_per_iteration == 0) {
    throw ArgumentError("reductions_per_iteration must be >= 1");
  }
  const auto capacity = static_cast<std::uint64_t>(config.groups) *
                        static_cast<std::uint64_t>(config.records_per_group);
  if (capacity < record_count) {
    throw ArgumentError("groups * records_per_group = " +
                        std::to_string(capacity) +
                        " leaves records unassigned (dataset has " +
                        std::to_string(record_count) + ")");
  }
}

namespace {

// Lockstep emulation of one worker's share of record groups. Both path
// buffers are identity-seeded once; leaf entries are fixpoints in both
// buffers forever, and node evaluation rewrites every internal entry before
// any step reads it, so buffers can be reused across records and groups.
struct GroupWorker {
  const EncodedNode* nodes;
  std::uint32_t node_count;
  const Dataset* dataset;
  const SpeculativeConfig* config;
  std::span<const std::uint32_t> mapped;  // empty in all-lanes mode
  bool basic;
  std::uint32_t* out;
  SpeculativeStats* stats;

  std::uint64_t barriers = 0;

  void run(std::uint32_t first_group, std::uint32_t stride) {
    std::vector<std::uint32_t> buf_a(node_count);
    std::vector<std::uint32_t> buf_b(node_count);
    std::iota(buf_a.begin(), buf_a.end(), 0u);
    std::iota(buf_b.begin(), buf_b.end(), 0u);
    std::uint32_t* cur = buf_a.data();
    std::uint32_t* alt = buf_b.data();

    const std::size_t count = dataset->count();
    const std::uint64_t m = config->records_per_group;
    const std::uint32_t k = config->reductions_per_iteration;

    for (std::uint64_t g = first_group; g < config->groups; g += stride) {
      const std::uint64_t begin = m * g;
      if (begin >= count) {
        continue;  // idle group beyond the dataset
      }
      const std::uint64_t end = std::min(begin + m, count);
      for (std::uint64_t r = begin; r < end; ++r) {
        const float* record = dataset->record(r).data();
        if (basic) {
          for (std::uint32_t i = 0; i < node_count; ++i) {
            cur[i] = nodes[i].successor(record[nodes[i].attribute]);
          }
        } else {
          for (const std::uint32_t i : mapped) {
            cur[i] = nodes[i].successor(record[nodes[i].attribute]);
          }
        }
        ++barriers;

        std::uint32_t iterations = 0;
        std::uint32_t steps = 0;
        if (basic) {
          while (nodes[cur[0]].class_id == kNoClass) {
            for (std::uint32_t i = 0; i < node_count; ++i) {
              alt[i] = cur[cur[i]];
            }
            std::swap(cur, alt);
            ++barriers;
            ++steps;
            ++iterations;
          }
        } else if (config->mode == ReductionMode::barrier_separated) {
          while (nodes[cur[0]].class_id == kNoClass) {
            for (std::uint32_t s = 0; s < k; ++s) {
              for (const std::uint32_t i : mapped) {
                alt[i] = cur[cur[i]];
              }
              std::swap(cur, alt);
              ++barriers;
              ++steps;
            }
            ++iterations;
          }
        } else {
          while (nodes[cur[0]].class_id == kNoClass) {
            for (const std::uint32_t i : mapped) {
              std::uint32_t x = cur[i];
              for (std::uint32_t step = 0; step < k; ++step) {
                x = cur[x];
              }
              cur[i] = x;
            }
            ++barriers;
            steps += k;
            ++iterations;
          }
        }

        out[r] = nodes[cur[0]].class_id;
        if (stats != nullptr) {
          stats->iterations[r] = iterations;
          stats->doubling_steps[r] = steps;
        }
      }
    }
  }
};

ClassAssignment run_speculative(const EncodedTree& tree,
                                const Dataset& dataset,
                                const SpeculativeConfig& config, bool basic,
                                SpeculativeStats* stats) {
  validate_speculative(config, tree, dataset.count(), basic);
  check_attribute_range(tree, dataset);

  const std::size_t count = dataset.count();
  ClassAssignment out(count);
  if (stats != nullptr) {
    stats->iterations.assign(count, 0);
    stats->doubling_steps.assign(count, 0);
    stats->barriers = 0;
  }
  const ProcessorNodeMap map = processor_node_map(tree);

  const std::uint32_t hardware =
      std::max(1u, config.os_threads != 0
                       ? config.os_threads
                       : std::thread::hardware_concurrency());
  const std::uint32_t spawn = std::min(config.groups, hardware);

  std::vector<GroupWorker> workers;
  workers.reserve(spawn);
  for (std::uint32_t t = 0; t < spawn; ++t) {
    workers.push_back({tree.nodes().data(), tree.size(), &dataset, &config,
                       basic ? std::span<const std::uint32_t>{}
                             : std::span<const std::uint32_t>(map.values),
                       basic, out.data(), stats});
  }

  if (spawn <= 1) {
    workers[0].run(0, 1);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(spawn);
    for (std::uint32_t t = 0; t < spawn; ++t) {
      threads.emplace_back([&workers, t, spawn] { workers[t].run(t, spawn); });
    }
    for (std::thread& thread : threads) {
      thread.join();
    }
  }

  if (stats != nullptr) {
    for (const GroupWorker& worker : workers) {
      stats->barriers += worker.barriers;
    }
  }
  return out;
}

}  // namespace

ClassAssignment eval_speculative_basic(const EncodedTree& tree,
                                       const Dataset& dataset,
                                       const SpeculativeConfig& config,
                                       SpeculativeStats* stats) {
  return run_speculative(tree, dataset, config, /*basic=*/true, stats);
}

ClassAssignment eval_speculative(const EncodedTree& tree,
                                 const Dataset& dataset,
                                 const SpeculativeConfig& config,
                                 SpeculativeStats* stats) {
  return run_speculative(tree, dataset, config, /*basic=*/false, stats);
}

}  // namespace spectree
