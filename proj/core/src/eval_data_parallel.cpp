#include "spectree/eval_data_parallel.hpp"

#include <algorithm>
#include <string>
#include <thread>
#include <vector>

#include "spectree/errors.hpp"
#include "spectree/eval_serial.hpp"

namespace spectree {

void validate_data_parallel(const DataParallelConfig& config,
                            std::size_t record_count) {
  if (config.workers == 0) {
    throw ArgumentError("data-parallel workers must be >= 1");
  }
  if (config.chunk == 0) {
    throw ArgumentError("data-parallel chunk must be >= 1");
  }
  const auto capacity = static_cast<std::uint64_t>(config.workers) *
                        static_cast<std::uint64_t>(config.chunk);
  if (capacity < record_count) {
    throw ArgumentError("workers * chunk = " + std::to_string(capacity) +
                        " leaves records unassigned (dataset has " +
                        std::to_string(record_count) + ")");
  }
  if (config.exact_fit && capacity != record_count) {
    throw ArgumentError("exact fit requires workers * chunk == " +
                        std::to_string(record_count) + ", got " +
                        std::to_string(capacity));
  }
}

ClassAssignment eval_data_parallel(const EncodedTree& tree,
                                   const Dataset& dataset,
                                   const DataParallelConfig& config) {
  validate_data_parallel(config, dataset.count());
  check_attribute_range(tree, dataset);

  const std::size_t count = dataset.count();
  const EncodedNode* nodes = tree.nodes().data();
  ClassAssignment out(count);

  // Rank p owns [chunk * p, min(chunk * (p + 1), count)); disjoint slices,
  // so ranks never touch the same output element.
  const auto run_rank = [&](std::uint32_t rank) {
    const std::uint64_t begin =
        static_cast<std::uint64_t>(config.chunk) * rank;
    const std::uint64_t end =
        std::min<std::uint64_t>(begin + config.chunk, count);
    for (std::uint64_t r = begin; r < end; ++r) {
      const float* record = dataset.record(r).data();
      std::uint32_t i = 0;
      while (nodes[i].class_id == kNoClass) {
        i = nodes[i].successor(record[nodes[i].attribute]);
      }
      out[r] = nodes[i].class_id;
    }
  };

  const std::uint32_t hardware =
      std::max(1u, config.os_threads != 0
                       ? config.os_threads
                       : std::thread::hardware_concurrency());
  const std::uint32_t spawn = std::min(config.workers, hardware);
  if (spawn <= 1) {
    for (std::uint32_t rank = 0; rank < config.workers; ++rank) {
      run_rank(rank);
    }
    return out;
  }

  std::vector<std::thread> threads;
  threads.reserve(spawn);
  for (std::uint32_t t = 0; t < spawn; ++t) {
    threads.emplace_back([&, t] {
      for (std::uint32_t rank = t; rank < config.workers; rank += spawn) {
        run_rank(rank);
      }
    });
  }
  // Completion barrier: results are visible only after every rank joined.
  for (std::thread& thread : threads) {
    thread.join();
  }
  return out;
}

}  // namespace spectree
