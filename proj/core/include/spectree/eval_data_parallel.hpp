#pragma once

#include <cstdint>

#include "spectree/dataset.hpp"
#include "spectree/tree.hpp"

namespace spectree {

/// Static contiguous decomposition: logical worker p owns records
/// [m * p, min(m * (p + 1), M)). No work stealing; the last ranges clamp (or
/// are empty) when m * workers > M.
struct DataParallelConfig {
  std::uint32_t workers = 1;           // logical worker count P
  std::uint32_t chunk = 1;             // records per worker m
  bool exact_fit = false;              // require workers * chunk == M
  std::uint32_t os_threads = 0;        // 0 = hardware concurrency; execution
                                       // width only, never changes results
};

/// Geometry checks shared with the timing harness: workers >= 1, chunk >= 1,
/// workers * chunk >= record count (== when exact_fit). Throws ArgumentError.
void validate_data_parallel(const DataParallelConfig& config,
                            std::size_t record_count);

/// Runs the branchless per-record kernel over the static ranges. Logical
/// workers are multiplexed round-robin onto min(workers, os_threads) OS
/// threads; each rank writes only its own output slice and all threads join
/// before the assignment is returned, so the result is bit-identical to
/// eval_serial regardless of thread count.
ClassAssignment eval_data_parallel(const EncodedTree& tree,
                                   const Dataset& dataset,
                                   const DataParallelConfig& config);

}  // namespace spectree
