#pragma once

#include <cstdint>

#include "spectree/dataset.hpp"
#include "spectree/tree.hpp"

namespace spectree {

enum class Distribution { uniform, gaussian };

/// Deterministic full binary tree with exactly the requested depth (edges)
/// and leaf count. Thresholds live on a dyadic grid inside each leaf's
/// attribute box over [0, 1], so every leaf is reachable by some record and
/// all thresholds are exactly representable as float. Feasibility requires
/// leaf_count in [depth + 1, 2^depth] (leaf_count == 1 when depth == 0);
/// infeasible shapes throw ArgumentError. Same seed, same tree.
EncodedTree generate_synthetic_tree(std::uint32_t depth,
                                    std::uint32_t leaf_count,
                                    std::uint32_t arity,
                                    std::uint32_t class_count,
                                    std::uint64_t seed);

/// Deterministic dataset of `count` records over [0, 1)^arity (uniform) or a
/// clamped-to-finite normal around 0.5 (gaussian). Draws are hand-rolled from
/// mt19937_64 so output is identical across standard libraries.
Dataset generate_synthetic_dataset(std::size_t count, std::uint32_t arity,
                                   std::uint64_t seed,
                                   Distribution distribution =
                                       Distribution::uniform);

}  // namespace spectree
