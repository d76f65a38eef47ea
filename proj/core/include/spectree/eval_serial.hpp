#pragma once

#include <cstdint>
#include <vector>

#include "spectree/dataset.hpp"
#include "spectree/tree.hpp"

namespace spectree {

/// Classifies every record by walking the encoded tree with the branchless
/// successor rule; the loop guard (is the current node a leaf) is the only
/// data-dependent branch. Attribute indices are range-checked once per call,
/// not per record. Time is proportional to the records' total path length.
ClassAssignment eval_serial(const EncodedTree& tree, const Dataset& dataset);

/// Reference implementation on the pointer-linked form: plain conditional
/// descent, left on value <= threshold. Shares no traversal code with the
/// encoded-array evaluators.
ClassAssignment eval_oracle_recursive(const LinkedNode& root,
                                      const Dataset& dataset);

/// Root-to-leaf edge count per record.
std::vector<std::uint32_t> traversal_depths(const EncodedTree& tree,
                                            const Dataset& dataset);

/// Average root-to-leaf edge count over the dataset; the d_mu input of the
/// cost model. Empty dataset throws ArgumentError.
double mean_traversal_depth(const EncodedTree& tree, const Dataset& dataset);

/// Throws ArgumentError when any stored attribute index is outside the
/// dataset's arity. Called by every evaluator before touching records.
void check_attribute_range(const EncodedTree& tree, const Dataset& dataset);

}  // namespace spectree
