#include "spectree/eval_serial.hpp"

#include <algorithm>
#include <string>

#include "spectree/errors.hpp"

namespace spectree {

void check_attribute_range(const EncodedTree& tree, const Dataset& dataset) {
  if (tree.max_attribute() >= dataset.arity()) {
    throw ArgumentError("tree reads attribute " +
                        std::to_string(tree.max_attribute()) +
                        " but records have arity " +
                        std::to_string(dataset.arity()));
  }
}

namespace {

inline std::uint32_t classify(const EncodedNode* nodes, const float* record) {
  std::uint32_t i = 0;
  while (nodes[i].class_id == kNoClass) {
    i = nodes[i].child +
        static_cast<std::uint32_t>(record[nodes[i].attribute] >
                                   nodes[i].threshold);
  }
  return nodes[i].class_id;
}

}  // namespace

ClassAssignment eval_serial(const EncodedTree& tree, const Dataset& dataset) {
  check_attribute_range(tree, dataset);
  const EncodedNode* nodes = tree.nodes().data();
  ClassAssignment out(dataset.count());
  for (std::size_t r = 0; r < dataset.count(); ++r) {
    out[r] = classify(nodes, dataset.record(r).data());
  }
  return out;
}

ClassAssignment eval_oracle_recursive(const LinkedNode& root,
                                      const Dataset& dataset) {
  // Range check mirrors the encoded evaluators but walks the linked form.
  std::uint32_t max_attribute = 0;
  const auto scan = [&max_attribute](const auto& self,
                                     const LinkedNode& node) -> void {
    if (node.is_leaf()) {
      return;
    }
    max_attribute = std::max(max_attribute, node.attribute);
    self(self, *node.left);
    self(self, *node.right);
  };
  scan(scan, root);
  if (!root.is_leaf() && max_attribute >= dataset.arity()) {
    throw ArgumentError("tree reads attribute " +
                        std::to_string(max_attribute) +
                        " but records have arity " +
                        std::to_string(dataset.arity()));
  }

  ClassAssignment out(dataset.count());
  for (std::size_t r = 0; r < dataset.count(); ++r) {
    const auto record = dataset.record(r);
    const LinkedNode* node = &root;
    while (!node->is_leaf()) {
      node = (record[node->attribute] <= node->threshold) ? node->left.get()
                                                          : node->right.get();
    }
    out[r] = *node->class_val;
  }
  return out;
}

std::vector<std::uint32_t> traversal_depths(const EncodedTree& tree,
                                            const Dataset& dataset) {
  check_attribute_range(tree, dataset);
  const EncodedNode* nodes = tree.nodes().data();
  std::vector<std::uint32_t> depths(dataset.count());
  for (std::size_t r = 0; r < dataset.count(); ++r) {
    const float* record = dataset.record(r).data();
    std::uint32_t i = 0;
    std::uint32_t edges = 0;
    while (nodes[i].class_id == kNoClass) {
      i = nodes[i].successor(record[nodes[i].attribute]);
      ++edges;
    }
    depths[r] = edges;
  }
  return depths;
}

double mean_traversal_depth(const EncodedTree& tree, const Dataset& dataset) {
  if (dataset.count() == 0) {
    throw ArgumentError("mean traversal depth of an empty dataset");
  }
  const auto depths = traversal_depths(tree, dataset);
  std::uint64_t total = 0;
  for (const std::uint32_t d : depths) {
    total += d;
  }
  return static_cast<double>(total) / static_cast<double>(depths.size());
}

}  // namespace spectree
