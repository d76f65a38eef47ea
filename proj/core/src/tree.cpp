#include "spectree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "spectree/errors.hpp"

namespace spectree {

std::unique_ptr<LinkedNode> make_leaf(std::uint32_t class_val) {
  if (class_val == kNoClass) {
    throw ArgumentError("class id " + std::to_string(kNoClass) +
                        " is reserved as the no-class sentinel");
  }
  auto node = std::make_unique<LinkedNode>();
  node->class_val = class_val;
  return node;
}

std::unique_ptr<LinkedNode> make_split(std::uint32_t attribute, float threshold,
                                       std::unique_ptr<LinkedNode> left,
                                       std::unique_ptr<LinkedNode> right) {
  if (!left || !right) {
    throw ArgumentError("split node requires both children");
  }
  auto node = std::make_unique<LinkedNode>();
  node->attribute = attribute;
  node->threshold = threshold;
  node->left = std::move(left);
  node->right = std::move(right);
  return node;
}

EncodedTree::EncodedTree(std::vector<EncodedNode> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) {
    throw ArgumentError("encoded tree requires at least one node");
  }
  const auto n = static_cast<std::uint32_t>(nodes_.size());
  for (std::uint32_t i = 0; i < n; ++i) {
    if (nodes_[i].is_leaf()) {
      ++leaf_count_;
    } else {
      internal_indices_.push_back(i);
    }
    max_attribute_ = std::max(max_attribute_, nodes_[i].attribute);
  }
  // Depth by forward propagation; child links that do not point strictly
  // forward are skipped here and reported by validate() instead.
  std::vector<std::uint32_t> depth(n, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    const EncodedNode& node = nodes_[i];
    if (node.is_leaf()) {
      depth_ = std::max(depth_, depth[i]);
    } else if (node.child > i && node.child + 1 < n) {
      depth[node.child] = depth[i] + 1;
      depth[node.child + 1] = depth[i] + 1;
    }
  }
}

namespace {

struct QueueEntry {
  const LinkedNode* node;
  std::string path;
};

}  // namespace

EncodedTree encode_breadth_first(const LinkedNode& root) {
  std::vector<QueueEntry> queue;
  queue.push_back({&root, "root"});
  std::vector<EncodedNode> nodes;
  std::uint32_t child_counter = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const LinkedNode* node = queue[i].node;
    const bool has_left = node->left != nullptr;
    const bool has_right = node->right != nullptr;
    if (has_left != has_right) {
      throw StructureError("non-full node (exactly one child) at " +
                           queue[i].path);
    }
    EncodedNode encoded;
    if (node->is_leaf()) {
      if (!node->class_val) {
        throw StructureError("leaf without a class at " + queue[i].path);
      }
      if (*node->class_val == kNoClass) {
        throw StructureError("reserved class id at " + queue[i].path);
      }
      encoded.attribute = 0;
      encoded.threshold = std::numeric_limits<float>::infinity();
      encoded.child = static_cast<std::uint32_t>(i);
      encoded.class_id = *node->class_val;
    } else {
      if (node->class_val) {
        throw StructureError("class on an internal node at " + queue[i].path);
      }
      encoded.attribute = node->attribute;
      encoded.threshold = node->threshold;
      encoded.child = child_counter;
      encoded.class_id = kNoClass;
      queue.push_back({node->left.get(), queue[i].path + ".left"});
      ++child_counter;
      queue.push_back({node->right.get(), queue[i].path + ".right"});
      ++child_counter;
    }
    nodes.push_back(encoded);
  }
  return EncodedTree(std::move(nodes));
}

namespace {

std::unique_ptr<LinkedNode> decode_at(const EncodedTree& tree,
                                      std::uint32_t index) {
  const EncodedNode& node = tree.node(index);
  if (node.is_leaf()) {
    return make_leaf(node.class_id);
  }
  if (node.child <= index || node.child + 1 >= tree.size()) {
    throw ArgumentError("node " + std::to_string(index) +
                        " has a non-BFS child link; cannot decode");
  }
  return make_split(node.attribute, node.threshold,
                    decode_at(tree, node.child),
                    decode_at(tree, node.child + 1));
}

}  // namespace

std::unique_ptr<LinkedNode> decode(const EncodedTree& tree) {
  return decode_at(tree, 0);
}

std::vector<Diagnostic> validate(const EncodedTree& tree) {
  std::vector<Diagnostic> findings;
  const std::uint32_t n = tree.size();
  std::vector<std::uint32_t> referenced(n, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    const EncodedNode& node = tree.node(i);
    if (node.is_leaf()) {
      if (node.child != i) {
        findings.push_back({i, "leaf child index is " +
                                   std::to_string(node.child) +
                                   ", expected self-loop " +
                                   std::to_string(i)});
      }
      if (!(node.threshold == std::numeric_limits<float>::infinity())) {
        findings.push_back({i, "leaf threshold is not +inf"});
      }
    } else {
      if (!std::isfinite(node.threshold)) {
        findings.push_back({i, "internal threshold is not finite"});
      }
      if (node.child + 1 >= n) {
        findings.push_back({i, "child index " + std::to_string(node.child) +
                                   " out of range"});
      } else if (node.child <= i) {
        findings.push_back({i, "non-BFS child link: child " +
                                   std::to_string(node.child) +
                                   " does not point forward"});
      } else {
        ++referenced[node.child];
        ++referenced[node.child + 1];
      }
    }
  }
  if (referenced[0] != 0) {
    findings.push_back({0, "root is referenced as a child"});
  }
  for (std::uint32_t i = 1; i < n; ++i) {
    if (referenced[i] == 0) {
      findings.push_back({i, "node is not referenced by any parent"});
    } else if (referenced[i] > 1) {
      findings.push_back({i, "node is referenced " +
                                 std::to_string(referenced[i]) +
                                 " times"});
    }
  }
  if (n != 2 * tree.leaf_count() - 1) {
    findings.push_back(
        {0, "node count " + std::to_string(n) + " != 2 * " +
                std::to_string(tree.leaf_count()) + " - 1 (not a full tree)"});
  }
  return findings;
}

TreeStats stats(const EncodedTree& tree) {
  return {tree.size(), tree.leaf_count(), tree.depth()};
}

LeafPaths leaf_paths(const EncodedTree& tree) {
  LeafPaths paths;
  paths.values.resize(tree.size());
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    paths.values[i] = i;
  }
  return paths;
}

ProcessorNodeMap processor_node_map(const EncodedTree& tree) {
  ProcessorNodeMap map;
  const auto indices = tree.internal_indices();
  map.values.assign(indices.begin(), indices.end());
  return map;
}

}  // namespace spectree
