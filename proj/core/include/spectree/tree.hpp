#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spectree {

/// Sentinel class id meaning "no class". Internal nodes carry it; leaves
/// never do, so `class_id != kNoClass` is the leaf test.
inline constexpr std::uint32_t kNoClass =
    std::numeric_limits<std::uint32_t>::max();

/// Pointer-linked full binary classification tree. Internal nodes compare
/// one record attribute against a threshold (<= goes left, > goes right);
/// leaves carry the class. class_val is present exactly on leaves.
struct LinkedNode {
  std::uint32_t attribute = 0;
  float threshold = 0.0f;
  std::optional<std::uint32_t> class_val;
  std::unique_ptr<LinkedNode> left;
  std::unique_ptr<LinkedNode> right;

  [[nodiscard]] bool is_leaf() const noexcept { return !left && !right; }
};

std::unique_ptr<LinkedNode> make_leaf(std::uint32_t class_val);
std::unique_ptr<LinkedNode> make_split(std::uint32_t attribute, float threshold,
                                       std::unique_ptr<LinkedNode> left,
                                       std::unique_ptr<LinkedNode> right);

/// One slot of the breadth-first array encoding (16 bytes).
///
/// Internal nodes store only the left child index; the right child is always
/// at child + 1. Leaves are self-loops: child is the node's own index and the
/// in-memory threshold is +inf, so the uniform successor rule maps a leaf to
/// itself for every finite attribute value. Serialized form writes "-inf" for
/// leaf thresholds instead; see io.hpp.
struct EncodedNode {
  std::uint32_t attribute = 0;
  float threshold = 0.0f;
  std::uint32_t child = 0;
  std::uint32_t class_id = kNoClass;

  [[nodiscard]] bool is_leaf() const noexcept { return class_id != kNoClass; }

  /// Branchless child selection: child + (value > threshold). Ties stay left.
  [[nodiscard]] std::uint32_t successor(float value) const noexcept {
    return child + static_cast<std::uint32_t>(value > threshold);
  }
};

/// Breadth-first array encoding of a full binary tree. Index 0 is the root,
/// children always follow their parent (child > parent index), and node count
/// satisfies N = 2 * leaf_count - 1. Derived stats are computed once at
/// construction; depth is counted in edges.
class EncodedTree {
 public:
  explicit EncodedTree(std::vector<EncodedNode> nodes);

  [[nodiscard]] std::uint32_t size() const noexcept {
    return static_cast<std::uint32_t>(nodes_.size());
  }
  [[nodiscard]] std::span<const EncodedNode> nodes() const noexcept {
    return nodes_;
  }
  [[nodiscard]] const EncodedNode& node(std::uint32_t i) const {
    return nodes_.at(i);
  }
  [[nodiscard]] std::uint32_t leaf_count() const noexcept { return leaf_count_; }
  [[nodiscard]] std::uint32_t depth() const noexcept { return depth_; }
  [[nodiscard]] std::uint32_t max_attribute() const noexcept {
    return max_attribute_;
  }
  /// Internal node indices in breadth-first order; size (N - 1) / 2 for a
  /// well-formed full tree.
  [[nodiscard]] std::span<const std::uint32_t> internal_indices()
      const noexcept {
    return internal_indices_;
  }

 private:
  std::vector<EncodedNode> nodes_;
  std::vector<std::uint32_t> internal_indices_;
  std::uint32_t leaf_count_ = 0;
  std::uint32_t depth_ = 0;
  std::uint32_t max_attribute_ = 0;
};

struct TreeStats {
  std::uint32_t nodes = 0;
  std::uint32_t leaves = 0;
  std::uint32_t depth = 0;
};

/// A validation finding attached to one node. Tree-level findings use node 0.
struct Diagnostic {
  std::uint32_t node = 0;
  std::string message;
};

/// Queue-driven breadth-first encoding. The running child counter starts at 1
/// and advances once per enqueued child, so siblings land adjacent and only
/// the left index needs storing. Leaves are finalized as self-loops with +inf
/// thresholds and their class. Throws StructureError (with the node path,
/// e.g. "root.left.right") on a node with exactly one child, a leaf without a
/// class, or an internal node carrying one.
EncodedTree encode_breadth_first(const LinkedNode& root);

/// Rebuilds the linked form. Requires child links to point forward
/// (child > parent index); throws ArgumentError otherwise.
std::unique_ptr<LinkedNode> decode(const EncodedTree& tree);

/// Structural checks over an encoded tree: leaf self-loops, +inf leaf
/// thresholds, finite internal thresholds, in-range and strictly forward
/// ("non-BFS child link") child indices, every non-root slot referenced
/// exactly once, and N = 2 * leaves - 1. Returns one Diagnostic per finding;
/// empty means well formed.
std::vector<Diagnostic> validate(const EncodedTree& tree);

[[nodiscard]] TreeStats stats(const EncodedTree& tree);

/// Identity path table: values[i] = i for all N nodes. Used to seed path
/// arrays so leaf entries are fixpoints from the start.
struct LeafPaths {
  std::vector<std::uint32_t> values;
};

/// Lane -> node assignment for the reduced-lane kernel: the internal node
/// indices, ascending, one per lane. Length (N - 1) / 2.
struct ProcessorNodeMap {
  std::vector<std::uint32_t> values;
};

[[nodiscard]] LeafPaths leaf_paths(const EncodedTree& tree);
[[nodiscard]] ProcessorNodeMap processor_node_map(const EncodedTree& tree);

}  // namespace spectree
