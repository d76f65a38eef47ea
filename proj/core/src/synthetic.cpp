#include "spectree/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "spectree/errors.hpp"

namespace spectree {

namespace {

// Threshold grid: attribute space [0, 1] discretized to 2^23 steps so every
// grid point i / 2^23 is exact in float and midpoint splits stay exact.
constexpr std::uint32_t kGridBits = 23;
constexpr std::uint32_t kGridSize = 1u << kGridBits;

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

struct GrowingLeaf {
  LinkedNode* node;
  std::uint32_t depth;
  // Per-attribute half-open integer box [lo, hi) on the threshold grid.
  std::vector<std::uint32_t> lo;
  std::vector<std::uint32_t> hi;

  [[nodiscard]] bool splittable() const {
    for (std::size_t a = 0; a < lo.size(); ++a) {
      if (hi[a] - lo[a] >= 2) {
        return true;
      }
    }
    return false;
  }
};

// Splits the leaf in place on the given attribute at its box midpoint and
// returns the two child leaves. The midpoint is strictly inside the box, so
// values <= threshold and values > threshold both stay reachable.
std::pair<GrowingLeaf, GrowingLeaf> split_leaf(GrowingLeaf leaf,
                                               std::uint32_t attribute) {
  const std::uint32_t mid =
      leaf.lo[attribute] + (leaf.hi[attribute] - leaf.lo[attribute]) / 2;
  LinkedNode* node = leaf.node;
  node->class_val.reset();
  node->attribute = attribute;
  node->threshold =
      static_cast<float>(mid) / static_cast<float>(kGridSize);
  node->left = std::make_unique<LinkedNode>();
  node->right = std::make_unique<LinkedNode>();

  GrowingLeaf left{node->left.get(), leaf.depth + 1, leaf.lo, leaf.hi};
  left.hi[attribute] = mid;
  GrowingLeaf right{node->right.get(), leaf.depth + 1, std::move(leaf.lo),
                    std::move(leaf.hi)};
  right.lo[attribute] = mid;
  return {std::move(left), std::move(right)};
}

std::uint32_t pick_wide_attribute(const GrowingLeaf& leaf,
                                  std::mt19937_64& rng) {
  std::vector<std::uint32_t> wide;
  for (std::uint32_t a = 0; a < leaf.lo.size(); ++a) {
    if (leaf.hi[a] - leaf.lo[a] >= 2) {
      wide.push_back(a);
    }
  }
  if (wide.empty()) {
    throw ArgumentError(
        "requested shape exhausts the threshold grid; reduce depth");
  }
  return wide[bounded(rng, wide.size())];
}

}  // namespace

EncodedTree generate_synthetic_tree(std::uint32_t depth,
                                    std::uint32_t leaf_count,
                                    std::uint32_t arity,
                                    std::uint32_t class_count,
                                    std::uint64_t seed) {
  if (arity == 0 || class_count == 0) {
    throw ArgumentError("arity and class count must be >= 1");
  }
  if (depth == 0) {
    if (leaf_count != 1) {
      throw ArgumentError("depth 0 admits exactly one leaf");
    }
  } else {
    if (leaf_count < depth + 1) {
      throw ArgumentError("leaf count " + std::to_string(leaf_count) +
                          " cannot reach depth " + std::to_string(depth) +
                          "; need at least depth + 1 leaves");
    }
    if (depth < 32 && static_cast<std::uint64_t>(leaf_count) >
                          (std::uint64_t{1} << depth)) {
      throw ArgumentError("leaf count " + std::to_string(leaf_count) +
                          " exceeds 2^depth");
    }
  }

  std::mt19937_64 rng(seed);
  auto root = std::make_unique<LinkedNode>();
  std::vector<GrowingLeaf> leaves;
  leaves.push_back({root.get(), 0, std::vector<std::uint32_t>(arity, 0),
                    std::vector<std::uint32_t>(arity, kGridSize)});

  // Spine: split the deepest leaf until the target depth exists. Attributes
  // rotate so no single attribute's grid is exhausted by the spine alone.
  std::size_t spine = 0;
  for (std::uint32_t d = 0; d < depth; ++d) {
    GrowingLeaf leaf = std::move(leaves[spine]);
    const std::uint32_t preferred = d % arity;
    const std::uint32_t attribute =
        (leaf.hi[preferred] - leaf.lo[preferred] >= 2)
            ? preferred
            : pick_wide_attribute(leaf, rng);
    auto [left, right] = split_leaf(std::move(leaf), attribute);
    leaves[spine] = std::move(left);
    leaves.push_back(std::move(right));
    // Continue downward along the freshly created left child.
  }

  // Fill: split random non-deepest leaves until the leaf count is reached.
  while (leaves.size() < leaf_count) {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (leaves[i].depth < depth && leaves[i].splittable()) {
        eligible.push_back(i);
      }
    }
    if (eligible.empty()) {
      throw ArgumentError(
          "requested shape exhausts the threshold grid; reduce depth");
    }
    const std::size_t pick = eligible[bounded(rng, eligible.size())];
    GrowingLeaf leaf = std::move(leaves[pick]);
    const std::uint32_t attribute = pick_wide_attribute(leaf, rng);
    auto [left, right] = split_leaf(std::move(leaf), attribute);
    leaves[pick] = std::move(left);
    leaves.push_back(std::move(right));
  }

  for (GrowingLeaf& leaf : leaves) {
    leaf.node->class_val =
        static_cast<std::uint32_t>(bounded(rng, class_count));
  }
  return encode_breadth_first(*root);
}

Dataset generate_synthetic_dataset(std::size_t count, std::uint32_t arity,
                                   std::uint64_t seed,
                                   Distribution distribution) {
  std::mt19937_64 rng(seed);
  auto uniform01 = [&rng]() {
    // 24 high bits -> [0, 1) on an exact float grid.
    return static_cast<float>(rng() >> 40) * 0x1p-24f;
  };
  std::vector<float> values;
  values.reserve(count * arity);
  if (distribution == Distribution::uniform) {
    for (std::size_t i = 0; i < count * arity; ++i) {
      values.push_back(uniform01());
    }
  } else {
    // Box-Muller around 0.5 with sigma 0.15; u1 is kept away from zero so
    // the log stays finite.
    for (std::size_t i = 0; i < count * arity; ++i) {
      const double u1 = (static_cast<double>(rng() >> 40) + 1.0) * 0x1p-24;
      const double u2 = static_cast<double>(rng() >> 40) * 0x1p-24;
      const double z = std::sqrt(-2.0 * std::log(u1)) *
                       std::cos(2.0 * std::numbers::pi * u2);
      values.push_back(static_cast<float>(0.5 + 0.15 * z));
    }
  }
  return Dataset(arity, std::move(values));
}

}  // namespace spectree
