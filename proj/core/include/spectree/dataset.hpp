#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace spectree {

/// Row-major table of real-valued records, all rows the same arity.
/// Loaders and generators guarantee every stored value is finite.
class Dataset {
 public:
  explicit Dataset(std::uint32_t arity);
  Dataset(std::uint32_t arity, std::vector<float> values);

  [[nodiscard]] std::uint32_t arity() const noexcept { return arity_; }
  [[nodiscard]] std::size_t count() const noexcept {
    return values_.size() / arity_;
  }
  [[nodiscard]] std::span<const float> record(std::size_t i) const {
    return {values_.data() + i * arity_, arity_};
  }
  [[nodiscard]] std::span<const float> values() const noexcept {
    return values_;
  }

  void append(std::span<const float> record);
  void reserve(std::size_t records);

 private:
  std::uint32_t arity_;
  std::vector<float> values_;
};

/// One class id per record, positionally aligned with the dataset.
using ClassAssignment = std::vector<std::uint32_t>;

/// Concatenates `factor` copies of the dataset block. factor must be >= 1;
/// tiling composes: tile(d, a * b) == tile(tile(d, a), b).
Dataset tile_dataset(const Dataset& dataset, std::uint32_t factor);

/// Deterministic record-order permutation (Fisher-Yates over row indices).
/// The draw is hand-rolled so the permutation is identical across standard
/// library implementations for a given seed.
Dataset shuffle_dataset(const Dataset& dataset, std::uint64_t seed);

/// FNV-1a over the raw value bytes plus arity and count; used to detect
/// accidental dataset mutation across benchmark iterations.
std::uint64_t dataset_checksum(const Dataset& dataset);

}  // namespace spectree
