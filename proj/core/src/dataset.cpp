#include "spectree/dataset.hpp"

#include <cstring>
#include <random>

#include "spectree/errors.hpp"

namespace spectree {

Dataset::Dataset(std::uint32_t arity) : arity_(arity) {
  if (arity == 0) {
    throw ArgumentError("dataset arity must be >= 1");
  }
}

Dataset::Dataset(std::uint32_t arity, std::vector<float> values)
    : Dataset(arity) {
  if (values.size() % arity != 0) {
    throw ArgumentError("value count is not a multiple of the arity");
  }
  values_ = std::move(values);
}

void Dataset::append(std::span<const float> record) {
  if (record.size() != arity_) {
    throw ArgumentError("record arity mismatch");
  }
  values_.insert(values_.end(), record.begin(), record.end());
}

void Dataset::reserve(std::size_t records) {
  values_.reserve(records * arity_);
}

Dataset tile_dataset(const Dataset& dataset, std::uint32_t factor) {
  if (factor == 0) {
    throw ArgumentError("tile factor must be >= 1");
  }
  std::vector<float> values;
  values.reserve(dataset.values().size() * factor);
  for (std::uint32_t rep = 0; rep < factor; ++rep) {
    values.insert(values.end(), dataset.values().begin(),
                  dataset.values().end());
  }
  return Dataset(dataset.arity(), std::move(values));
}

namespace {

// Lemire-style unbiased-enough bounded draw; deterministic across platforms,
// unlike std::uniform_int_distribution.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

}  // namespace

Dataset shuffle_dataset(const Dataset& dataset, std::uint64_t seed) {
  std::vector<std::size_t> order(dataset.count());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[bounded(rng, i)]);
  }
  Dataset shuffled(dataset.arity());
  shuffled.reserve(dataset.count());
  for (std::size_t i : order) {
    shuffled.append(dataset.record(i));
  }
  return shuffled;
}

std::uint64_t dataset_checksum(const Dataset& dataset) {
  constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
  constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t hash = kOffset;
  auto mix = [&hash](const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash ^= bytes[i];
      hash *= kPrime;
    }
  };
  const std::uint32_t arity = dataset.arity();
  const std::uint64_t count = dataset.count();
  mix(&arity, sizeof arity);
  mix(&count, sizeof count);
  mix(dataset.values().data(), dataset.values().size_bytes());
  return hash;
}

}  // namespace spectree
