// Microbenchmarks over the reference workload shape: a 31-node, depth-11
// tree and 65,536 records of 19 attributes. Throughput is reported as
// records per second.

#include <benchmark/benchmark.h>

#include "spectree/dataset.hpp"
#include "spectree/eval_data_parallel.hpp"
#include "spectree/eval_serial.hpp"
#include "spectree/eval_speculative.hpp"
#include "spectree/synthetic.hpp"
#include "spectree/tree.hpp"

namespace {

using namespace spectree;

const EncodedTree& fixture_tree() {
  static const EncodedTree tree = generate_synthetic_tree(11, 16, 19, 7, 7);
  return tree;
}

const Dataset& fixture_dataset() {
  static const Dataset dataset =
      tile_dataset(generate_synthetic_dataset(16384, 19, 11), 4);
  return dataset;
}

void BM_EvalSerial(benchmark::State& state) {
  const auto& tree = fixture_tree();
  const auto& dataset = fixture_dataset();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_serial(tree, dataset));
  }
  state.SetItemsProcessed(state.iterations() * dataset.count());
}
BENCHMARK(BM_EvalSerial);

void BM_EvalDataParallel(benchmark::State& state) {
  const auto& tree = fixture_tree();
  const auto& dataset = fixture_dataset();
  DataParallelConfig config;
  config.workers = static_cast<std::uint32_t>(state.range(0));
  config.chunk = static_cast<std::uint32_t>(
      (dataset.count() + config.workers - 1) / config.workers);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_data_parallel(tree, dataset, config));
  }
  state.SetItemsProcessed(state.iterations() * dataset.count());
}
BENCHMARK(BM_EvalDataParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_EvalSpeculative(benchmark::State& state) {
  const auto& tree = fixture_tree();
  const auto& dataset = fixture_dataset();
  SpeculativeConfig config;
  config.group_lanes = 16;
  config.records_per_group = 32;
  config.groups = static_cast<std::uint32_t>(
      (dataset.count() + config.records_per_group - 1) /
      config.records_per_group);
  config.reductions_per_iteration =
      static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_speculative(tree, dataset, config));
  }
  state.SetItemsProcessed(state.iterations() * dataset.count());
}
BENCHMARK(BM_EvalSpeculative)->Arg(1)->Arg(2);

void BM_EvalSpeculativeBasic(benchmark::State& state) {
  const auto& tree = fixture_tree();
  const auto& dataset = fixture_dataset();
  SpeculativeConfig config;
  config.group_lanes = tree.size();
  config.records_per_group = 32;
  config.groups = static_cast<std::uint32_t>(
      (dataset.count() + config.records_per_group - 1) /
      config.records_per_group);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_speculative_basic(tree, dataset, config));
  }
  state.SetItemsProcessed(state.iterations() * dataset.count());
}
BENCHMARK(BM_EvalSpeculativeBasic);

void BM_PathDoubleStep(benchmark::State& state) {
  const auto& tree = fixture_tree();
  const ProcessorNodeMap map = processor_node_map(tree);
  PathArray path = make_path_array(tree);
  const auto record = fixture_dataset().record(0);
  speculative_node_eval(tree, record, map, path);
  for (auto _ : state) {
    path_double_step(path, map.values);
    benchmark::DoNotOptimize(path.values.data());
  }
  state.SetItemsProcessed(state.iterations() * map.values.size());
}
BENCHMARK(BM_PathDoubleStep);

}  // namespace

BENCHMARK_MAIN();
