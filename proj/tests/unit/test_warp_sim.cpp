#include <doctest.h>

#include <spectree/dataset.hpp>
#include <spectree/errors.hpp>
#include <spectree/eval_serial.hpp>
#include <spectree/eval_speculative.hpp>
#include <spectree/synthetic.hpp>
#include <spectree/tree.hpp>
#include <spectree/warp_sim.hpp>

#include "test_support.hpp"

#include <memory>

using namespace spectree;

namespace {

std::unique_ptr<LinkedNode> complete_tree(std::uint32_t depth) {
    std::uint32_t next_class = 0;
    auto build = [&](auto&& self, std::uint32_t level) -> std::unique_ptr<LinkedNode> {
        if (level == 0) return make_leaf(++next_class);
        return make_split(0, 0.5f, self(self, level - 1), self(self, level - 1));
    };
    return build(build, depth);
}

WarpConfig warp_of(std::uint32_t width, bool half = true) {
    WarpConfig w;
    w.warp_width = width;
    w.half_warp = half;
    return w;
}

}  // namespace

TEST_CASE("one deep lane stalls the whole warp") {
    // 32 single-record workers; rank 0 traverses 11 levels, the rest exit at
    // depth 1.  The warp pays the deepest lane and every shallower lane idles
    // for the difference.
    EncodedTree tree = encode_breadth_first(*testsupport::depth_chain_tree(11));
    Dataset data(1);
    testsupport::append_row(data, {0.75f});
    for (int i = 0; i < 31; ++i) testsupport::append_row(data, {0.25f});

    DataParallelConfig config;
    config.workers = 32;
    config.chunk = 1;

    ClassAssignment out;
    ExecMetrics m = simulate_data_parallel(tree, data, warp_of(32), config, &out);
    CHECK(m.serialized_passes == 11);
    CHECK(m.divergent_branches == 10);      // guard disagreement: 11 vs 1
    CHECK(m.lane_idle_slots == 310);        // 31 lanes * (11 - 1)
    CHECK(m.node_evals == 42);              // 11 + 31 * 1
    CHECK(m.barriers == 0);                 // no barriers in this decomposition
    CHECK(m.reduction_iterations == 0);
    CHECK(out == eval_serial(tree, data));
}

TEST_CASE("uniform depths diverge only at the record-loop guard") {
    // 4 workers x 3 records over 10 records: trip counts 3,3,3,1.  With a
    // uniform depth-3 tree the traversal guard never diverges; the two extra
    // record-loop trips of the full ranks do.
    EncodedTree tree = encode_breadth_first(*complete_tree(3));
    Dataset data = generate_synthetic_dataset(10, 1, 3, Distribution::uniform);

    DataParallelConfig config;
    config.workers = 4;
    config.chunk = 3;

    ExecMetrics m = simulate_data_parallel(tree, data, warp_of(32), config);
    CHECK(m.divergent_branches == 2);   // max trips 3, min trips 1
    CHECK(m.serialized_passes == 9);    // 3 positions x depth 3
    CHECK(m.node_evals == 30);          // 10 records x depth 3
    // Position 0 has all four lanes active; positions 1 and 2 drag the
    // exhausted fourth lane along for 3 idle slots each.
    CHECK(m.lane_idle_slots == 6);
}

TEST_CASE("a lone worker never diverges") {
    EncodedTree tree = generate_synthetic_tree(6, 10, 2, 4, 5);
    Dataset data = generate_synthetic_dataset(40, 2, 6, Distribution::uniform);
    DataParallelConfig config;
    config.workers = 1;
    config.chunk = 40;
    ExecMetrics m = simulate_data_parallel(tree, data, warp_of(32), config);
    CHECK(m.divergent_branches == 0);
    CHECK(m.lane_idle_slots == 0);
    std::uint64_t total_depth = 0;
    for (std::uint32_t d : traversal_depths(tree, data)) total_depth += d;
    CHECK(m.serialized_passes == total_depth);
    CHECK(m.node_evals == total_depth);
}

TEST_CASE("speculative groups pay the slot schedule") {
    // Chain tree: 11 internal nodes, so a mapped group uses 11 lanes padded
    // to a 16-lane slot.  Two records: depth 11 (2 iterations at k=2) and
    // depth 1 (0 iterations).
    EncodedTree tree = encode_breadth_first(*testsupport::depth_chain_tree(11));
    REQUIRE((tree.size() - 1) / 2 == 11);
    Dataset data(1);
    testsupport::append_row(data, {0.75f});
    testsupport::append_row(data, {0.25f});

    SpeculativeConfig config;
    config.group_lanes = 11;
    config.reductions_per_iteration = 2;

    SUBCASE("one group, both records in sequence") {
        config.groups = 1;
        config.records_per_group = 2;
        ClassAssignment out;
        ExecMetrics m = simulate_speculative(tree, data, warp_of(16), config,
                                             SpeculativeVariant::mapped_lanes, &out);
        CHECK(out == eval_serial(tree, data));
        CHECK(m.node_evals == 22);               // 11 mapped lanes x 2 records
        CHECK(m.reduction_iterations == 2);
        CHECK(m.barriers == 6);                  // (1 + 2*2) + (1 + 0)
        CHECK(m.serialized_passes == 2);
        CHECK(m.divergent_branches == 0);        // single resident group
        // Record 0: 5 phases x 16-lane slot - 55 useful = 25 idle.
        // Record 1: 1 phase x 16 - 11 useful = 5 idle.
        CHECK(m.lane_idle_slots == 30);
    }
    SUBCASE("two co-resident groups disagree on iteration count") {
        config.groups = 2;
        config.records_per_group = 1;
        ExecMetrics m = simulate_speculative(tree, data, warp_of(32), config);
        CHECK(m.node_evals == 22);
        CHECK(m.reduction_iterations == 2);
        CHECK(m.barriers == 6);
        CHECK(m.serialized_passes == 2);         // deepest group per position
        CHECK(m.divergent_branches == 2);        // 2 vs 0 iterations
        // Both groups ride 5 phases: group 0 does 55 useful slots, group 1
        // only 11 (its record resolved at the first guard).
        CHECK(m.lane_idle_slots == (16 * 5 - 55) + (16 * 5 - 11));
    }
}

TEST_CASE("all-lanes groups occupy one lane per node") {
    EncodedTree tree = encode_breadth_first(*complete_tree(2));  // 7 nodes
    Dataset data(1);
    testsupport::append_row(data, {0.75f});
    testsupport::append_row(data, {0.25f});

    SpeculativeConfig config;
    config.group_lanes = 7;
    config.groups = 2;
    config.records_per_group = 1;
    config.reductions_per_iteration = 1;

    ClassAssignment out;
    ExecMetrics m = simulate_speculative(tree, data, warp_of(32, false), config,
                                         SpeculativeVariant::all_lanes, &out);
    CHECK(out == eval_serial(tree, data));
    CHECK(m.node_evals == 14);               // every node, both records
    CHECK(m.reduction_iterations == 2);      // one doubling each
    CHECK(m.barriers == 4);
    CHECK(m.serialized_passes == 1);         // both groups in one warp, 1 position
    CHECK(m.divergent_branches == 0);        // same iteration count
    CHECK(m.lane_idle_slots == 0);           // exact-width slots, no padding
}

TEST_CASE("half-warp packing rounds group slots up") {
    EncodedTree tree = generate_synthetic_tree(6, 18, 3, 4, 21);  // 35 nodes
    REQUIRE((tree.size() - 1) / 2 == 17);
    Dataset data = generate_synthetic_dataset(8, 3, 9, Distribution::uniform);

    SpeculativeConfig config;
    config.group_lanes = 17;  // rounds up to a 32-lane slot
    config.groups = 8;
    config.records_per_group = 1;

    ExecMetrics half = simulate_speculative(tree, data, warp_of(32), config);
    WarpConfig exact = warp_of(32);
    exact.half_warp = false;
    ExecMetrics tight = simulate_speculative(tree, data, exact, config);

    // Same work, different packing: half-warp slots waste more lanes but the
    // per-record counters agree.
    CHECK(half.node_evals == tight.node_evals);
    CHECK(half.barriers == tight.barriers);
    CHECK(half.reduction_iterations == tight.reduction_iterations);
    CHECK(half.lane_idle_slots > tight.lane_idle_slots);
}

TEST_CASE("simulated speculative counters reconcile with kernel statistics") {
    EncodedTree tree = generate_synthetic_tree(9, 20, 4, 5, 33);
    Dataset data = generate_synthetic_dataset(90, 4, 44, Distribution::gaussian);

    SpeculativeConfig config;
    config.group_lanes = (tree.size() - 1) / 2;
    config.groups = 30;
    config.records_per_group = 3;
    config.reductions_per_iteration = 2;

    SpeculativeStats stats;
    ClassAssignment expected = eval_speculative(tree, data, config, &stats);
    ClassAssignment out;
    ExecMetrics m = simulate_speculative(tree, data, warp_of(32), config,
                                         SpeculativeVariant::mapped_lanes, &out);
    CHECK(out == expected);
    std::uint64_t iterations = 0;
    for (std::uint32_t i : stats.iterations) iterations += i;
    CHECK(m.reduction_iterations == iterations);
    CHECK(m.barriers == stats.barriers);
}

TEST_CASE("warp geometry validation") {
    EncodedTree tree = generate_synthetic_tree(3, 4, 2, 2, 2);
    Dataset data = generate_synthetic_dataset(4, 2, 2, Distribution::uniform);
    DataParallelConfig dp;
    dp.workers = 4;
    dp.chunk = 1;
    SpeculativeConfig sp;
    sp.group_lanes = 3;
    sp.groups = 4;
    sp.records_per_group = 1;

    SUBCASE("width must be a power of two") {
        CHECK_THROWS_AS(simulate_data_parallel(tree, data, warp_of(24), dp),
                        ArgumentError);
        CHECK_THROWS_AS(simulate_data_parallel(tree, data, warp_of(0), dp),
                        ArgumentError);
    }
    SUBCASE("half-warp packing needs at least 16 lanes") {
        CHECK_THROWS_AS(simulate_data_parallel(tree, data, warp_of(8, true), dp),
                        ArgumentError);
        CHECK_NOTHROW(simulate_data_parallel(tree, data, warp_of(8, false), dp));
    }
    SUBCASE("groups must fit in one warp") {
        sp.group_lanes = 33;
        CHECK_THROWS_WITH_AS(simulate_speculative(tree, data, warp_of(32), sp),
                             doctest::Contains("does not fit"), ArgumentError);
    }
}

TEST_CASE("metric comparisons carry ratios where defined") {
    ExecMetrics a;
    a.divergent_branches = 10;
    a.serialized_passes = 40;
    a.node_evals = 100;
    ExecMetrics b;
    b.divergent_branches = 5;
    b.serialized_passes = 80;
    b.node_evals = 0;

    MetricsComparison c = compare(a, b);
    REQUIRE(c.rows.size() == 6);
    CHECK(c.rows[0].name == "divergent_branches");
    CHECK(c.rows[0].ratio == doctest::Approx(2.0));
    CHECK(c.rows[1].ratio == doctest::Approx(0.5));
    CHECK_FALSE(c.rows[3].ratio.has_value());  // node_evals: right side is zero

    std::string text = to_text(c);
    CHECK(text.find("n/a") != std::string::npos);
    CHECK(text.find("divergent_branches") != std::string::npos);
}
