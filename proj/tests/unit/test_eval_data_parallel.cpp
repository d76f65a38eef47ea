#include <doctest.h>

#include <spectree/dataset.hpp>
#include <spectree/errors.hpp>
#include <spectree/eval_data_parallel.hpp>
#include <spectree/eval_serial.hpp>
#include <spectree/synthetic.hpp>
#include <spectree/tree.hpp>

#include "test_support.hpp"

using namespace spectree;

namespace {

DataParallelConfig config_for(std::uint32_t workers, std::uint32_t chunk,
                              std::uint32_t os_threads = 0) {
    DataParallelConfig c;
    c.workers = workers;
    c.chunk = chunk;
    c.os_threads = os_threads;
    return c;
}

}  // namespace

TEST_CASE("static ranges cover every record exactly once") {
    EncodedTree tree = generate_synthetic_tree(7, 14, 4, 5, 3);
    Dataset data = generate_synthetic_dataset(10, 4, 9, Distribution::uniform);
    ClassAssignment expected = eval_serial(tree, data);

    // Ragged split: 4 workers x 3 records covers 10 records as
    // [0,3) [3,6) [6,9) [9,10) -- the last range clamps.
    CHECK(eval_data_parallel(tree, data, config_for(4, 3)) == expected);
}

TEST_CASE("results are bit-identical to serial over a geometry grid") {
    EncodedTree tree = generate_synthetic_tree(9, 24, 6, 6, 8);
    Dataset data = generate_synthetic_dataset(257, 6, 21, Distribution::gaussian);
    ClassAssignment expected = eval_serial(tree, data);

    for (std::uint32_t workers : {1u, 2u, 3u, 7u, 16u, 257u, 300u}) {
        const auto chunk = static_cast<std::uint32_t>(
            (data.count() + workers - 1) / workers);
        CHECK(eval_data_parallel(tree, data, config_for(workers, chunk)) == expected);
    }
}

TEST_CASE("execution width never changes the assignment") {
    EncodedTree tree = generate_synthetic_tree(6, 9, 2, 3, 12);
    Dataset data = generate_synthetic_dataset(100, 2, 5, Distribution::uniform);
    ClassAssignment expected = eval_serial(tree, data);
    for (std::uint32_t os_threads : {1u, 2u, 8u}) {
        CHECK(eval_data_parallel(tree, data, config_for(10, 10, os_threads)) ==
              expected);
    }
}

TEST_CASE("idle trailing workers are harmless") {
    EncodedTree tree = generate_synthetic_tree(4, 6, 2, 3, 1);
    Dataset data = generate_synthetic_dataset(5, 2, 2, Distribution::uniform);
    // 8 workers x 1 record: workers 5..7 own empty ranges.
    CHECK(eval_data_parallel(tree, data, config_for(8, 1)) ==
          eval_serial(tree, data));
}

TEST_CASE("geometry validation") {
    Dataset data = generate_synthetic_dataset(10, 1, 1, Distribution::uniform);
    EncodedTree tree = generate_synthetic_tree(2, 3, 1, 2, 1);

    SUBCASE("zero workers") {
        CHECK_THROWS_AS(validate_data_parallel(config_for(0, 5), data.count()),
                        ArgumentError);
    }
    SUBCASE("zero chunk") {
        CHECK_THROWS_AS(validate_data_parallel(config_for(4, 0), data.count()),
                        ArgumentError);
    }
    SUBCASE("capacity below record count") {
        CHECK_THROWS_WITH_AS(eval_data_parallel(tree, data, config_for(3, 3)),
                             doctest::Contains("unassigned"), ArgumentError);
    }
    SUBCASE("exact fit accepted") {
        DataParallelConfig c = config_for(5, 2);
        c.exact_fit = true;
        CHECK_NOTHROW(validate_data_parallel(c, data.count()));
    }
    SUBCASE("exact fit violated") {
        DataParallelConfig c = config_for(4, 3);
        c.exact_fit = true;
        CHECK_THROWS_AS(validate_data_parallel(c, data.count()), ArgumentError);
    }
}

TEST_CASE("empty dataset needs no capacity") {
    EncodedTree tree = generate_synthetic_tree(2, 3, 1, 2, 1);
    Dataset data(1);
    CHECK(eval_data_parallel(tree, data, config_for(1, 1)).empty());
}
