#include <doctest.h>

#include <spectree/errors.hpp>
#include <spectree/synthetic.hpp>
#include <spectree/tree.hpp>

#include "test_support.hpp"

#include <cmath>
#include <limits>
#include <set>

using namespace spectree;

namespace {

std::unique_ptr<LinkedNode> three_node_tree() {
    return make_split(0, 0.5f, make_leaf(7), make_leaf(9));
}

// Root with an internal left child and leaf right child: five nodes total.
std::unique_ptr<LinkedNode> five_node_tree() {
    return make_split(0, 1.0f,
                      make_split(1, 2.0f, make_leaf(3), make_leaf(4)),
                      make_leaf(5));
}

}  // namespace

TEST_CASE("breadth-first encoding of a single split") {
    EncodedTree tree = encode_breadth_first(*three_node_tree());
    REQUIRE(tree.size() == 3);

    const EncodedNode& root = tree.node(0);
    CHECK(root.attribute == 0);
    CHECK(root.threshold == 0.5f);
    CHECK(root.child == 1);
    CHECK(root.class_id == kNoClass);
    CHECK_FALSE(root.is_leaf());

    const EncodedNode& left = tree.node(1);
    CHECK(left.child == 1);  // leaves loop back to themselves
    CHECK(std::isinf(left.threshold));
    CHECK(left.threshold > 0);
    CHECK(left.class_id == 7);
    CHECK(left.is_leaf());

    const EncodedNode& right = tree.node(2);
    CHECK(right.child == 2);
    CHECK(right.class_id == 9);

    CHECK(tree.leaf_count() == 2);
    CHECK(tree.depth() == 1);
}

TEST_CASE("child counter advances by two per internal node") {
    EncodedTree tree = encode_breadth_first(*five_node_tree());
    REQUIRE(tree.size() == 5);
    // Counter trace: 1 after the root is queued out, 3 after the second
    // internal node.  Right children are implicit (child + 1).
    CHECK(tree.node(0).child == 1);
    CHECK(tree.node(1).child == 3);
    // BFS order puts the root's right leaf at index 2.
    CHECK(tree.node(2).is_leaf());
    CHECK(tree.node(2).class_id == 5);
    CHECK(tree.node(3).class_id == 3);
    CHECK(tree.node(4).class_id == 4);
    CHECK(tree.depth() == 2);
    CHECK(tree.leaf_count() == 3);
}

TEST_CASE("successor arithmetic and the tie rule") {
    EncodedTree tree = encode_breadth_first(*three_node_tree());
    const EncodedNode& root = tree.node(0);
    CHECK(root.successor(0.3f) == 1);   // below threshold: left
    CHECK(root.successor(0.5f) == 1);   // equal: left
    CHECK(root.successor(0.6f) == 2);   // above: right
    // A leaf is a fixpoint for any value.
    CHECK(tree.node(1).successor(123.0f) == 1);
    CHECK(tree.node(2).successor(-123.0f) == 2);
}

TEST_CASE("encoding rejects malformed linked trees") {
    SUBCASE("single-child node") {
        auto root = make_split(0, 1.0f, make_leaf(1),
                               make_split(0, 2.0f, make_leaf(2), make_leaf(3)));
        root->right->right.reset();
        CHECK_THROWS_WITH_AS(encode_breadth_first(*root),
                             doctest::Contains("root.right"), StructureError);
    }
    SUBCASE("leaf without a class") {
        auto root = three_node_tree();
        root->left->class_val.reset();
        CHECK_THROWS_WITH_AS(encode_breadth_first(*root),
                             doctest::Contains("root.left"), StructureError);
    }
    SUBCASE("class on an internal node") {
        auto root = three_node_tree();
        root->class_val = 1;
        CHECK_THROWS_AS(encode_breadth_first(*root), StructureError);
    }
    SUBCASE("reserved class id") {
        CHECK_THROWS_AS(make_leaf(kNoClass), ArgumentError);
    }
    SUBCASE("split with a missing child") {
        CHECK_THROWS_AS(make_split(0, 1.0f, make_leaf(1), nullptr), ArgumentError);
    }
}

TEST_CASE("decode inverts encode") {
    auto shapes = testsupport::all_shapes(5);
    for (auto& shape : shapes) {
        testsupport::assign_labels(*shape);
        EncodedTree tree = encode_breadth_first(*shape);
        auto linked = decode(tree);
        EncodedTree again = encode_breadth_first(*linked);
        REQUIRE(again.size() == tree.size());
        for (std::uint32_t i = 0; i < tree.size(); ++i) {
            CHECK(again.node(i).attribute == tree.node(i).attribute);
            CHECK(again.node(i).threshold == tree.node(i).threshold);
            CHECK(again.node(i).child == tree.node(i).child);
            CHECK(again.node(i).class_id == tree.node(i).class_id);
        }
    }
}

TEST_CASE("decode rejects non-breadth-first links") {
    EncodedTree tree = encode_breadth_first(*five_node_tree());
    auto nodes = testsupport::mutable_nodes(tree);
    nodes[1].child = 1;  // internal node pointing at itself
    nodes[1].threshold = 2.0f;
    CHECK_THROWS_AS(decode(EncodedTree(nodes)), ArgumentError);
}

TEST_CASE("validate flags structural problems") {
    EncodedTree good = encode_breadth_first(*five_node_tree());
    CHECK(validate(good).empty());

    SUBCASE("leaf whose child is not itself") {
        auto nodes = testsupport::mutable_nodes(good);
        nodes[3].child = 0;
        auto diags = validate(EncodedTree(nodes));
        CHECK_FALSE(diags.empty());
    }
    SUBCASE("internal node with non-finite threshold") {
        auto nodes = testsupport::mutable_nodes(good);
        nodes[0].threshold = std::numeric_limits<float>::infinity();
        auto diags = validate(EncodedTree(nodes));
        CHECK_FALSE(diags.empty());
    }
    SUBCASE("child index out of range") {
        auto nodes = testsupport::mutable_nodes(good);
        nodes[1].child = 40;
        bool found = false;
        for (const auto& d : validate(EncodedTree(nodes))) {
            if (d.message.find("out of range") != std::string::npos) found = true;
        }
        CHECK(found);
    }
    SUBCASE("backward link breaks the forward invariant") {
        auto nodes = testsupport::mutable_nodes(good);
        nodes[1].child = 0;
        bool found = false;
        for (const auto& d : validate(EncodedTree(nodes))) {
            if (d.message.find("forward") != std::string::npos) found = true;
        }
        CHECK(found);
    }
    SUBCASE("node count must be odd") {
        std::vector<EncodedNode> nodes = testsupport::mutable_nodes(good);
        EncodedNode extra{};
        extra.attribute = 0;
        extra.threshold = std::numeric_limits<float>::infinity();
        extra.child = 5;
        extra.class_id = 9;
        nodes.push_back(extra);
        bool found = false;
        for (const auto& d : validate(EncodedTree(nodes))) {
            if (d.message.find("not a full tree") != std::string::npos) found = true;
        }
        CHECK(found);
    }
}

TEST_CASE("empty node vectors are rejected") {
    CHECK_THROWS_AS(EncodedTree(std::vector<EncodedNode>{}), ArgumentError);
}

TEST_CASE("leaf path identity and internal node map") {
    EncodedTree tree = encode_breadth_first(*five_node_tree());
    LeafPaths paths = leaf_paths(tree);
    REQUIRE(paths.values.size() == tree.size());
    for (std::uint32_t i = 0; i < tree.size(); ++i) {
        CHECK(paths.values[i] == i);
    }

    ProcessorNodeMap map = processor_node_map(tree);
    REQUIRE(map.values.size() == (tree.size() - 1) / 2);
    // Internal nodes of the five-node tree are 0 and 1, in breadth order.
    CHECK(map.values[0] == 0);
    CHECK(map.values[1] == 1);
    for (std::uint32_t idx : map.values) {
        CHECK_FALSE(tree.node(idx).is_leaf());
    }
}

TEST_CASE("node and leaf counts obey the full-tree identity") {
    for (std::uint32_t leaves : {1u, 2u, 3u, 6u}) {
        auto shapes = testsupport::all_shapes(leaves);
        for (auto& shape : shapes) {
            testsupport::assign_labels(*shape);
            EncodedTree tree = encode_breadth_first(*shape);
            CHECK(tree.size() == 2 * tree.leaf_count() - 1);
            TreeStats s = stats(tree);
            CHECK(s.nodes == tree.size());
            CHECK(s.leaves == tree.leaf_count());
            CHECK(s.depth == tree.depth());
        }
    }
}

TEST_CASE("synthetic trees honor the requested shape") {
    EncodedTree tree = generate_synthetic_tree(11, 16, 19, 7, 7);
    CHECK(tree.size() == 31);
    CHECK(tree.leaf_count() == 16);
    CHECK(tree.depth() == 11);
    CHECK(tree.max_attribute() < 19);
    CHECK(validate(tree).empty());
    for (const EncodedNode& n : tree.nodes()) {
        if (n.is_leaf()) CHECK(n.class_id < 7);
    }
}

TEST_CASE("synthetic generation is deterministic in the seed") {
    EncodedTree a = generate_synthetic_tree(6, 12, 4, 3, 42);
    EncodedTree b = generate_synthetic_tree(6, 12, 4, 3, 42);
    EncodedTree c = generate_synthetic_tree(6, 12, 4, 3, 43);
    REQUIRE(a.size() == b.size());
    bool identical = true;
    for (std::uint32_t i = 0; i < a.size(); ++i) {
        identical = identical && a.node(i).attribute == b.node(i).attribute &&
                    a.node(i).threshold == b.node(i).threshold &&
                    a.node(i).child == b.node(i).child &&
                    a.node(i).class_id == b.node(i).class_id;
    }
    CHECK(identical);
    // A different seed must change something (true for any non-degenerate shape).
    bool any_diff = a.size() != c.size();
    for (std::uint32_t i = 0; !any_diff && i < a.size(); ++i) {
        any_diff = a.node(i).threshold != c.node(i).threshold ||
                   a.node(i).attribute != c.node(i).attribute;
    }
    CHECK(any_diff);
}

TEST_CASE("synthetic shape feasibility checks") {
    CHECK_THROWS_AS(generate_synthetic_tree(3, 2, 1, 2, 1), ArgumentError);   // too few leaves
    CHECK_THROWS_AS(generate_synthetic_tree(2, 5, 1, 2, 1), ArgumentError);   // too many leaves
    CHECK_THROWS_AS(generate_synthetic_tree(0, 2, 1, 2, 1), ArgumentError);   // depth 0 wants 1 leaf
    CHECK_NOTHROW(generate_synthetic_tree(0, 1, 1, 2, 1));
    CHECK_NOTHROW(generate_synthetic_tree(3, 4, 1, 2, 1));
}

TEST_CASE("synthetic trees at the boundary leaf counts") {
    // Minimum leaves: a pure spine.  Maximum leaves: a complete tree.
    EncodedTree spine = generate_synthetic_tree(5, 6, 3, 2, 9);
    CHECK(spine.depth() == 5);
    CHECK(spine.leaf_count() == 6);
    EncodedTree complete = generate_synthetic_tree(4, 16, 3, 2, 9);
    CHECK(complete.depth() == 4);
    CHECK(complete.leaf_count() == 16);
}
