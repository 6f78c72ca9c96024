#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "deanon/error.hpp"
#include "deanon/graph.hpp"
#include "deanon/mapping.hpp"
#include "testing.hpp"

using namespace deanon;
using testing::make_graph;

TEST_CASE("add_edge builds consistent adjacency") {
    auto g = make_graph({{1, 2}});
    CHECK(g.edge_count() == 1);
    CHECK(g.in_degree(2) == 1);
    CHECK(g.out_degree(1) == 1);
    CHECK(g.has_edge(1, 2));
    CHECK_FALSE(g.has_edge(2, 1));
}

TEST_CASE("duplicate edges collapse") {
    GraphBuilder b;
    b.add_edge(1, 2).add_edge(1, 2);
    CHECK(b.build().edge_count() == 1);
}

TEST_CASE("self-loops are rejected") {
    GraphBuilder b;
    CHECK_THROWS_AS(b.add_edge(3, 3), SelfLoopError);
}

TEST_CASE("in_degree") {
    CHECK(make_graph({{1, 3}, {2, 3}}).in_degree(3) == 2);
    CHECK(make_graph({{1, 2}}, {7}).in_degree(7) == 0);
    CHECK(make_graph({{1, 2}, {1, 3}, {2, 3}}).in_degree(2) == 1);
    CHECK_THROWS_AS(make_graph({{1, 2}}).in_degree(5), UnknownNodeError);
}

TEST_CASE("top_k_in_degree ordering and ties") {
    auto g = make_graph({{1, 3}, {2, 3}, {1, 2}});
    CHECK(top_k_in_degree(g, 2) == std::vector<NodeId>{3, 2});

    auto flat = make_graph({}, {40, 7, 19, 3});
    CHECK(top_k_in_degree(flat, 3) == std::vector<NodeId>{3, 7, 19});

    auto all = top_k_in_degree(g, 3);
    std::sort(all.begin(), all.end());
    CHECK(all == std::vector<NodeId>{1, 2, 3});

    CHECK_THROWS_AS(top_k_in_degree(g, 0), InvalidArgument);
    CHECK_THROWS_AS(top_k_in_degree(g, 4), InvalidArgument);
}

TEST_CASE("apply_permutation") {
    auto g = make_graph({{1, 2}});
    auto perm = NodeMapping::from_pairs({{1, 9}, {2, 7}});
    auto h = apply_permutation(g, perm);
    CHECK(h.edges() == std::vector<Edge>{{9, 7}});

    auto id = NodeMapping::from_pairs({{1, 1}, {2, 2}});
    CHECK(apply_permutation(g, id) == g);

    CHECK(apply_permutation(h, perm.inverse()) == g);

    // Not total on the node set.
    CHECK_THROWS_AS(apply_permutation(g, NodeMapping::from_pairs({{1, 9}})), InvalidArgument);
    // Not injective.
    CHECK_THROWS_AS(NodeMapping::from_pairs({{1, 9}, {2, 9}}), InvalidArgument);
}

TEST_CASE("induced_subgraph keeps only inner edges") {
    auto g = make_graph({{1, 2}, {2, 3}, {3, 1}, {3, 4}});
    std::vector<NodeId> keep{1, 2, 3};
    auto s = induced_subgraph(g, keep);
    CHECK(s.node_count() == 3);
    CHECK(s.edges() == std::vector<Edge>{{1, 2}, {2, 3}, {3, 1}});
}

TEST_CASE("NodeMapping injectivity and lookups") {
    NodeMapping m;
    m.insert(1, 10);
    CHECK_THROWS_AS(m.insert(1, 11), InvalidArgument);
    CHECK_THROWS_AS(m.insert(2, 10), InvalidArgument);
    CHECK_FALSE(m.try_insert(2, 10));
    CHECK(m.try_insert(2, 20));
    CHECK(m.image(2) == NodeId{20});
    CHECK(m.preimage(10) == NodeId{1});
    CHECK_FALSE(m.image(3).has_value());
    CHECK_THROWS_AS(m.at(3), UnknownNodeError);
    CHECK(m.extends(NodeMapping::from_pairs({{1, 10}})));
    CHECK_FALSE(m.extends(NodeMapping::from_pairs({{1, 20}})));
}

TEST_CASE("edge list I/O") {
    testing::TempDir dir;

    SUBCASE("basic file") {
        testing::spit(dir / "g.csv", "1,2\n2,3\n");
        auto g = load_edge_list(dir / "g.csv");
        CHECK(g.edge_count() == 2);
    }
    SUBCASE("header and duplicates") {
        testing::spit(dir / "g.csv", "source,target\n1,2\n1,2\n5,1\n");
        auto g = load_edge_list(dir / "g.csv");
        CHECK(g.edges() == std::vector<Edge>{{1, 2}, {5, 1}});
    }
    SUBCASE("malformed line names its line number") {
        testing::spit(dir / "g.csv", "1,one\n");
        try {
            load_edge_list(dir / "g.csv");
            FAIL("expected a parse error");
        } catch (ParseError const& e) {
            CHECK(e.line() == 1);
        }
        testing::spit(dir / "h.csv", "1,2\n2 3\n");
        try {
            load_edge_list(dir / "h.csv");
            FAIL("expected a parse error");
        } catch (ParseError const& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("self-loop line") {
        testing::spit(dir / "g.csv", "1,2\n4,4\n");
        CHECK_THROWS_AS(load_edge_list(dir / "g.csv"), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_edge_list(dir / "nope.csv"), MissingArtifactError);
    }
    SUBCASE("save is sorted and byte-deterministic") {
        auto g = make_graph({{3, 1}, {1, 5}, {1, 2}});
        save_edge_list(g, dir / "g.csv");
        CHECK(testing::slurp(dir / "g.csv") == "1,2\n1,5\n3,1\n");
    }
    SUBCASE("extra nodes survive as isolated nodes") {
        testing::spit(dir / "g.csv", "1,2\n");
        std::vector<NodeId> extra{9};
        auto g = load_edge_list(dir / "g.csv", extra);
        CHECK(g.node_count() == 3);
        CHECK(g.in_degree(9) == 0);
    }
    SUBCASE("mapping file round trip") {
        auto m = NodeMapping::from_pairs({{5, 1}, {2, 8}});
        save_mapping(m, dir / "m.csv");
        CHECK(testing::slurp(dir / "m.csv") == "2,8\n5,1\n");
        CHECK(load_mapping(dir / "m.csv") == m);
        testing::spit(dir / "bad.csv", "1,2\n3,2\n");
        CHECK_THROWS_AS(load_mapping(dir / "bad.csv"), ParseError);
    }
}

TEST_CASE("property: in and out adjacency agree") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = testing::random_graph(30, 0.1, rng, trial % 2 ? 3 : 1);
        std::size_t out_total = 0;
        for (NodeId u : g.nodes()) {
            std::size_t count = 0;
            for (NodeId v : g.nodes())
                if (g.has_edge(v, u)) ++count;
            CHECK(g.in_degree(u) == count);
            for (NodeId w : g.in_neighbors(u)) CHECK(g.has_edge(w, u));
            out_total += g.out_degree(u);
        }
        CHECK(out_total == g.edge_count());
    }
}

TEST_CASE("property: permutation preserves edge count and in-degree sequence") {
    Rng rng(5);
    auto in_seq = [](DirectedGraph const& g) {
        std::vector<std::size_t> d;
        for (NodeId u : g.nodes()) d.push_back(g.in_degree(u));
        std::sort(d.begin(), d.end());
        return d;
    };
    for (int trial = 0; trial < 20; ++trial) {
        auto g = testing::random_graph(40, 0.08, rng);
        std::vector<NodeId> target(g.node_count());
        std::iota(target.begin(), target.end(), NodeId{1000});
        std::shuffle(target.begin(), target.end(), rng);
        NodeMapping perm;
        for (std::size_t i = 0; i < target.size(); ++i) perm.insert(g.id_at(i), target[i]);
        auto h = apply_permutation(g, perm);
        CHECK(h.edge_count() == g.edge_count());
        CHECK(in_seq(h) == in_seq(g));
        for (auto const& e : g.edges()) CHECK(h.has_edge(perm.at(e.source), perm.at(e.target)));
    }
}

TEST_CASE("property: top_k_in_degree is deterministic") {
    Rng rng(3);
    auto g = testing::random_graph(100, 0.05, rng);
    CHECK(top_k_in_degree(g, 17) == top_k_in_degree(g, 17));
}

TEST_CASE("property: save/load round trip on a 1e5-edge graph") {
    Rng rng(9);
    std::uniform_int_distribution<NodeId> pick(0, 1'000'000);
    GraphBuilder b;
    for (int i = 0; i < 100000; ++i) {
        NodeId u = pick(rng), v = pick(rng);
        if (u != v) b.add_edge(u, v);
    }
    auto g = b.build();
    REQUIRE(g.edge_count() > 90000);
    testing::TempDir dir;
    save_edge_list(g, dir / "big.csv");
    CHECK(load_edge_list(dir / "big.csv").edges() == g.edges());
}
