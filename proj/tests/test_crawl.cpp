#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "doctest.h"
#include "deanon/crawl.hpp"
#include "deanon/error.hpp"
#include "testing.hpp"

using namespace deanon;

namespace {

bool weakly_connected(DirectedGraph const& g) {
    if (g.node_count() == 0) return true;
    std::vector<char> seen(g.node_count(), 0);
    std::deque<std::size_t> q{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
        auto i = q.front();
        q.pop_front();
        for (auto row : {g.out_at(i), g.in_at(i)})
            for (NodeId v : row) {
                auto j = g.index_of(v);
                if (!seen[j]) {
                    seen[j] = 1;
                    ++count;
                    q.push_back(j);
                }
            }
    }
    return count == g.node_count();
}

void check_crawl_invariants(DirectedGraph const& g, CrawlResult const& c) {
    REQUIRE(c.truth.size() == c.subgraph.node_count());
    std::set<NodeId> images;
    for (auto const& [crawl_id, true_id] : c.truth) {
        CHECK(c.subgraph.contains(crawl_id));
        CHECK(g.contains(true_id));
        images.insert(true_id);
    }
    CHECK(images.size() == c.truth.size());
    for (auto const& e : c.subgraph.edges()) CHECK(g.has_edge(c.truth.at(e.source), c.truth.at(e.target)));
    // Induced: every ground-truth edge among crawled nodes is kept.
    auto inv = c.truth.inverse();
    std::size_t inner = 0;
    for (auto const& e : g.edges())
        if (inv.contains(e.source) && inv.contains(e.target)) ++inner;
    CHECK(inner == c.subgraph.edge_count());
}

}  // namespace

TEST_CASE("generate_scale_free small case") {
    auto g = generate_scale_free(5, 1, RngSeed{3});
    CHECK(g.node_count() == 5);
    CHECK(g.edge_count() == 4);
    CHECK(weakly_connected(g));
}

TEST_CASE("generate_scale_free is deterministic in its seed") {
    auto a = generate_scale_free(300, 3, RngSeed{17});
    auto b = generate_scale_free(300, 3, RngSeed{17});
    auto c = generate_scale_free(300, 3, RngSeed{18});
    CHECK(a == b);
    CHECK_FALSE(a == c);
}

TEST_CASE("generate_scale_free out-degrees") {
    auto g = generate_scale_free(50, 4, RngSeed{1});
    for (NodeId t = 0; t < 50; ++t) CHECK(g.out_degree(t) == std::min<std::size_t>(4, t));
}

TEST_CASE("generate_scale_free rejects bad sizes") {
    CHECK_THROWS_AS(generate_scale_free(1, 1, RngSeed{}), InvalidArgument);
    CHECK_THROWS_AS(generate_scale_free(5, 0, RngSeed{}), InvalidArgument);
    CHECK_THROWS_AS(generate_scale_free(5, 5, RngSeed{}), InvalidArgument);
}

TEST_CASE("generate_scale_free has hubs") {
    // Calibrated over seeds 0..19: the median in-degree is 0 and the maximum
    // ranges over several hundred, so the 5x bound holds with a wide margin.
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto g = generate_scale_free(2000, 5, RngSeed{s});
        std::vector<std::size_t> d;
        for (NodeId u : g.nodes()) d.push_back(g.in_degree(u));
        std::sort(d.begin(), d.end());
        double const median = (d[999] + d[1000]) / 2.0;
        CHECK(static_cast<double>(d.back()) > 5.0 * median);
        CHECK(d.back() >= 100);
    }
}

TEST_CASE("crawl_target_size rounds up exactly") {
    CHECK(crawl_target_size(0.5, 100) == 50);
    CHECK(crawl_target_size(0.7, 100) == 70);
    CHECK(crawl_target_size(0.33, 10) == 4);
    CHECK(crawl_target_size(1.0, 7) == 7);
    CHECK(crawl_target_size(1e-9, 7) == 1);
}

TEST_CASE("partial_crawl full coverage reproduces the graph") {
    auto g = generate_scale_free(200, 3, RngSeed{2});
    auto c = partial_crawl(g, 1.0, RngSeed{4});
    CHECK(c.subgraph.node_count() == g.node_count());
    CHECK(apply_permutation(c.subgraph, c.truth) == g);
}

TEST_CASE("partial_crawl size contract") {
    auto g = generate_scale_free(100, 2, RngSeed{2});
    CHECK(partial_crawl(g, 0.5, RngSeed{1}).subgraph.node_count() == 50);
    CHECK(partial_crawl(g, 0.7, RngSeed{1}).subgraph.node_count() == 70);
    CHECK_THROWS_AS(partial_crawl(g, 0.0, RngSeed{1}), InvalidArgument);
    CHECK_THROWS_AS(partial_crawl(g, 1.5, RngSeed{1}), InvalidArgument);
}

TEST_CASE("partial_crawl restarts when the frontier empties") {
    // Two components; a 0.9 crawl cannot finish inside either one.
    auto g = testing::make_graph({{0, 1}, {1, 2}, {3, 4}, {4, 5}, {5, 6}});
    auto c = partial_crawl(g, 0.9, RngSeed{8});
    CHECK(c.subgraph.node_count() == 7);
    check_crawl_invariants(g, c);
}

TEST_CASE("two 0.7 crawls overlap by at least 0.4 n") {
    auto g = generate_scale_free(500, 3, RngSeed{6});
    auto a = partial_crawl(g, 0.7, RngSeed{1});
    auto b = partial_crawl(g, 0.7, RngSeed{2});
    std::set<NodeId> ta, both;
    for (auto const& [k, v] : a.truth) ta.insert(v);
    for (auto const& [k, v] : b.truth)
        if (ta.contains(v)) both.insert(v);
    CHECK(both.size() >= 200);
}

TEST_CASE("property: crawl truth is injective and edge-preserving") {
    Rng rng(21);
    std::uniform_real_distribution<double> cov(0.05, 1.0);
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
        auto g = trial % 2 ? generate_scale_free(150, 2, RngSeed{trial}) : testing::random_graph(80, 0.03, rng);
        double const c = cov(rng);
        auto crawl = partial_crawl(g, c, RngSeed{trial + 100});
        CHECK(crawl.subgraph.node_count() == crawl_target_size(c, g.node_count()));
        check_crawl_invariants(g, crawl);
    }
}

TEST_CASE("hub sets survive partial crawls") {
    // Calibrated over these 10 seeds: overlaps 18-20, mean 19.2.
    double total = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        RngSeed base{1000 + s};
        auto g = generate_scale_free(2000, 5, base.derive("g"));
        auto a = partial_crawl(g, 0.7, base.derive("a"));
        auto b = partial_crawl(g, 0.7, base.derive("b"));
        std::set<NodeId> ta;
        for (NodeId u : top_k_in_degree(a.subgraph, 20)) ta.insert(a.truth.at(u));
        int overlap = 0;
        for (NodeId u : top_k_in_degree(b.subgraph, 20)) overlap += ta.contains(b.truth.at(u));
        total += overlap;
    }
    CHECK(total / 10 >= 15.0);
}

TEST_CASE("obfuscate") {
    auto g = generate_scale_free(300, 3, RngSeed{5});
    auto [h, back] = obfuscate(g, RngSeed{9});
    CHECK(apply_permutation(h, back) == g);

    std::vector<std::size_t> dg, dh;
    for (NodeId u : g.nodes()) dg.push_back(g.in_degree(u));
    for (NodeId u : h.nodes()) dh.push_back(h.in_degree(u));
    std::sort(dg.begin(), dg.end());
    std::sort(dh.begin(), dh.end());
    CHECK(dg == dh);

    auto [h2, back2] = obfuscate(g, RngSeed{9});
    CHECK(h2 == h);
    CHECK(back2 == back);
    auto [h3, back3] = obfuscate(g, RngSeed{10});
    CHECK_FALSE(back3 == back);
}
