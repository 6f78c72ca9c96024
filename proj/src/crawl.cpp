#include "deanon/crawl.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "deanon/error.hpp"

namespace deanon {

DirectedGraph generate_scale_free(std::size_t n, std::size_t m, RngSeed seed) {
    if (m < 1 || n < m + 1)
        throw InvalidArgument("generate_scale_free: need n >= m+1 >= 2 (n=" + std::to_string(n) +
                              ", m=" + std::to_string(m) + ")");
    Rng rng = seed.make_rng();
    GraphBuilder b;
    b.reserve_edges(n * m);
    b.add_node(0);

    // Urn holding each node once plus once per received edge: a uniform draw
    // from it is proportional to (in-degree + 1).
    std::vector<NodeId> urn;
    urn.reserve(n * (m + 1));
    urn.push_back(0);
    std::vector<NodeId> picked;
    for (NodeId t = 1; t < n; ++t) {
        std::size_t const want = std::min<std::size_t>(m, t);
        picked.clear();
        if (want == t) {
            for (NodeId v = 0; v < t; ++v) picked.push_back(v);
        } else {
            std::uniform_int_distribution<std::size_t> draw(0, urn.size() - 1);
            while (picked.size() < want) {
                NodeId v = urn[draw(rng)];
                if (std::find(picked.begin(), picked.end(), v) == picked.end()) picked.push_back(v);
            }
        }
        for (NodeId v : picked) {
            b.add_edge(t, v);
            urn.push_back(v);
        }
        urn.push_back(t);
    }
    return b.build();
}

std::size_t crawl_target_size(double coverage, std::size_t n) {
    // The epsilon keeps products like 0.7 * 100 = 70.00000000000001 at 70.
    double const raw = coverage * static_cast<double>(n);
    auto target = static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
    return std::clamp<std::size_t>(target, 1, n);
}

CrawlResult partial_crawl(DirectedGraph const& g, double coverage, RngSeed seed) {
    if (!(coverage > 0.0 && coverage <= 1.0))
        throw InvalidArgument("partial_crawl: coverage must be in (0, 1], got " +
                              std::to_string(coverage));
    std::size_t const n = g.node_count();
    if (n == 0) throw InvalidArgument("partial_crawl: empty graph");
    std::size_t const target = crawl_target_size(coverage, n);

    Rng rng = seed.make_rng();
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> order;
    order.reserve(target);
    std::deque<std::size_t> frontier;
    std::vector<NodeId> nbrs;

    auto visit = [&](std::size_t i) {
        seen[i] = 1;
        order.push_back(i);
        frontier.push_back(i);
    };

    while (order.size() < target) {
        if (frontier.empty()) {
            std::vector<std::size_t> unvisited;
            for (std::size_t i = 0; i < n; ++i)
                if (!seen[i]) unvisited.push_back(i);
            std::uniform_int_distribution<std::size_t> pick(0, unvisited.size() - 1);
            visit(unvisited[pick(rng)]);
            continue;
        }
        std::size_t const cur = frontier.front();
        frontier.pop_front();
        auto out = g.out_at(cur);
        auto in = g.in_at(cur);
        nbrs.clear();
        std::set_union(out.begin(), out.end(), in.begin(), in.end(), std::back_inserter(nbrs));
        for (NodeId v : nbrs) {
            if (order.size() == target) break;
            std::size_t const j = g.index_of(v);
            if (!seen[j]) visit(j);
        }
    }

    std::vector<std::size_t> label(n, 0);
    CrawlResult result;
    GraphBuilder b;
    for (std::size_t k = 0; k < order.size(); ++k) {
        label[order[k]] = k;
        b.add_node(k);
        result.truth.insert(k, g.id_at(order[k]));
    }
    for (std::size_t i : order)
        for (NodeId v : g.out_at(i)) {
            std::size_t const j = g.index_of(v);
            if (seen[j]) b.add_edge(label[i], label[j]);
        }
    result.subgraph = b.build();
    return result;
}

std::pair<DirectedGraph, NodeMapping> obfuscate(DirectedGraph const& g, RngSeed seed) {
    Rng rng = seed.make_rng();
    std::vector<NodeId> fresh(g.node_count());
    std::iota(fresh.begin(), fresh.end(), NodeId{0});
    std::shuffle(fresh.begin(), fresh.end(), rng);

    NodeMapping forward;
    for (std::size_t i = 0; i < g.node_count(); ++i) forward.insert(g.id_at(i), fresh[i]);
    return {apply_permutation(g, forward), forward.inverse()};
}

}  // namespace deanon
