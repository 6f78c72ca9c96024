#pragma once

#include <cstddef>
#include <filesystem>
#include <utility>

#include "deanon/graph.hpp"
#include "deanon/mapping.hpp"
#include "deanon/rng.hpp"

namespace deanon {

/// A crawled subgraph with fresh labels plus its correspondence to the
/// ground-truth graph (crawl id -> true id, total and edge-preserving).
struct CrawlResult {
    DirectedGraph subgraph;
    NodeMapping truth;
};

/// Directed preferential attachment on nodes 0..n-1. Node t emits min(m, t)
/// distinct out-edges to earlier nodes, each picked with probability
/// proportional to (in-degree + 1).
DirectedGraph generate_scale_free(std::size_t n, std::size_t m, RngSeed seed);

/// Number of nodes a crawl of `coverage` visits in a graph of n nodes.
std::size_t crawl_target_size(double coverage, std::size_t n);

/// Breadth-first crawl over both edge directions from a random start,
/// restarting at a random unvisited node when the frontier empties, until
/// ceil(coverage * n) nodes are visited. Visited nodes are relabeled
/// 0..c-1 in visit order.
CrawlResult partial_crawl(DirectedGraph const& g, double coverage, RngSeed seed);

/// Relabels g by a uniformly random bijection onto 0..n-1. The mapping
/// sends obfuscated ids back to the ids of g.
std::pair<DirectedGraph, NodeMapping> obfuscate(DirectedGraph const& g, RngSeed seed);

/// `crawl_id,true_id` per line (same layout as save_mapping).
inline void save_truth(NodeMapping const& truth, std::filesystem::path const& path) {
    save_mapping(truth, path);
}
inline NodeMapping load_truth(std::filesystem::path const& path) { return load_mapping(path); }

}  // namespace deanon
