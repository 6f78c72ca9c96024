#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "deanon/graph.hpp"
#include "deanon/rng.hpp"

namespace deanon {

inline constexpr std::size_t kFeatureCount = 10;
inline constexpr std::size_t kPathCap = 4;  ///< BFS depth limit; farther pairs get kPathCap + 1

enum Feature : std::size_t {
    kCommonNeighbors,
    kJaccard,
    kAdamicAdar,
    kPrefAttachment,
    kOutDegU,
    kInDegU,
    kOutDegV,
    kInDegV,
    kReverseEdge,
    kShortestPath,
};

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "common_neighbors", "jaccard",  "adamic_adar", "pref_attachment",
    "out_deg_u",        "in_deg_u", "out_deg_v",   "in_deg_v",
    "reverse_edge",     "shortest_path_capped",
};

using FeatureVector = std::array<double, kFeatureCount>;

/// Row-major feature rows with aligned 0/1 labels.
struct TrainingSet {
    std::vector<FeatureVector> rows;
    std::vector<int> labels;
};

/// Structural features of the ordered pair (u, v). Neighborhood features use
/// the undirected view, degree features stay directed and the path feature is
/// an undirected BFS distance that never uses the edge u -> v.
///
/// With `hide_edge`, u -> v is treated as absent everywhere, which is how a
/// held-out positive must be featurized.
FeatureVector extract_features(DirectedGraph const& g, NodeId u, NodeId v, bool hide_edge = false);

/// Featurizes many pairs, optionally on several threads. Result order
/// matches `pairs`.
std::vector<FeatureVector> extract_features_batch(DirectedGraph const& g, std::span<Edge const> pairs,
                                                  bool hide_edge, unsigned threads = 1);

/// n_pos edges (featurized with their own edge hidden) plus n_neg
/// endpoint-matched non-edges, shuffled.
TrainingSet build_training_rows(DirectedGraph const& train_graph, std::size_t n_pos, std::size_t n_neg,
                                RngSeed seed, unsigned threads = 1);

/// CSV with a header naming the features, then `label` as last column.
void save_features_csv(TrainingSet const& set, std::filesystem::path const& path);

}  // namespace deanon
