#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "deanon/graph.hpp"
#include "deanon/mapping.hpp"
#include "deanon/rng.hpp"

namespace deanon {

/// Weighted graph over the top-k in-degree hubs of a graph: the instance of
/// the weighted graph matching problem used to find seed pairs.
struct SeedWeightMatrix {
    std::vector<NodeId> nodes;    ///< hubs in top_k_in_degree order
    std::vector<double> weights;  ///< row-major k x k, zero diagonal

    std::size_t k() const { return nodes.size(); }
    double operator()(std::size_t i, std::size_t j) const { return weights[i * nodes.size() + j]; }
    double& operator()(std::size_t i, std::size_t j) { return weights[i * nodes.size() + j]; }
};

enum class SeedWeightMode {
    cosine,  ///< cosine similarity of in-neighborhoods
    edge,    ///< 1 if hub i -> hub j is an edge
};

/// Permutation of {0..k-1}: row i of A is matched to row perm[i] of B.
using Permutation = std::vector<std::size_t>;

struct MatchingState {
    Permutation perm;
    double cost = 0.0;
};

/// Simulated annealing schedule. Zero-valued temperatures and step counts
/// are resolved from the instance (see resolve_anneal_config).
struct AnnealConfig {
    double initial_temp = 0.0;   ///< 0: mean off-diagonal |A - B|
    double cooling = 0.98;
    std::size_t steps_per_temp = 0;  ///< 0: 100 * k
    double min_temp = 0.0;       ///< 0: 1e-4 * initial_temp
    std::size_t restarts = 20;
    /// End a chain after a temperature level in which no move was accepted.
    bool stop_when_frozen = true;
    RngSeed seed{};
    unsigned threads = 1;
};

SeedWeightMatrix build_seed_weights(DirectedGraph const& g, std::size_t k,
                                    SeedWeightMode mode = SeedWeightMode::cosine);

/// Sum over i != j of |A[i][j] - B[perm[i]][perm[j]]|.
double matching_cost(SeedWeightMatrix const& a, SeedWeightMatrix const& b, Permutation const& perm);

/// Cost change from swapping perm[x] and perm[y], computed from the 4k-6
/// affected entries only.
double transposition_delta(SeedWeightMatrix const& a, SeedWeightMatrix const& b,
                           Permutation const& perm, std::size_t x, std::size_t y);

/// Fills in the instance-dependent defaults and validates the ranges.
AnnealConfig resolve_anneal_config(SeedWeightMatrix const& a, SeedWeightMatrix const& b,
                                   AnnealConfig config);

/// Runs `restarts` independent annealing chains (random start, random
/// transpositions, Metropolis acceptance, geometric cooling) and returns the
/// cheapest state seen; ties go to the lowest chain index. Output is
/// independent of config.threads.
MatchingState anneal(SeedWeightMatrix const& a, SeedWeightMatrix const& b, AnnealConfig const& config);

/// Exact minimizer over all k! permutations (k <= 10); ties go to the
/// lexicographically smallest permutation.
MatchingState brute_force_match(SeedWeightMatrix const& a, SeedWeightMatrix const& b);

/// a.nodes[i] -> b.nodes[perm[i]] for every i.
NodeMapping seeds_to_mapping(SeedWeightMatrix const& a, SeedWeightMatrix const& b,
                             MatchingState const& state);

/// CSV dump of a matching instance for offline inspection.
void save_matching_instance(SeedWeightMatrix const& a, SeedWeightMatrix const& b,
                            std::filesystem::path const& path);

}  // namespace deanon
