#pragma once

#include <cstddef>
#include <span>

#include "deanon/graph.hpp"
#include "deanon/mapping.hpp"

namespace deanon {

struct PropagationConfig {
    double theta = 0.5;  ///< minimum eccentricity to accept a match
    std::size_t max_rounds = 10;
    bool bidirectional_check = true;
    std::size_t candidate_cap = 50;
    unsigned threads = 1;
};

/// Number of u's neighbors whose image is the same-direction neighbor of v,
/// over sqrt(deg(u) * deg(v)) with deg = in + out. Throws InvalidArgument if
/// u is already mapped or v already claimed.
double candidate_score(DirectedGraph const& g1, DirectedGraph const& g2, NodeMapping const& mapping,
                       NodeId u, NodeId v);

/// (max - second max) / population std of the scores; 0 for fewer than two
/// scores or zero spread.
double eccentricity(std::span<double const> scores);

/// Grows `seeds` (g1 -> g2) by repeated passes over the unmapped g1 nodes in
/// ascending id order. Each pass scores against the mapping frozen at its
/// start; a node is matched to its best candidate when the candidate scores
/// are eccentric enough and, with bidirectional_check, when the match is
/// also best in reverse. Conflicting claims resolve in ascending u order.
/// Seeds are never revoked.
NodeMapping propagate(DirectedGraph const& g1, DirectedGraph const& g2, NodeMapping const& seeds,
                      PropagationConfig const& config);

}  // namespace deanon
