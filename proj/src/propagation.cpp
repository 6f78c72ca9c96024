#include "deanon/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "deanon/error.hpp"
#include "deanon/parallel.hpp"

namespace deanon {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Candidate {
    double score;
    std::size_t index;
};

std::size_t degree(DirectedGraph const& g, std::size_t i) { return g.out_at(i).size() + g.in_at(i).size(); }

/// Scores every unclaimed node of `to` adjacent to an image of a mapped
/// neighbor of u, best first (ties by ascending id).
std::vector<Candidate> rank_candidates(DirectedGraph const& from, DirectedGraph const& to,
                                       std::vector<std::size_t> const& image,
                                       std::vector<std::size_t> const& owner, std::size_t u) {
    std::vector<std::size_t> touched;
    std::vector<std::uint32_t> hits;
    std::vector<std::size_t> slot;  // to-index -> position in touched
    auto touch = [&](std::size_t c, bool hit) {
        if (owner[c] != kNone) return;
        if (slot.empty()) slot.assign(to.node_count(), kNone);
        if (slot[c] == kNone) {
            slot[c] = touched.size();
            touched.push_back(c);
            hits.push_back(0);
        }
        if (hit) ++hits[slot[c]];
    };
    for (NodeId w : from.out_at(u)) {
        std::size_t const w2 = image[from.index_of(w)];
        if (w2 == kNone) continue;
        for (NodeId c : to.in_at(w2)) touch(to.index_of(c), true);
        for (NodeId c : to.out_at(w2)) touch(to.index_of(c), false);
    }
    for (NodeId w : from.in_at(u)) {
        std::size_t const w2 = image[from.index_of(w)];
        if (w2 == kNone) continue;
        for (NodeId c : to.out_at(w2)) touch(to.index_of(c), true);
        for (NodeId c : to.in_at(w2)) touch(to.index_of(c), false);
    }

    std::vector<Candidate> ranked;
    ranked.reserve(touched.size());
    double const du = static_cast<double>(degree(from, u));
    for (std::size_t i = 0; i < touched.size(); ++i) {
        double const dv = static_cast<double>(degree(to, touched[i]));
        ranked.push_back({hits[i] / std::sqrt(du * dv), touched[i]});
    }
    std::sort(ranked.begin(), ranked.end(), [](Candidate const& a, Candidate const& b) {
        return a.score != b.score ? a.score > b.score : a.index < b.index;
    });
    return ranked;
}

}  // namespace

double candidate_score(DirectedGraph const& g1, DirectedGraph const& g2, NodeMapping const& mapping,
                       NodeId u, NodeId v) {
    if (mapping.contains(u)) throw InvalidArgument("candidate_score: node " + std::to_string(u) + " already mapped");
    if (mapping.claimed(v)) throw InvalidArgument("candidate_score: node " + std::to_string(v) + " already claimed");
    std::size_t const du = g1.out_degree(u) + g1.in_degree(u);
    std::size_t const dv = g2.out_degree(v) + g2.in_degree(v);
    if (du == 0 || dv == 0) return 0.0;
    std::size_t matches = 0;
    for (NodeId w : g1.out_neighbors(u))
        if (auto img = mapping.image(w); img && g2.has_edge(v, *img)) ++matches;
    for (NodeId w : g1.in_neighbors(u))
        if (auto img = mapping.image(w); img && g2.has_edge(*img, v)) ++matches;
    return static_cast<double>(matches) / std::sqrt(static_cast<double>(du) * static_cast<double>(dv));
}

double eccentricity(std::span<double const> scores) {
    if (scores.size() < 2) return 0.0;
    double best = -std::numeric_limits<double>::infinity();
    double second = best;
    double mean = 0.0;
    for (double s : scores) {
        mean += s;
        if (s > best) {
            second = best;
            best = s;
        } else if (s > second) {
            second = s;
        }
    }
    mean /= static_cast<double>(scores.size());
    double var = 0.0;
    for (double s : scores) var += (s - mean) * (s - mean);
    double const sd = std::sqrt(var / static_cast<double>(scores.size()));
    if (sd == 0.0) return 0.0;
    return (best - second) / sd;
}

NodeMapping propagate(DirectedGraph const& g1, DirectedGraph const& g2, NodeMapping const& seeds,
                      PropagationConfig const& config) {
    if (seeds.empty()) throw InvalidArgument("propagate: empty seed mapping");
    if (!(config.theta >= 0.0) || config.max_rounds < 1 || config.candidate_cap < 1)
        throw InvalidArgument("propagate: need theta >= 0, max_rounds >= 1, candidate_cap >= 1");

    std::size_t const n1 = g1.node_count();
    std::vector<std::size_t> image(n1, kNone);            // g1 index -> g2 index
    std::vector<std::size_t> owner(g2.node_count(), kNone);  // g2 index -> g1 index
    for (auto const& [a, b] : seeds) {
        std::size_t const i = g1.index_of(a), j = g2.index_of(b);
        image[i] = j;
        owner[j] = i;
    }

    for (std::size_t round = 0; round < config.max_rounds; ++round) {
        std::vector<std::size_t> const frozen_image = image;
        std::vector<std::size_t> const frozen_owner = owner;
        std::vector<std::size_t> proposal(n1, kNone);

        parallel_for(n1, config.threads, [&](std::size_t u) {
            if (frozen_image[u] != kNone) return;
            auto ranked = rank_candidates(g1, g2, frozen_image, frozen_owner, u);
            if (ranked.empty() || ranked.front().score <= 0.0) return;
            if (ranked.size() > config.candidate_cap) ranked.resize(config.candidate_cap);
            std::vector<double> scores(ranked.size());
            for (std::size_t i = 0; i < ranked.size(); ++i) scores[i] = ranked[i].score;
            if (eccentricity(scores) < config.theta) return;
            std::size_t const v = ranked.front().index;
            if (config.bidirectional_check) {
                auto back = rank_candidates(g2, g1, frozen_owner, frozen_image, v);
                if (back.empty() || back.front().index != u) return;
            }
            proposal[u] = v;
        });

        std::size_t committed = 0;
        for (std::size_t u = 0; u < n1; ++u) {
            std::size_t const v = proposal[u];
            if (v == kNone || owner[v] != kNone) continue;
            image[u] = v;
            owner[v] = u;
            ++committed;
        }
        if (committed == 0) break;
    }

    NodeMapping out;
    for (std::size_t u = 0; u < n1; ++u)
        if (image[u] != kNone) out.insert(g1.id_at(u), g2.id_at(image[u]));
    return out;
}

}  // namespace deanon
