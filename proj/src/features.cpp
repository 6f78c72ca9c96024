#include "deanon/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "deanon/contest.hpp"
#include "deanon/error.hpp"
#include "deanon/io.hpp"
#include "deanon/parallel.hpp"

namespace deanon {

namespace {

// Undirected neighborhood of x, dropping `drop` (the hidden endpoint).
void undirected_neighbors(DirectedGraph const& g, std::size_t x, NodeId drop, bool use_drop,
                          std::vector<NodeId>& out) {
    out.clear();
    auto o = g.out_at(x);
    auto i = g.in_at(x);
    std::set_union(o.begin(), o.end(), i.begin(), i.end(), std::back_inserter(out));
    if (use_drop) {
        auto it = std::lower_bound(out.begin(), out.end(), drop);
        if (it != out.end() && *it == drop) out.erase(it);
    }
}

std::size_t undirected_degree(DirectedGraph const& g, std::size_t x) {
    auto o = g.out_at(x);
    auto i = g.in_at(x);
    std::size_t shared = 0;
    auto a = o.begin(), b = i.begin();
    while (a != o.end() && b != i.end()) {
        if (*a < *b) {
            ++a;
        } else if (*b < *a) {
            ++b;
        } else {
            ++shared;
            ++a;
            ++b;
        }
    }
    return o.size() + i.size() - shared;
}

// Undirected BFS distance from u to v ignoring the directed edge u -> v,
// capped at kPathCap (returns kPathCap + 1 beyond).
std::size_t capped_distance(DirectedGraph const& g, std::size_t u, std::size_t v) {
    NodeId const vid = g.id_at(v);
    std::vector<std::size_t> frontier{u}, next;
    std::vector<char> seen(g.node_count(), 0);
    seen[u] = 1;
    for (std::size_t depth = 1; depth <= kPathCap && !frontier.empty(); ++depth) {
        next.clear();
        for (std::size_t x : frontier) {
            auto relax = [&](NodeId w) {
                std::size_t const j = g.index_of(w);
                if (seen[j]) return false;
                seen[j] = 1;
                next.push_back(j);
                return j == v;
            };
            for (NodeId w : g.out_at(x)) {
                if (x == u && w == vid) continue;
                if (relax(w)) return depth;
            }
            for (NodeId w : g.in_at(x))
                if (relax(w)) return depth;
        }
        frontier.swap(next);
    }
    return kPathCap + 1;
}

}  // namespace

FeatureVector extract_features(DirectedGraph const& g, NodeId u, NodeId v, bool hide_edge) {
    if (u == v) throw InvalidArgument("extract_features: u == v (" + std::to_string(u) + ")");
    std::size_t const iu = g.index_of(u);
    std::size_t const iv = g.index_of(v);

    bool const forward = g.has_edge(u, v);
    bool const reverse = g.has_edge(v, u);
    // Hiding u -> v only removes the endpoints from each other's
    // neighborhoods if v -> u does not keep them adjacent.
    bool const drop = hide_edge && forward && !reverse;

    std::vector<NodeId> nu, nv;
    undirected_neighbors(g, iu, v, drop, nu);
    undirected_neighbors(g, iv, u, drop, nv);

    std::vector<NodeId> common;
    std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(common));
    std::size_t const union_size = nu.size() + nv.size() - common.size();

    double adamic_adar = 0.0;
    for (NodeId z : common) {
        auto const dz = undirected_degree(g, g.index_of(z));
        if (dz > 1) adamic_adar += 1.0 / std::log(static_cast<double>(dz));
    }

    bool const hidden = hide_edge && forward;
    FeatureVector f{};
    f[kCommonNeighbors] = static_cast<double>(common.size());
    f[kJaccard] = union_size == 0 ? 0.0 : static_cast<double>(common.size()) / static_cast<double>(union_size);
    f[kAdamicAdar] = adamic_adar;
    f[kPrefAttachment] = static_cast<double>(nu.size()) * static_cast<double>(nv.size());
    f[kOutDegU] = static_cast<double>(g.out_at(iu).size() - (hidden ? 1 : 0));
    f[kInDegU] = static_cast<double>(g.in_at(iu).size());
    f[kOutDegV] = static_cast<double>(g.out_at(iv).size());
    f[kInDegV] = static_cast<double>(g.in_at(iv).size() - (hidden ? 1 : 0));
    f[kReverseEdge] = reverse ? 1.0 : 0.0;
    f[kShortestPath] = static_cast<double>(capped_distance(g, iu, iv));
    return f;
}

std::vector<FeatureVector> extract_features_batch(DirectedGraph const& g, std::span<Edge const> pairs,
                                                  bool hide_edge, unsigned threads) {
    std::vector<FeatureVector> out(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t i) {
        out[i] = extract_features(g, pairs[i].source, pairs[i].target, hide_edge);
    });
    return out;
}

TrainingSet build_training_rows(DirectedGraph const& train_graph, std::size_t n_pos, std::size_t n_neg,
                                RngSeed seed, unsigned threads) {
    if (n_pos * 10 > train_graph.edge_count())
        throw InvalidArgument("build_training_rows: n_pos=" + std::to_string(n_pos) +
                              " exceeds edge_count/10 (edge_count=" +
                              std::to_string(train_graph.edge_count()) + ")");
    Rng rng = seed.make_rng();
    auto edges = train_graph.edges();
    for (std::size_t i = 0; i < n_pos; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, edges.size() - 1);
        std::swap(edges[i], edges[pick(rng)]);
    }
    std::vector<Edge> pos(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(n_pos));
    auto neg = sample_fake_pairs(train_graph, n_neg, rng);

    auto pos_rows = extract_features_batch(train_graph, pos, /*hide_edge=*/true, threads);
    auto neg_rows = extract_features_batch(train_graph, neg, /*hide_edge=*/false, threads);

    std::vector<std::size_t> order(n_pos + n_neg);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    TrainingSet set;
    set.rows.reserve(order.size());
    set.labels.reserve(order.size());
    for (std::size_t slot : order) {
        bool const positive = slot < n_pos;
        set.rows.push_back(positive ? pos_rows[slot] : neg_rows[slot - n_pos]);
        set.labels.push_back(positive ? 1 : 0);
    }
    return set;
}

void save_features_csv(TrainingSet const& set, std::filesystem::path const& path) {
    std::string text;
    for (auto name : kFeatureNames) {
        text += name;
        text += ',';
    }
    text += "label\n";
    for (std::size_t r = 0; r < set.rows.size(); ++r) {
        for (double x : set.rows[r]) {
            text += io::format_double(x);
            text += ',';
        }
        text += set.labels[r] ? "1\n" : "0\n";
    }
    io::write_text(path, text);
}

}  // namespace deanon
