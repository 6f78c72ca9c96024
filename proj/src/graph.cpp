#include "deanon/graph.hpp"

#include <algorithm>
#include <string>

#include "deanon/error.hpp"
#include "deanon/io.hpp"
#include "deanon/mapping.hpp"

namespace deanon {

std::optional<std::size_t> DirectedGraph::find(NodeId u) const {
    if (dense_) {
        if (u < ids_.size()) return static_cast<std::size_t>(u);
        return std::nullopt;
    }
    auto it = std::lower_bound(ids_.begin(), ids_.end(), u);
    if (it == ids_.end() || *it != u) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t DirectedGraph::index_of(NodeId u) const {
    auto i = find(u);
    if (!i) throw UnknownNodeError("unknown node " + std::to_string(u));
    return *i;
}

bool DirectedGraph::has_edge(NodeId u, NodeId v) const {
    auto i = find(u);
    if (!i) return false;
    auto row = out_at(*i);
    return std::binary_search(row.begin(), row.end(), v);
}

std::vector<Edge> DirectedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::size_t i = 0; i < ids_.size(); ++i)
        for (NodeId v : out_at(i)) out.push_back({ids_[i], v});
    return out;
}

GraphBuilder& GraphBuilder::add_node(NodeId u) {
    nodes_.push_back(u);
    return *this;
}

GraphBuilder& GraphBuilder::add_edge(NodeId u, NodeId v) {
    if (u == v) throw SelfLoopError("self-loop on node " + std::to_string(u));
    edges_.push_back({u, v});
    return *this;
}

DirectedGraph GraphBuilder::build() const {
    DirectedGraph g;

    std::vector<NodeId> ids = nodes_;
    ids.reserve(nodes_.size() + 2 * edges_.size());
    for (auto const& e : edges_) {
        ids.push_back(e.source);
        ids.push_back(e.target);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    g.ids_ = std::move(ids);
    g.dense_ = g.ids_.empty() || g.ids_.back() + 1 == g.ids_.size();

    std::vector<Edge> edges = edges_;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::size_t const n = g.ids_.size();
    g.out_off_.assign(n + 1, 0);
    g.in_off_.assign(n + 1, 0);
    std::vector<std::size_t> src(edges.size()), dst(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        src[e] = *g.find(edges[e].source);
        dst[e] = *g.find(edges[e].target);
        ++g.out_off_[src[e] + 1];
        ++g.in_off_[dst[e] + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        g.out_off_[i + 1] += g.out_off_[i];
        g.in_off_[i + 1] += g.in_off_[i];
    }
    g.out_nbrs_.resize(edges.size());
    g.in_nbrs_.resize(edges.size());
    std::vector<std::size_t> out_pos(g.out_off_.begin(), g.out_off_.end() - 1);
    std::vector<std::size_t> in_pos(g.in_off_.begin(), g.in_off_.end() - 1);
    // Edges are sorted by (source, target), so both fills produce sorted rows.
    for (std::size_t e = 0; e < edges.size(); ++e) {
        g.out_nbrs_[out_pos[src[e]]++] = edges[e].target;
        g.in_nbrs_[in_pos[dst[e]]++] = edges[e].source;
    }
    return g;
}

std::vector<NodeId> top_k_in_degree(DirectedGraph const& g, std::size_t k) {
    if (k < 1 || k > g.node_count())
        throw InvalidArgument("top_k_in_degree: k=" + std::to_string(k) + " outside [1, " +
                              std::to_string(g.node_count()) + "]");
    std::vector<std::size_t> order(g.node_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // ids are sorted, so index order is id order.
    auto by_degree = [&](std::size_t a, std::size_t b) {
        auto da = g.in_at(a).size(), db = g.in_at(b).size();
        return da != db ? da > db : a < b;
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      by_degree);
    std::vector<NodeId> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = g.id_at(order[i]);
    return out;
}

DirectedGraph apply_permutation(DirectedGraph const& g, NodeMapping const& perm) {
    if (perm.size() != g.node_count())
        throw InvalidArgument("apply_permutation: mapping size " + std::to_string(perm.size()) +
                              " != node count " + std::to_string(g.node_count()));
    GraphBuilder b;
    for (NodeId u : g.nodes()) {
        auto image = perm.image(u);
        if (!image)
            throw InvalidArgument("apply_permutation: node " + std::to_string(u) + " unmapped");
        b.add_node(*image);
    }
    b.reserve_edges(g.edge_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        NodeId pu = perm.at(g.id_at(i));
        for (NodeId v : g.out_at(i)) b.add_edge(pu, perm.at(v));
    }
    return b.build();
}

DirectedGraph induced_subgraph(DirectedGraph const& g, std::span<NodeId const> keep) {
    std::vector<char> kept(g.node_count(), 0);
    GraphBuilder b;
    for (NodeId u : keep) {
        kept[g.index_of(u)] = 1;
        b.add_node(u);
    }
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (!kept[i]) continue;
        for (NodeId v : g.out_at(i))
            if (kept[g.index_of(v)]) b.add_edge(g.id_at(i), v);
    }
    return b.build();
}

DirectedGraph load_edge_list(std::filesystem::path const& path,
                             std::span<NodeId const> extra_nodes) {
    auto lines = io::read_lines(path);
    GraphBuilder b;
    for (NodeId u : extra_nodes) b.add_node(u);
    b.reserve_edges(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        std::size_t const lineno = i + 1;
        if (line.empty() && i + 1 == lines.size()) break;
        if (i == 0 && line == "source,target") continue;
        auto comma = line.find(',');
        std::uint64_t u = 0, v = 0;
        if (comma == std::string_view::npos || !io::parse_u64(line.substr(0, comma), u) ||
            !io::parse_u64(line.substr(comma + 1), v))
            throw ParseError(path.string(), lineno, "expected 'u,v', got '" + lines[i] + "'");
        if (u == v) throw ParseError(path.string(), lineno, "self-loop " + lines[i]);
        b.add_edge(u, v);
    }
    return b.build();
}

void save_edge_list(DirectedGraph const& g, std::filesystem::path const& path) {
    std::string text;
    text.reserve(g.edge_count() * 12);
    for (auto const& e : g.edges()) {
        text += std::to_string(e.source);
        text += ',';
        text += std::to_string(e.target);
        text += '\n';
    }
    io::write_text(path, text);
}

}  // namespace deanon
