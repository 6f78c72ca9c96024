#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace deanon {

/// Opaque node label. Ordering is only used for deterministic tie-breaking.
using NodeId = std::uint64_t;

struct Edge {
    NodeId source;
    NodeId target;

    friend auto operator<=>(Edge const&, Edge const&) = default;
};

class NodeMapping;

/// Immutable simple directed graph (no self-loops, no parallel edges).
///
/// Nodes are stored sorted by id; adjacency is kept in two CSR arrays (out and
/// in) whose rows are sorted by neighbor id. Queries are read-only and may be
/// issued concurrently. Use GraphBuilder to construct one.
class DirectedGraph {
public:
    DirectedGraph() = default;

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return out_nbrs_.size(); }

    std::span<NodeId const> nodes() const { return ids_; }
    bool contains(NodeId u) const { return find(u).has_value(); }

    /// Dense position of u in nodes(); O(1) when ids are exactly 0..n-1.
    std::optional<std::size_t> find(NodeId u) const;
    /// As find(), but throws UnknownNodeError.
    std::size_t index_of(NodeId u) const;
    NodeId id_at(std::size_t i) const { return ids_[i]; }

    std::span<NodeId const> out_neighbors(NodeId u) const { return out_at(index_of(u)); }
    std::span<NodeId const> in_neighbors(NodeId u) const { return in_at(index_of(u)); }
    std::span<NodeId const> out_at(std::size_t i) const {
        return {out_nbrs_.data() + out_off_[i], out_nbrs_.data() + out_off_[i + 1]};
    }
    std::span<NodeId const> in_at(std::size_t i) const {
        return {in_nbrs_.data() + in_off_[i], in_nbrs_.data() + in_off_[i + 1]};
    }

    std::size_t out_degree(NodeId u) const { return out_at(index_of(u)).size(); }
    std::size_t in_degree(NodeId u) const { return in_at(index_of(u)).size(); }

    /// False (not an error) when either endpoint is unknown.
    bool has_edge(NodeId u, NodeId v) const;

    /// All edges sorted by (source, target).
    std::vector<Edge> edges() const;

    friend bool operator==(DirectedGraph const& a, DirectedGraph const& b) {
        return a.ids_ == b.ids_ && a.out_off_ == b.out_off_ && a.out_nbrs_ == b.out_nbrs_;
    }

private:
    friend class GraphBuilder;

    std::vector<NodeId> ids_;
    bool dense_ = true;
    std::vector<std::size_t> out_off_{0};
    std::vector<NodeId> out_nbrs_;
    std::vector<std::size_t> in_off_{0};
    std::vector<NodeId> in_nbrs_;
};

/// Accumulates nodes and edges, then freezes them into a DirectedGraph.
/// Duplicate edges are collapsed; self-loops throw SelfLoopError.
class GraphBuilder {
public:
    GraphBuilder& add_node(NodeId u);
    GraphBuilder& add_edge(NodeId u, NodeId v);

    void reserve_edges(std::size_t n) { edges_.reserve(n); }

    DirectedGraph build() const;

private:
    std::vector<NodeId> nodes_;
    std::vector<Edge> edges_;
};

/// k nodes by descending in-degree, ties by ascending id.
std::vector<NodeId> top_k_in_degree(DirectedGraph const& g, std::size_t k);

/// Relabels g through perm, which must be defined on exactly nodes(g).
DirectedGraph apply_permutation(DirectedGraph const& g, NodeMapping const& perm);

/// Subgraph induced by `keep` (ids not in g are rejected).
DirectedGraph induced_subgraph(DirectedGraph const& g, std::span<NodeId const> keep);

/// Reads `u,v` lines with an optional `source,target` header. `extra_nodes`
/// are added as (possibly isolated) nodes since the format cannot carry them.
DirectedGraph load_edge_list(std::filesystem::path const& path,
                             std::span<NodeId const> extra_nodes = {});

/// Writes edges sorted by (u,v), no header.
void save_edge_list(DirectedGraph const& g, std::filesystem::path const& path);

}  // namespace deanon
