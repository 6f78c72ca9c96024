#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "deanon/graph.hpp"

namespace deanon {

/// Partial injective map between the node sets of two graphs.
class NodeMapping {
public:
    using const_iterator = std::map<NodeId, NodeId>::const_iterator;

    NodeMapping() = default;

    /// Throws InvalidArgument if a source repeats or two sources share a target.
    static NodeMapping from_pairs(std::vector<std::pair<NodeId, NodeId>> const& pairs);

    /// Throws InvalidArgument if `from` is already mapped or `to` already claimed.
    void insert(NodeId from, NodeId to);
    /// Returns false instead of throwing.
    bool try_insert(NodeId from, NodeId to);

    bool contains(NodeId from) const { return forward_.contains(from); }
    bool claimed(NodeId to) const { return reverse_.contains(to); }

    std::optional<NodeId> image(NodeId from) const;
    std::optional<NodeId> preimage(NodeId to) const;
    /// Throws UnknownNodeError when unmapped.
    NodeId at(NodeId from) const;

    std::size_t size() const { return forward_.size(); }
    bool empty() const { return forward_.empty(); }

    const_iterator begin() const { return forward_.begin(); }
    const_iterator end() const { return forward_.end(); }

    NodeMapping inverse() const;

    /// True if every mapping in `sub` is also in this one.
    bool extends(NodeMapping const& sub) const;

    friend bool operator==(NodeMapping const& a, NodeMapping const& b) {
        return a.forward_ == b.forward_;
    }

private:
    std::map<NodeId, NodeId> forward_;
    std::unordered_map<NodeId, NodeId> reverse_;
};

/// `from,to` per line, sorted by `from`.
void save_mapping(NodeMapping const& m, std::filesystem::path const& path);
NodeMapping load_mapping(std::filesystem::path const& path);

}  // namespace deanon
