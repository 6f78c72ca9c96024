#include "deanon/mapping.hpp"

#include <string>

#include "deanon/error.hpp"
#include "deanon/io.hpp"

namespace deanon {

NodeMapping NodeMapping::from_pairs(std::vector<std::pair<NodeId, NodeId>> const& pairs) {
    NodeMapping m;
    for (auto const& [a, b] : pairs) m.insert(a, b);
    return m;
}

bool NodeMapping::try_insert(NodeId from, NodeId to) {
    if (forward_.contains(from) || reverse_.contains(to)) return false;
    forward_.emplace(from, to);
    reverse_.emplace(to, from);
    return true;
}

void NodeMapping::insert(NodeId from, NodeId to) {
    if (forward_.contains(from))
        throw InvalidArgument("mapping: source " + std::to_string(from) + " already mapped");
    if (reverse_.contains(to))
        throw InvalidArgument("mapping: target " + std::to_string(to) + " already claimed");
    forward_.emplace(from, to);
    reverse_.emplace(to, from);
}

std::optional<NodeId> NodeMapping::image(NodeId from) const {
    auto it = forward_.find(from);
    if (it == forward_.end()) return std::nullopt;
    return it->second;
}

std::optional<NodeId> NodeMapping::preimage(NodeId to) const {
    auto it = reverse_.find(to);
    if (it == reverse_.end()) return std::nullopt;
    return it->second;
}

NodeId NodeMapping::at(NodeId from) const {
    auto it = forward_.find(from);
    if (it == forward_.end()) throw UnknownNodeError("node " + std::to_string(from) + " is unmapped");
    return it->second;
}

NodeMapping NodeMapping::inverse() const {
    NodeMapping inv;
    for (auto const& [a, b] : forward_) inv.insert(b, a);
    return inv;
}

bool NodeMapping::extends(NodeMapping const& sub) const {
    for (auto const& [a, b] : sub) {
        auto img = image(a);
        if (!img || *img != b) return false;
    }
    return true;
}

void save_mapping(NodeMapping const& m, std::filesystem::path const& path) {
    std::string text;
    for (auto const& [a, b] : m) {
        text += std::to_string(a);
        text += ',';
        text += std::to_string(b);
        text += '\n';
    }
    io::write_text(path, text);
}

NodeMapping load_mapping(std::filesystem::path const& path) {
    auto lines = io::read_lines(path);
    NodeMapping m;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (line.empty() && i + 1 == lines.size()) break;
        auto comma = line.find(',');
        std::uint64_t a = 0, b = 0;
        if (comma == std::string_view::npos || !io::parse_u64(line.substr(0, comma), a) ||
            !io::parse_u64(line.substr(comma + 1), b))
            throw ParseError(path.string(), i + 1, "expected 'a,b', got '" + lines[i] + "'");
        if (!m.try_insert(a, b))
            throw ParseError(path.string(), i + 1, "mapping is not injective at '" + lines[i] + "'");
    }
    return m;
}

}  // namespace deanon
