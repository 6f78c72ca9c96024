#include "deanon/contest.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "deanon/error.hpp"
#include "deanon/eval.hpp"
#include "deanon/io.hpp"

namespace deanon {

std::vector<Edge> sample_fake_pairs(DirectedGraph const& g, std::size_t count, Rng& rng,
                                    std::span<Edge const> exclude) {
    std::vector<Edge> out;
    if (count == 0) return out;
    if (g.edge_count() == 0) throw SamplingError("cannot sample fake pairs from an edgeless graph");
    auto const edges = g.edges();
    std::set<Edge> taken(exclude.begin(), exclude.end());
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    std::size_t const budget = 1000 * count + 100000;
    for (std::size_t attempt = 0; attempt < budget && out.size() < count; ++attempt) {
        NodeId const u = edges[pick(rng)].source;
        NodeId const v = edges[pick(rng)].target;
        if (u == v || g.has_edge(u, v)) continue;
        if (!taken.insert({u, v}).second) continue;
        out.push_back({u, v});
    }
    if (out.size() < count)
        throw SamplingError("graph too dense: found only " + std::to_string(out.size()) + " of " +
                            std::to_string(count) + " fake pairs");
    return out;
}

ContestDataset build_contest(DirectedGraph const& g, std::size_t n_test, RngSeed seed) {
    if (n_test < 1 || n_test * 10 > g.edge_count())
        throw InvalidArgument("build_contest: n_test=" + std::to_string(n_test) +
                              " outside [1, edge_count/10] with edge_count=" +
                              std::to_string(g.edge_count()));
    Rng rng = seed.make_rng();
    auto edges = g.edges();

    // Partial Fisher-Yates: the first n_test slots become the positives.
    for (std::size_t i = 0; i < n_test; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, edges.size() - 1);
        std::swap(edges[i], edges[pick(rng)]);
    }
    std::vector<Edge> positives(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(n_test));
    auto fakes = sample_fake_pairs(g, n_test, rng);

    GraphBuilder b;
    for (NodeId u : g.nodes()) b.add_node(u);
    b.reserve_edges(edges.size() - n_test);
    for (std::size_t i = n_test; i < edges.size(); ++i) b.add_edge(edges[i].source, edges[i].target);

    std::vector<std::size_t> order(2 * n_test);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    ContestDataset ds;
    ds.view.train_graph = b.build();
    ds.view.test_pairs.reserve(order.size());
    ds.hidden_labels.reserve(order.size());
    for (std::size_t slot : order) {
        bool const real = slot < n_test;
        ds.view.test_pairs.push_back(real ? positives[slot] : fakes[slot - n_test]);
        ds.hidden_labels.push_back(real ? 1 : 0);
    }
    return ds;
}

double score_submission(ContestDataset const& dataset, std::span<double const> probs) {
    if (probs.size() != dataset.view.test_pairs.size())
        throw InvalidArgument("submission has " + std::to_string(probs.size()) +
                              " predictions for " + std::to_string(dataset.view.test_pairs.size()) +
                              " test pairs");
    return auc(dataset.hidden_labels, probs);
}

void save_pairs(std::span<Edge const> pairs, std::filesystem::path const& path) {
    std::string text;
    for (auto const& e : pairs) {
        text += std::to_string(e.source);
        text += ',';
        text += std::to_string(e.target);
        text += '\n';
    }
    io::write_text(path, text);
}

std::vector<Edge> load_pairs(std::filesystem::path const& path) {
    auto lines = io::read_lines(path);
    std::vector<Edge> pairs;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (line.empty() && i + 1 == lines.size()) break;
        auto comma = line.find(',');
        std::uint64_t u = 0, v = 0;
        if (comma == std::string_view::npos || !io::parse_u64(line.substr(0, comma), u) ||
            !io::parse_u64(line.substr(comma + 1), v))
            throw ParseError(path.string(), i + 1, "expected 'u,v', got '" + lines[i] + "'");
        pairs.push_back({u, v});
    }
    return pairs;
}

void save_labels(std::span<int const> labels, std::filesystem::path const& path) {
    std::string text;
    text.reserve(labels.size() * 2);
    for (int y : labels) {
        if (y != 0 && y != 1) throw InvalidArgument("labels must be 0 or 1");
        text += y ? "1\n" : "0\n";
    }
    io::write_text(path, text);
}

std::vector<int> load_labels(std::filesystem::path const& path) {
    auto lines = io::read_lines(path);
    std::vector<int> labels;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty() && i + 1 == lines.size()) break;
        if (lines[i] != "0" && lines[i] != "1")
            throw ParseError(path.string(), i + 1, "expected 0 or 1, got '" + lines[i] + "'");
        labels.push_back(lines[i] == "1");
    }
    return labels;
}

void write_predictions(std::span<Edge const> test_pairs, std::span<double const> probs,
                       std::filesystem::path const& path) {
    if (probs.size() != test_pairs.size())
        throw InvalidArgument("predictions: " + std::to_string(probs.size()) + " values for " +
                              std::to_string(test_pairs.size()) + " test pairs");
    std::string text;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] >= 0.0 && probs[i] <= 1.0))
            throw InvalidArgument("prediction " + std::to_string(i) + " outside [0,1]: " +
                                  io::format_double(probs[i]));
        text += io::format_double(probs[i]);
        text += '\n';
    }
    io::write_text(path, text);
}

std::vector<double> read_predictions(std::filesystem::path const& path) {
    auto lines = io::read_lines(path);
    std::vector<double> probs;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty() && i + 1 == lines.size()) break;
        double p = 0;
        if (!io::parse_double(lines[i], p) || !(p >= 0.0 && p <= 1.0))
            throw ParseError(path.string(), i + 1, "expected probability, got '" + lines[i] + "'");
        probs.push_back(p);
    }
    return probs;
}

}  // namespace deanon
