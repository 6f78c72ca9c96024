#include "deanon/eval.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>

#include "deanon/error.hpp"
#include "deanon/io.hpp"

namespace deanon {

double auc(std::span<int const> labels, std::span<double const> scores) {
    if (labels.size() != scores.size())
        throw InvalidArgument("auc: " + std::to_string(labels.size()) + " labels vs " +
                              std::to_string(scores.size()) + " scores");
    std::size_t const n = labels.size();
    std::uint64_t n_pos = 0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw InvalidArgument("auc: labels must be 0 or 1");
        n_pos += static_cast<std::uint64_t>(y);
    }
    std::uint64_t const n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw InvalidArgument("auc: both classes must be present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Twice the rank sum of the positives, with tied blocks sharing the
    // average rank; doubling keeps everything integral.
    std::uint64_t rank_sum2 = 0;
    for (std::size_t lo = 0; lo < n;) {
        std::size_t hi = lo + 1;
        while (hi < n && scores[order[hi]] == scores[order[lo]]) ++hi;
        std::uint64_t const rank2 = lo + hi + 1;  // 2 * mean of ranks lo+1..hi
        for (std::size_t i = lo; i < hi; ++i)
            if (labels[order[i]]) rank_sum2 += rank2;
        lo = hi;
    }
    std::uint64_t const u2 = rank_sum2 - n_pos * (n_pos + 1);
    return static_cast<double>(u2) / static_cast<double>(2 * n_pos * n_neg);
}

bool is_covered(NodeMapping const& mapping, Edge const& pair) {
    return mapping.contains(pair.source) && mapping.contains(pair.target);
}

bool lookup_edge(NodeMapping const& mapping, DirectedGraph const& attacker_graph, Edge const& pair) {
    return attacker_graph.has_edge(mapping.at(pair.source), mapping.at(pair.target));
}

std::vector<double> combine_predictions(std::span<Edge const> test_pairs, NodeMapping const& mapping,
                                        DirectedGraph const& attacker_graph,
                                        std::span<double const> clf_probs, CombineConfig const& config) {
    if (clf_probs.size() != test_pairs.size())
        throw InvalidArgument("combine_predictions: " + std::to_string(clf_probs.size()) +
                              " probabilities for " + std::to_string(test_pairs.size()) + " pairs");
    if (!(config.p_nonedge >= 0.0 && config.p_nonedge < config.p_edge && config.p_edge <= 1.0))
        throw InvalidArgument("combine_predictions: need 0 <= p_nonedge < p_edge <= 1");
    std::vector<double> out(clf_probs.begin(), clf_probs.end());
    for (std::size_t i = 0; i < test_pairs.size(); ++i) {
        if (!(clf_probs[i] >= 0.0 && clf_probs[i] <= 1.0))
            throw InvalidArgument("combine_predictions: probability " + std::to_string(i) + " outside [0,1]");
        if (is_covered(mapping, test_pairs[i]))
            out[i] = lookup_edge(mapping, attacker_graph, test_pairs[i]) ? config.p_edge : config.p_nonedge;
    }
    return out;
}

TrainingSet augment_training(TrainingSet const& base, std::span<Edge const> test_pairs,
                             NodeMapping const& mapping, DirectedGraph const& attacker_graph,
                             DirectedGraph const& contest_graph, unsigned threads) {
    std::vector<Edge> covered;
    std::vector<int> labels;
    for (auto const& p : test_pairs) {
        if (!is_covered(mapping, p)) continue;
        covered.push_back(p);
        labels.push_back(lookup_edge(mapping, attacker_graph, p) ? 1 : 0);
    }
    TrainingSet out = base;
    auto rows = extract_features_batch(contest_graph, covered, /*hide_edge=*/false, threads);
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    out.labels.insert(out.labels.end(), labels.begin(), labels.end());
    return out;
}

EvalReport evaluate(ContestDataset const& dataset, NodeMapping const& mapping,
                    NodeMapping const& truth_contest, NodeMapping const& truth_attacker,
                    DirectedGraph const& attacker_graph, std::span<double const> probs) {
    auto const& pairs = dataset.view.test_pairs;
    if (dataset.hidden_labels.size() != pairs.size())
        throw InvalidArgument("evaluate: labels and test pairs are misaligned");

    EvalReport r;
    r.auc = score_submission(dataset, probs);

    std::size_t correct = 0;
    for (auto const& [u, v] : mapping) {
        auto const t_u = truth_contest.image(u);
        auto const t_v = truth_attacker.image(v);
        if (!t_u || !t_v)
            throw InvalidArgument("evaluate: truth mappings do not cover mapped pair " +
                                  std::to_string(u) + "->" + std::to_string(v));
        if (*t_u == *t_v) ++correct;
    }
    r.mapping_precision =
        mapping.empty() ? 1.0 : static_cast<double>(correct) / static_cast<double>(mapping.size());

    std::size_t covered = 0, agree = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!is_covered(mapping, pairs[i])) continue;
        ++covered;
        if (lookup_edge(mapping, attacker_graph, pairs[i]) == (dataset.hidden_labels[i] == 1)) ++agree;
    }
    r.coverage = pairs.empty() ? 0.0 : static_cast<double>(covered) / static_cast<double>(pairs.size());
    r.deanon_label_accuracy =
        covered == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(covered);
    return r;
}

void add_report_fields(ReportFields& fields, EvalReport const& report) {
    fields["auc"] = io::format_double(report.auc);
    fields["coverage"] = io::format_double(report.coverage);
    fields["mapping_precision"] = io::format_double(report.mapping_precision);
    fields["deanon_label_accuracy"] = io::format_double(report.deanon_label_accuracy);
}

void write_report(ReportFields const& fields, std::filesystem::path const& path) {
    std::string text;
    for (auto const& [k, v] : fields) {
        if (k.find('=') != std::string::npos || k.find('\n') != std::string::npos ||
            v.find('\n') != std::string::npos)
            throw InvalidArgument("report: invalid key or value for '" + k + "'");
        text += k + "=" + v + "\n";
    }
    io::write_text(path, text);
}

ReportFields read_report(std::filesystem::path const& path) {
    ReportFields fields;
    auto lines = io::read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto eq = lines[i].find('=');
        if (eq == std::string::npos) throw ParseError(path.string(), i + 1, "expected key=value");
        fields[lines[i].substr(0, eq)] = lines[i].substr(eq + 1);
    }
    return fields;
}

}  // namespace deanon
