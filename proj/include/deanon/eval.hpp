#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "deanon/contest.hpp"
#include "deanon/features.hpp"
#include "deanon/graph.hpp"
#include "deanon/mapping.hpp"

namespace deanon {

/// How de-anonymized lookups override the classifier.
struct CombineConfig {
    double p_edge = 0.99;     ///< covered pair that is an edge of the attacker crawl
    double p_nonedge = 0.01;  ///< covered pair that is not
    bool augment = false;     ///< add covered test pairs to the classifier's training rows
};

struct EvalReport {
    double auc = 0.0;
    double coverage = 0.0;           ///< test pairs with both endpoints mapped
    double mapping_precision = 1.0;  ///< mapped nodes whose image is their true counterpart
    double deanon_label_accuracy = 1.0;  ///< covered pairs whose lookup equals the hidden label
};

/// Mann-Whitney AUC: fraction of (positive, negative) pairs ranked
/// correctly, ties counting one half. Sort-based, O(n log n), exact.
double auc(std::span<int const> labels, std::span<double const> scores);

/// True if both endpoints of `pair` are in the mapping's domain.
bool is_covered(NodeMapping const& mapping, Edge const& pair);

/// Attacker-crawl edge status of a covered pair.
bool lookup_edge(NodeMapping const& mapping, DirectedGraph const& attacker_graph, Edge const& pair);

std::vector<double> combine_predictions(std::span<Edge const> test_pairs, NodeMapping const& mapping,
                                        DirectedGraph const& attacker_graph,
                                        std::span<double const> clf_probs, CombineConfig const& config);

/// Appends one row per covered test pair: features from the contest training
/// graph, label from the attacker-crawl lookup.
TrainingSet augment_training(TrainingSet const& base, std::span<Edge const> test_pairs,
                             NodeMapping const& mapping, DirectedGraph const& attacker_graph,
                             DirectedGraph const& contest_graph, unsigned threads = 1);

/// truth_contest: contest id -> ground-truth id; truth_attacker: attacker
/// id -> ground-truth id. Precision is 1 on an empty mapping and label
/// accuracy is 1 when no pair is covered.
EvalReport evaluate(ContestDataset const& dataset, NodeMapping const& mapping,
                    NodeMapping const& truth_contest, NodeMapping const& truth_attacker,
                    DirectedGraph const& attacker_graph, std::span<double const> probs);

using ReportFields = std::map<std::string, std::string>;

void add_report_fields(ReportFields& fields, EvalReport const& report);

/// `key=value` per line, keys sorted.
void write_report(ReportFields const& fields, std::filesystem::path const& path);
ReportFields read_report(std::filesystem::path const& path);

}  // namespace deanon
