#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "deanon/graph.hpp"
#include "deanon/rng.hpp"

namespace deanon {

/// What contestants see: the training graph and the unlabeled test pairs.
struct ContestView {
    DirectedGraph train_graph;
    std::vector<Edge> test_pairs;
};

/// A link-prediction contest. Attack code only ever receives `view`; the
/// labels (1 = real edge, 0 = fake) stay with the organizer.
struct ContestDataset {
    ContestView view;
    std::vector<int> hidden_labels;
};

/// Draws `count` distinct non-edges of g. Sources follow the out-endpoint
/// distribution of g's edges and targets the in-endpoint distribution;
/// self-loops, edges of g and pairs in `exclude` are rejected. Throws
/// SamplingError when the rejection budget runs out.
std::vector<Edge> sample_fake_pairs(DirectedGraph const& g, std::size_t count, Rng& rng,
                                    std::span<Edge const> exclude = {});

/// Removes n_test uniformly chosen edges of g as positives, adds as many
/// endpoint-matched fakes and shuffles them together.
ContestDataset build_contest(DirectedGraph const& g, std::size_t n_test, RngSeed seed);

/// Contest AUC of a submission against the hidden labels.
double score_submission(ContestDataset const& dataset, std::span<double const> probs);

void save_pairs(std::span<Edge const> pairs, std::filesystem::path const& path);
std::vector<Edge> load_pairs(std::filesystem::path const& path);

void save_labels(std::span<int const> labels, std::filesystem::path const& path);
std::vector<int> load_labels(std::filesystem::path const& path);

/// One probability per line aligned with test_pairs. Throws InvalidArgument
/// on a length mismatch or a value outside [0,1].
void write_predictions(std::span<Edge const> test_pairs, std::span<double const> probs,
                       std::filesystem::path const& path);
std::vector<double> read_predictions(std::filesystem::path const& path);

}  // namespace deanon
