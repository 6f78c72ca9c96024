#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "deanon/features.hpp"
#include "deanon/rng.hpp"

namespace deanon {

/// Dense row-major matrix of feature values.
class FeatureMatrix {
public:
    explicit FeatureMatrix(std::size_t cols) : cols_(cols) {}

    static FeatureMatrix from_rows(std::span<FeatureVector const> rows);

    void add_row(std::span<double const> row);

    std::size_t rows() const { return cols_ == 0 ? 0 : values_.size() / cols_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    std::span<double const> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

private:
    std::size_t cols_;
    std::vector<double> values_;
};

struct ForestConfig {
    std::size_t n_trees = 100;
    std::size_t max_depth = 8;
    std::size_t min_leaf = 20;
    std::size_t features_per_split = 0;  ///< 0: ceil(sqrt(feature count))
    RngSeed seed{};
    unsigned threads = 1;
};

/// Binary tree; internal nodes send x[feature] <= threshold to the left.
class DecisionTree {
public:
    struct Node {
        std::int32_t feature = -1;  ///< -1 for a leaf
        double threshold = 0.0;
        std::uint32_t left = 0;
        std::uint32_t right = 0;
        double value = 0.0;  ///< positive-class fraction at a leaf
    };

    DecisionTree() = default;
    /// Node 0 is the root; children must follow their parent.
    static DecisionTree from_nodes(std::vector<Node> nodes);

    double predict(std::span<double const> x) const;
    std::size_t depth() const;
    std::vector<Node> const& nodes() const { return nodes_; }

private:
    friend class TreeBuilder;
    std::vector<Node> nodes_;
};

struct ForestModel {
    std::size_t n_features = 0;
    std::vector<DecisionTree> trees;
};

struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double decrease = 0.0;  ///< weighted Gini decrease n*G - nL*GL - nR*GR
};

/// Best Gini split of `samples` (row indices, repeats allowed) over the given
/// features, thresholds at midpoints between consecutive distinct values and
/// both children holding at least min_leaf samples. Ties keep the earlier
/// feature in `features`, then the smaller threshold. Empty if no split has
/// a positive decrease.
std::optional<Split> find_best_split(FeatureMatrix const& x, std::span<int const> y,
                                     std::span<std::size_t const> samples,
                                     std::span<std::size_t const> features, std::size_t min_leaf);

/// Bagged Gini trees; deterministic in config.seed regardless of threads.
ForestModel train(FeatureMatrix const& x, std::span<int const> y, ForestConfig const& config);
ForestModel train(TrainingSet const& set, ForestConfig const& config);

/// Mean leaf fraction over the trees.
double predict_proba(ForestModel const& model, std::span<double const> x);
std::vector<double> predict_proba(ForestModel const& model, FeatureMatrix const& x);

}  // namespace deanon
