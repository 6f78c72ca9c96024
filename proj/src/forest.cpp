#include "deanon/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "deanon/error.hpp"
#include "deanon/parallel.hpp"

namespace deanon {

FeatureMatrix FeatureMatrix::from_rows(std::span<FeatureVector const> rows) {
    FeatureMatrix m(kFeatureCount);
    m.values_.reserve(rows.size() * kFeatureCount);
    for (auto const& r : rows) m.add_row(r);
    return m;
}

void FeatureMatrix::add_row(std::span<double const> row) {
    if (row.size() != cols_)
        throw InvalidArgument("row has " + std::to_string(row.size()) + " values, expected " +
                              std::to_string(cols_));
    values_.insert(values_.end(), row.begin(), row.end());
}

DecisionTree DecisionTree::from_nodes(std::vector<Node> nodes) {
    if (nodes.empty()) throw InvalidArgument("decision tree needs at least one node");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto const& n = nodes[i];
        if (n.feature >= 0 && (n.left <= i || n.right <= i || n.left >= nodes.size() ||
                               n.right >= nodes.size()))
            throw InvalidArgument("decision tree child index out of order");
        if (n.feature < 0 && !(n.value >= 0.0 && n.value <= 1.0))
            throw InvalidArgument("leaf value outside [0,1]");
    }
    DecisionTree t;
    t.nodes_ = std::move(nodes);
    return t;
}

double DecisionTree::predict(std::span<double const> x) const {
    std::size_t i = 0;
    while (nodes_[i].feature >= 0) {
        auto const& n = nodes_[i];
        i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes_[i].value;
}

std::size_t DecisionTree::depth() const {
    std::vector<std::size_t> d(nodes_.size(), 0);
    std::size_t deepest = 0;
    // Children are always appended after their parent.
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        deepest = std::max(deepest, d[i]);
        if (nodes_[i].feature >= 0) d[nodes_[i].left] = d[nodes_[i].right] = d[i] + 1;
    }
    return deepest;
}

namespace {

double weighted_gini(double pos, double total) {
    if (total <= 0.0) return 0.0;
    double const neg = total - pos;
    return total - (pos * pos + neg * neg) / total;
}

}  // namespace

std::optional<Split> find_best_split(FeatureMatrix const& x, std::span<int const> y,
                                     std::span<std::size_t const> samples,
                                     std::span<std::size_t const> features, std::size_t min_leaf) {
    std::size_t const n = samples.size();
    if (n < 2 * std::max<std::size_t>(min_leaf, 1)) return std::nullopt;
    double total_pos = 0;
    for (std::size_t s : samples) total_pos += y[s];
    double const parent = weighted_gini(total_pos, static_cast<double>(n));

    std::optional<Split> best;
    std::vector<std::size_t> sorted(samples.begin(), samples.end());
    for (std::size_t f : features) {
        std::sort(sorted.begin(), sorted.end(),
                  [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
        double left_pos = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left_pos += y[sorted[i]];
            double const lo = x(sorted[i], f), hi = x(sorted[i + 1], f);
            if (lo == hi) continue;
            std::size_t const n_left = i + 1;
            if (n_left < min_leaf || n - n_left < min_leaf) continue;
            double const decrease = parent - weighted_gini(left_pos, static_cast<double>(n_left)) -
                                    weighted_gini(total_pos - left_pos, static_cast<double>(n - n_left));
            // Decreases within rounding of each other count as ties.
            if (decrease > 1e-12 && (!best || decrease > best->decrease + 1e-12))
                best = Split{f, lo + (hi - lo) / 2, decrease};
        }
    }
    return best;
}

class TreeBuilder {
public:
    TreeBuilder(FeatureMatrix const& x, std::span<int const> y, ForestConfig const& cfg,
                std::size_t per_split, Rng& rng)
        : x_(x), y_(y), cfg_(cfg), per_split_(per_split), rng_(rng), all_features_(x.cols()) {
        std::iota(all_features_.begin(), all_features_.end(), std::size_t{0});
    }

    DecisionTree build(std::vector<std::size_t> samples) {
        tree_.nodes_.clear();
        grow(std::move(samples), 0);
        return std::move(tree_);
    }

private:
    std::uint32_t grow(std::vector<std::size_t> samples, std::size_t depth) {
        auto const id = static_cast<std::uint32_t>(tree_.nodes_.size());
        tree_.nodes_.emplace_back();
        std::size_t pos = 0;
        for (std::size_t s : samples) pos += static_cast<std::size_t>(y_[s]);
        tree_.nodes_[id].value = static_cast<double>(pos) / static_cast<double>(samples.size());
        if (depth >= cfg_.max_depth || pos == 0 || pos == samples.size()) return id;

        for (std::size_t i = 0; i < per_split_; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, all_features_.size() - 1);
            std::swap(all_features_[i], all_features_[pick(rng_)]);
        }
        std::vector<std::size_t> chosen(all_features_.begin(),
                                        all_features_.begin() + static_cast<std::ptrdiff_t>(per_split_));
        std::sort(chosen.begin(), chosen.end());

        auto split = find_best_split(x_, y_, samples, chosen, cfg_.min_leaf);
        if (!split) return id;

        std::vector<std::size_t> left, right;
        for (std::size_t s : samples)
            (x_(s, split->feature) <= split->threshold ? left : right).push_back(s);
        samples.clear();
        samples.shrink_to_fit();

        tree_.nodes_[id].feature = static_cast<std::int32_t>(split->feature);
        tree_.nodes_[id].threshold = split->threshold;
        std::uint32_t const l = grow(std::move(left), depth + 1);
        std::uint32_t const r = grow(std::move(right), depth + 1);
        tree_.nodes_[id].left = l;
        tree_.nodes_[id].right = r;
        return id;
    }

    FeatureMatrix const& x_;
    std::span<int const> y_;
    ForestConfig const& cfg_;
    std::size_t per_split_;
    Rng& rng_;
    std::vector<std::size_t> all_features_;
    DecisionTree tree_;
};

ForestModel train(FeatureMatrix const& x, std::span<int const> y, ForestConfig const& config) {
    std::size_t const n = x.rows();
    if (n != y.size())
        throw InvalidArgument("train: " + std::to_string(n) + " rows but " + std::to_string(y.size()) +
                              " labels");
    if (n < 2) throw InvalidArgument("train: need at least 2 rows");
    std::size_t pos = 0;
    for (int label : y) {
        if (label != 0 && label != 1) throw InvalidArgument("train: labels must be 0 or 1");
        pos += static_cast<std::size_t>(label);
    }
    if (pos == 0 || pos == n) throw InvalidArgument("train: both classes must be present");
    if (config.n_trees < 1 || config.max_depth < 1 || config.min_leaf < 1)
        throw InvalidArgument("train: n_trees, max_depth and min_leaf must be >= 1");
    std::size_t per_split = config.features_per_split;
    if (per_split == 0)
        per_split = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x.cols()))));
    if (per_split > x.cols())
        throw InvalidArgument("train: features_per_split=" + std::to_string(per_split) + " exceeds " +
                              std::to_string(x.cols()) + " features");

    ForestModel model;
    model.n_features = x.cols();
    model.trees.resize(config.n_trees);
    parallel_for(config.n_trees, config.threads, [&](std::size_t t) {
        Rng rng = config.seed.derive(t).make_rng();
        std::uniform_int_distribution<std::size_t> draw(0, n - 1);
        std::vector<std::size_t> bag(n);
        for (auto& s : bag) s = draw(rng);
        TreeBuilder builder(x, y, config, per_split, rng);
        model.trees[t] = builder.build(std::move(bag));
    });
    return model;
}

ForestModel train(TrainingSet const& set, ForestConfig const& config) {
    return train(FeatureMatrix::from_rows(set.rows), set.labels, config);
}

double predict_proba(ForestModel const& model, std::span<double const> x) {
    if (x.size() != model.n_features)
        throw InvalidArgument("predict_proba: got " + std::to_string(x.size()) + " features, model has " +
                              std::to_string(model.n_features));
    if (model.trees.empty()) throw InvalidArgument("predict_proba: empty forest");
    double sum = 0.0;
    for (auto const& t : model.trees) sum += t.predict(x);
    return std::clamp(sum / static_cast<double>(model.trees.size()), 0.0, 1.0);
}

std::vector<double> predict_proba(ForestModel const& model, FeatureMatrix const& x) {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict_proba(model, x.row(r));
    return out;
}

}  // namespace deanon
