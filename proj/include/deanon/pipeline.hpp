#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "deanon/error.hpp"
#include "deanon/eval.hpp"
#include "deanon/forest.hpp"
#include "deanon/propagation.hpp"
#include "deanon/rng.hpp"
#include "deanon/seed_matcher.hpp"

namespace deanon {

/// Everything needed to reproduce a run. Each stage draws its randomness
/// from master_seed.derive(<stage name>).
struct RunConfig {
    std::size_t n = 2000;
    std::size_t m = 5;
    double coverage_contest = 0.8;
    double coverage_attacker = 0.8;
    std::size_t n_test = 500;
    std::size_t k_seeds = 40;
    SeedWeightMode weight_mode = SeedWeightMode::cosine;
    bool include_test_edges = false;  ///< treat test pairs as edges when weighting hubs
    std::size_t train_pos = 0;        ///< 0: edge_count / 10
    std::size_t train_neg = 0;        ///< 0: same as train_pos
    AnnealConfig anneal;
    PropagationConfig propagation;
    ForestConfig forest;
    CombineConfig combine{.augment = true};
    RngSeed master_seed{1};
    unsigned threads = 1;
    std::filesystem::path workdir = "work";

    RngSeed stage_seed(std::string_view stage) const { return master_seed.derive(stage); }
};

/// Parses the flat `key = value` format; keys after a `[section]` header
/// belong to that section (anneal, propagation, forest, combine). `#` starts
/// a comment. Unknown keys are errors.
RunConfig parse_run_config(std::string_view text, std::string const& origin = "<config>");
RunConfig load_run_config(std::filesystem::path const& path);

/// Canonical `section.key` -> value listing of a config (for report echoes).
ReportFields describe_config(RunConfig const& config);

/// A stage failure, tagged with the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, std::string const& cause)
        : Error("stage " + stage + ": " + cause), stage_(std::move(stage)) {}

    std::string const& stage() const { return stage_; }

private:
    std::string stage_;
};

namespace artifacts {
inline constexpr char const* kGroundTruth = "ground_truth.csv";
inline constexpr char const* kCrawlAttacker = "crawl_a.csv";
inline constexpr char const* kTruthAttacker = "truth_a.csv";
inline constexpr char const* kCrawlContest = "crawl_b.csv";
inline constexpr char const* kTruthContest = "truth_b.csv";
inline constexpr char const* kTrain = "train.csv";
inline constexpr char const* kTestPairs = "test_pairs.csv";
inline constexpr char const* kHiddenLabels = "hidden_labels.csv";
inline constexpr char const* kSeeds = "seeds.csv";
inline constexpr char const* kSeedInstance = "seed_instance.csv";
inline constexpr char const* kMapping = "mapping.csv";
inline constexpr char const* kClassifierPredictions = "clf_predictions.csv";
inline constexpr char const* kPredictions = "predictions.csv";
inline constexpr char const* kReport = "report.txt";
}  // namespace artifacts

/// Individual stages. Each reads its inputs from config.workdir and writes
/// only its own outputs there.
void stage_generate(RunConfig const& config);
void stage_crawl(RunConfig const& config);
void stage_contest(RunConfig const& config);
void stage_deanon(RunConfig const& config);
void stage_predict(RunConfig const& config);
void stage_combine(RunConfig const& config);
EvalReport stage_evaluate(RunConfig const& config);

/// Runs a stage by name, converting failures into StageError.
void run_stage(std::string_view name, RunConfig const& config);

/// generate -> crawl -> contest -> deanon -> predict -> combine -> evaluate.
/// Clears stale artifacts first, so a failed run leaves no report.
EvalReport run_all(RunConfig const& config);

}  // namespace deanon
