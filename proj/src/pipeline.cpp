#include "deanon/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "deanon/contest.hpp"
#include "deanon/crawl.hpp"
#include "deanon/io.hpp"

namespace deanon {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    auto const first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    auto const last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

// Binds every config key to a parser and a printer for its field.
struct Field {
    std::function<bool(RunConfig&, std::string_view)> parse;
    std::function<std::string(RunConfig const&)> print;
};

template <class T>
Field size_field(T RunConfig::*member) {
    return {[member](RunConfig& c, std::string_view v) {
                std::uint64_t x = 0;
                if (!io::parse_u64(v, x)) return false;
                c.*member = static_cast<T>(x);
                return true;
            },
            [member](RunConfig const& c) { return std::to_string(c.*member); }};
}

template <class Get>
Field size_at(Get get) {
    return {[get](RunConfig& c, std::string_view v) {
                std::uint64_t x = 0;
                if (!io::parse_u64(v, x)) return false;
                get(c) = static_cast<std::remove_reference_t<decltype(get(c))>>(x);
                return true;
            },
            [get](RunConfig const& c) { return std::to_string(get(const_cast<RunConfig&>(c))); }};
}

template <class Get>
Field double_at(Get get) {
    return {[get](RunConfig& c, std::string_view v) { return io::parse_double(v, get(c)); },
            [get](RunConfig const& c) { return io::format_double(get(const_cast<RunConfig&>(c))); }};
}

template <class Get>
Field bool_at(Get get) {
    return {[get](RunConfig& c, std::string_view v) {
                if (v == "true" || v == "1") {
                    get(c) = true;
                } else if (v == "false" || v == "0") {
                    get(c) = false;
                } else {
                    return false;
                }
                return true;
            },
            [get](RunConfig const& c) -> std::string { return get(const_cast<RunConfig&>(c)) ? "true" : "false"; }};
}

std::map<std::string, Field> const& fields() {
    static std::map<std::string, Field> const table = [] {
        std::map<std::string, Field> t;
        t["n"] = size_field(&RunConfig::n);
        t["m"] = size_field(&RunConfig::m);
        t["n_test"] = size_field(&RunConfig::n_test);
        t["k_seeds"] = size_field(&RunConfig::k_seeds);
        t["train_pos"] = size_field(&RunConfig::train_pos);
        t["train_neg"] = size_field(&RunConfig::train_neg);
        t["threads"] = size_field(&RunConfig::threads);
        t["coverage_contest"] = double_at([](RunConfig& c) -> double& { return c.coverage_contest; });
        t["coverage_attacker"] = double_at([](RunConfig& c) -> double& { return c.coverage_attacker; });
        t["include_test_edges"] = bool_at([](RunConfig& c) -> bool& { return c.include_test_edges; });
        t["master_seed"] = size_at([](RunConfig& c) -> std::uint64_t& { return c.master_seed.value; });
        t["weight_mode"] = {[](RunConfig& c, std::string_view v) {
                                if (v == "cosine") {
                                    c.weight_mode = SeedWeightMode::cosine;
                                } else if (v == "edge") {
                                    c.weight_mode = SeedWeightMode::edge;
                                } else {
                                    return false;
                                }
                                return true;
                            },
                            [](RunConfig const& c) -> std::string {
                                return c.weight_mode == SeedWeightMode::cosine ? "cosine" : "edge";
                            }};

        t["anneal.initial_temp"] = double_at([](RunConfig& c) -> double& { return c.anneal.initial_temp; });
        t["anneal.cooling"] = double_at([](RunConfig& c) -> double& { return c.anneal.cooling; });
        t["anneal.min_temp"] = double_at([](RunConfig& c) -> double& { return c.anneal.min_temp; });
        t["anneal.steps_per_temp"] = size_at([](RunConfig& c) -> std::size_t& { return c.anneal.steps_per_temp; });
        t["anneal.restarts"] = size_at([](RunConfig& c) -> std::size_t& { return c.anneal.restarts; });
        t["anneal.stop_when_frozen"] = bool_at([](RunConfig& c) -> bool& { return c.anneal.stop_when_frozen; });

        t["propagation.theta"] = double_at([](RunConfig& c) -> double& { return c.propagation.theta; });
        t["propagation.max_rounds"] = size_at([](RunConfig& c) -> std::size_t& { return c.propagation.max_rounds; });
        t["propagation.candidate_cap"] =
            size_at([](RunConfig& c) -> std::size_t& { return c.propagation.candidate_cap; });
        t["propagation.bidirectional_check"] =
            bool_at([](RunConfig& c) -> bool& { return c.propagation.bidirectional_check; });

        t["forest.n_trees"] = size_at([](RunConfig& c) -> std::size_t& { return c.forest.n_trees; });
        t["forest.max_depth"] = size_at([](RunConfig& c) -> std::size_t& { return c.forest.max_depth; });
        t["forest.min_leaf"] = size_at([](RunConfig& c) -> std::size_t& { return c.forest.min_leaf; });
        t["forest.features_per_split"] =
            size_at([](RunConfig& c) -> std::size_t& { return c.forest.features_per_split; });

        t["combine.p_edge"] = double_at([](RunConfig& c) -> double& { return c.combine.p_edge; });
        t["combine.p_nonedge"] = double_at([](RunConfig& c) -> double& { return c.combine.p_nonedge; });
        t["combine.augment"] = bool_at([](RunConfig& c) -> bool& { return c.combine.augment; });
        return t;
    }();
    return table;
}

void validate(RunConfig const& c, std::string const& origin) {
    auto fail = [&](std::string const& what) { throw InvalidArgument(origin + ": " + what); };
    if (!(c.coverage_contest > 0.0 && c.coverage_contest <= 1.0)) fail("coverage_contest must be in (0,1]");
    if (!(c.coverage_attacker > 0.0 && c.coverage_attacker <= 1.0)) fail("coverage_attacker must be in (0,1]");
    if (!(c.combine.p_nonedge >= 0.0 && c.combine.p_nonedge < c.combine.p_edge && c.combine.p_edge <= 1.0))
        fail("need 0 <= combine.p_nonedge < combine.p_edge <= 1");
    if (c.threads < 1) fail("threads must be >= 1");
}

fs::path at(RunConfig const& c, char const* name) { return c.workdir / name; }

std::vector<NodeId> mapping_sources(NodeMapping const& m) {
    std::vector<NodeId> out;
    out.reserve(m.size());
    for (auto const& [a, b] : m) out.push_back(a);
    return out;
}

std::vector<NodeId> pair_endpoints(std::span<Edge const> pairs) {
    std::vector<NodeId> out;
    out.reserve(2 * pairs.size());
    for (auto const& e : pairs) {
        out.push_back(e.source);
        out.push_back(e.target);
    }
    return out;
}

// The training graph loses nodes whose only edges were held out; the test
// pairs bring them back.
DirectedGraph load_train_graph(RunConfig const& c, std::vector<Edge> const& test_pairs) {
    return load_edge_list(at(c, artifacts::kTrain), pair_endpoints(test_pairs));
}

void set_threads(RunConfig& c) {
    c.anneal.threads = c.threads;
    c.propagation.threads = c.threads;
    c.forest.threads = c.threads;
}

}  // namespace

RunConfig parse_run_config(std::string_view text, std::string const& origin) {
    RunConfig c;
    std::string section;
    std::size_t lineno = 0;
    std::set<std::string> seen;
    while (!text.empty()) {
        ++lineno;
        auto const nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty() && line.back() == '\r') line = trim(line.substr(0, line.size() - 1));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(origin, lineno, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section == "run") section.clear();
            continue;
        }
        auto const eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(origin, lineno, "expected key = value");
        std::string key(trim(line.substr(0, eq)));
        std::string_view const value = trim(line.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        if (key == "workdir") {
            c.workdir = std::string(value);
            continue;
        }
        auto it = fields().find(key);
        if (it == fields().end()) throw ParseError(origin, lineno, "unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ParseError(origin, lineno, "duplicate key '" + key + "'");
        if (!it->second.parse(c, value))
            throw ParseError(origin, lineno, "invalid value '" + std::string(value) + "' for " + key);
    }
    validate(c, origin);
    return c;
}

RunConfig load_run_config(fs::path const& path) {
    auto lines = io::read_lines(path);
    std::string text;
    for (auto const& l : lines) text += l + "\n";
    return parse_run_config(text, path.string());
}

ReportFields describe_config(RunConfig const& config) {
    ReportFields out;
    for (auto const& [key, field] : fields()) {
        if (key == "threads") continue;  // results must not depend on it
        out["config." + key] = field.print(config);
    }
    return out;
}

void stage_generate(RunConfig const& c) {
    fs::create_directories(c.workdir);
    auto g = generate_scale_free(c.n, c.m, c.stage_seed("generate"));
    save_edge_list(g, at(c, artifacts::kGroundTruth));
}

void stage_crawl(RunConfig const& c) {
    auto const truth_graph = load_edge_list(at(c, artifacts::kGroundTruth));
    auto attacker = partial_crawl(truth_graph, c.coverage_attacker, c.stage_seed("crawl_attacker"));
    auto contest = partial_crawl(truth_graph, c.coverage_contest, c.stage_seed("crawl_contest"));
    auto [obfuscated, to_crawl] = obfuscate(contest.subgraph, c.stage_seed("obfuscate"));

    NodeMapping to_truth;
    for (auto const& [obf, crawl_id] : to_crawl) to_truth.insert(obf, contest.truth.at(crawl_id));

    save_edge_list(attacker.subgraph, at(c, artifacts::kCrawlAttacker));
    save_truth(attacker.truth, at(c, artifacts::kTruthAttacker));
    save_edge_list(obfuscated, at(c, artifacts::kCrawlContest));
    save_truth(to_truth, at(c, artifacts::kTruthContest));
}

void stage_contest(RunConfig const& c) {
    auto const truth = load_truth(at(c, artifacts::kTruthContest));
    auto const crawl = load_edge_list(at(c, artifacts::kCrawlContest), mapping_sources(truth));
    auto ds = build_contest(crawl, c.n_test, c.stage_seed("contest"));
    save_edge_list(ds.view.train_graph, at(c, artifacts::kTrain));
    save_pairs(ds.view.test_pairs, at(c, artifacts::kTestPairs));
    save_labels(ds.hidden_labels, at(c, artifacts::kHiddenLabels));
}

void stage_deanon(RunConfig const& base) {
    RunConfig c = base;
    set_threads(c);
    auto const test_pairs = load_pairs(at(c, artifacts::kTestPairs));
    auto const train = load_train_graph(c, test_pairs);
    auto const attacker = load_edge_list(at(c, artifacts::kCrawlAttacker));

    DirectedGraph weight_graph = train;
    if (c.include_test_edges) {
        GraphBuilder b;
        for (NodeId u : train.nodes()) b.add_node(u);
        for (auto const& e : train.edges()) b.add_edge(e.source, e.target);
        for (auto const& e : test_pairs) b.add_edge(e.source, e.target);
        weight_graph = b.build();
    }

    auto const a = build_seed_weights(weight_graph, c.k_seeds, c.weight_mode);
    auto const b = build_seed_weights(attacker, c.k_seeds, c.weight_mode);
    save_matching_instance(a, b, at(c, artifacts::kSeedInstance));

    AnnealConfig anneal_cfg = c.anneal;
    anneal_cfg.seed = c.stage_seed("anneal");
    auto const state = anneal(a, b, anneal_cfg);
    auto const seeds = seeds_to_mapping(a, b, state);
    save_mapping(seeds, at(c, artifacts::kSeeds));

    auto const mapping = propagate(train, attacker, seeds, c.propagation);
    save_mapping(mapping, at(c, artifacts::kMapping));
}

void stage_predict(RunConfig const& base) {
    RunConfig c = base;
    set_threads(c);
    auto const test_pairs = load_pairs(at(c, artifacts::kTestPairs));
    auto const train_graph = load_train_graph(c, test_pairs);

    std::size_t const n_pos = c.train_pos ? c.train_pos : train_graph.edge_count() / 10;
    std::size_t const n_neg = c.train_neg ? c.train_neg : n_pos;
    auto rows = build_training_rows(train_graph, n_pos, n_neg, c.stage_seed("training_rows"), c.threads);
    if (c.combine.augment) {
        auto const mapping = load_mapping(at(c, artifacts::kMapping));
        auto const attacker = load_edge_list(at(c, artifacts::kCrawlAttacker));
        rows = augment_training(rows, test_pairs, mapping, attacker, train_graph, c.threads);
    }

    ForestConfig forest_cfg = c.forest;
    forest_cfg.seed = c.stage_seed("forest");
    auto const model = train(rows, forest_cfg);
    auto const test_rows = extract_features_batch(train_graph, test_pairs, /*hide_edge=*/false, c.threads);
    auto const probs = predict_proba(model, FeatureMatrix::from_rows(test_rows));
    write_predictions(test_pairs, probs, at(c, artifacts::kClassifierPredictions));
}

void stage_combine(RunConfig const& c) {
    auto const test_pairs = load_pairs(at(c, artifacts::kTestPairs));
    auto const clf = read_predictions(at(c, artifacts::kClassifierPredictions));
    auto const mapping = load_mapping(at(c, artifacts::kMapping));
    auto const attacker = load_edge_list(at(c, artifacts::kCrawlAttacker));
    auto const probs = combine_predictions(test_pairs, mapping, attacker, clf, c.combine);
    write_predictions(test_pairs, probs, at(c, artifacts::kPredictions));
}

EvalReport stage_evaluate(RunConfig const& c) {
    ContestDataset ds;
    ds.view.test_pairs = load_pairs(at(c, artifacts::kTestPairs));
    ds.hidden_labels = load_labels(at(c, artifacts::kHiddenLabels));
    auto const probs = read_predictions(at(c, artifacts::kPredictions));
    auto const clf = read_predictions(at(c, artifacts::kClassifierPredictions));
    auto const mapping = load_mapping(at(c, artifacts::kMapping));
    auto const seeds = load_mapping(at(c, artifacts::kSeeds));
    auto const truth_a = load_truth(at(c, artifacts::kTruthAttacker));
    auto const truth_b = load_truth(at(c, artifacts::kTruthContest));
    auto const attacker = load_edge_list(at(c, artifacts::kCrawlAttacker), mapping_sources(truth_a));

    auto const report = evaluate(ds, mapping, truth_b, truth_a, attacker, probs);

    ReportFields out = describe_config(c);
    add_report_fields(out, report);
    out["classifier_auc"] = io::format_double(auc(ds.hidden_labels, clf));

    // Classifier quality on the pairs the lookup cannot answer.
    std::vector<int> rest_labels;
    std::vector<double> rest_scores;
    for (std::size_t i = 0; i < ds.view.test_pairs.size(); ++i) {
        if (is_covered(mapping, ds.view.test_pairs[i])) continue;
        rest_labels.push_back(ds.hidden_labels[i]);
        rest_scores.push_back(clf[i]);
    }
    bool const both = std::count(rest_labels.begin(), rest_labels.end(), 1) > 0 &&
                      std::count(rest_labels.begin(), rest_labels.end(), 0) > 0;
    out["classifier_auc_uncovered"] = both ? io::format_double(auc(rest_labels, rest_scores)) : "nan";

    std::size_t seeds_correct = 0;
    for (auto const& [u, v] : seeds)
        if (truth_b.image(u) && truth_a.image(v) && *truth_b.image(u) == *truth_a.image(v)) ++seeds_correct;
    out["seed_count"] = std::to_string(seeds.size());
    out["seeds_correct"] = std::to_string(seeds_correct);
    out["mapped_nodes"] = std::to_string(mapping.size());
    out["test_pairs"] = std::to_string(ds.view.test_pairs.size());
    for (auto stage : {"generate", "crawl_attacker", "crawl_contest", "obfuscate", "contest", "anneal",
                       "training_rows", "forest"})
        out[std::string("seed.") + stage] = std::to_string(c.stage_seed(stage).value);

    write_report(out, at(c, artifacts::kReport));
    return report;
}

void run_stage(std::string_view name, RunConfig const& config) {
    static std::map<std::string_view, std::function<void(RunConfig const&)>> const stages = {
        {"generate", stage_generate}, {"crawl", stage_crawl},     {"contest", stage_contest},
        {"deanon", stage_deanon},     {"predict", stage_predict}, {"combine", stage_combine},
        {"evaluate", [](RunConfig const& c) { stage_evaluate(c); }},
    };
    auto it = stages.find(name);
    if (it == stages.end()) throw InvalidArgument("unknown stage '" + std::string(name) + "'");
    try {
        it->second(config);
    } catch (StageError const&) {
        throw;
    } catch (std::exception const& e) {
        throw StageError(std::string(name), e.what());
    }
}

EvalReport run_all(RunConfig const& config) {
    fs::create_directories(config.workdir);
    for (auto name : {artifacts::kGroundTruth, artifacts::kCrawlAttacker, artifacts::kTruthAttacker,
                      artifacts::kCrawlContest, artifacts::kTruthContest, artifacts::kTrain,
                      artifacts::kTestPairs, artifacts::kHiddenLabels, artifacts::kSeeds,
                      artifacts::kSeedInstance, artifacts::kMapping, artifacts::kClassifierPredictions,
                      artifacts::kPredictions, artifacts::kReport})
        fs::remove(at(config, name));
    for (auto stage : {"generate", "crawl", "contest", "deanon", "predict", "combine"}) run_stage(stage, config);
    try {
        return stage_evaluate(config);
    } catch (std::exception const& e) {
        throw StageError("evaluate", e.what());
    }
}

}  // namespace deanon
