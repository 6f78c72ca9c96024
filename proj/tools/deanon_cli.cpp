// Command-line driver for the contest de-anonymization pipeline.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "deanon/io.hpp"
#include "deanon/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"De-anonymization attack on synthetic link-prediction contests"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string workdir;
    unsigned threads = 0;
    app.add_option("--config", config_path, "Run configuration (key = value with [sections])");
    app.add_option("--workdir", workdir, "Artifact directory (overrides the config)");
    app.add_option("--threads", threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);

    std::optional<bool> augment;
    for (auto const* name : {"generate", "crawl", "contest", "deanon", "combine", "evaluate"})
        app.add_subcommand(name, std::string("Run the ") + name + " stage");
    auto* predict = app.add_subcommand("predict", "Train the classifier and predict test pairs");
    predict->add_flag_function(
        "--augment,!--no-augment", [&](std::int64_t count) { augment = count > 0; },
        "Add de-anonymized test pairs to the training rows");
    app.add_subcommand("run", "Run every stage in order");

    CLI11_PARSE(app, argc, argv);

    try {
        deanon::RunConfig config;
        if (!config_path.empty()) config = deanon::load_run_config(config_path);
        if (!workdir.empty()) config.workdir = workdir;
        if (threads > 0) config.threads = threads;
        if (augment) config.combine.augment = *augment;

        std::string const name = app.get_subcommands().front()->get_name();
        if (name == "run") {
            auto const report = deanon::run_all(config);
            std::cout << "auc=" << deanon::io::format_double(report.auc)
                      << " coverage=" << deanon::io::format_double(report.coverage)
                      << " mapping_precision=" << deanon::io::format_double(report.mapping_precision)
                      << " deanon_label_accuracy=" << deanon::io::format_double(report.deanon_label_accuracy)
                      << "\n";
        } else {
            deanon::run_stage(name, config);
        }
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
