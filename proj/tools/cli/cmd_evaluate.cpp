#include <fstream>
#include <iostream>
#include <memory>

#include "common.hpp"
#include "json.hpp"

namespace usertype::cli {

namespace {

struct EvaluateOptions {
    PipelineFlags flags;
    std::size_t k = 10;
    std::string json_path;
};

nlohmann::json metrics_json(const MetricsSummary& m) {
    nlohmann::json per_class = nlohmann::json::object();
    for (UserType t : kClassOrder) {
        const ClassMetrics& c = m.per_class[class_index(t)];
        per_class[to_string(t)] = {
            {"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}};
    }
    return {{"accuracy", m.accuracy}, {"per_class", std::move(per_class)}};
}

nlohmann::json report_json(const EvaluationReport& r) {
    nlohmann::json folds = nlohmann::json::array();
    for (const FoldResult& fold : r.folds)
        folds.push_back({{"confusion", fold.confusion.counts}, {"metrics", metrics_json(fold.metrics)}});
    return {{"method", r.method},
            {"features", to_string(r.features)},
            {"k", r.k},
            {"seed", r.seed},
            {"mean", metrics_json(r.mean)},
            {"pooled_confusion", r.pooled.counts},
            {"folds", std::move(folds)}};
}

void run_evaluate(const EvaluateOptions& opt) {
    FeatureSelection selection = feature_selection_from_string(opt.flags.features);
    ResourceNeeds needs = ResourceNeeds::for_selection(selection);
    needs.name = true;  // the name-only baseline always runs
    ResourceSet resources = load_resources(needs, opt.flags.name_db_path, opt.flags.lexicon_path,
                                           opt.flags.image_dir);
    resources.name_options = opt.flags.name_options();
    FeatureSchema schema = make_run_schema(selection, resources);

    LoadedUsers users = load_users_deduped(opt.flags.users_path, std::cerr);
    auto labels = load_labels(opt.flags.labels_path);
    LabeledFeatures labeled =
        assemble_labeled(users, labels, schema, resources.extractors(), std::cerr);

    ClassifierConfig config = opt.flags.classifier_config();
    NormalizationMode mode = normalization_mode_from_string(opt.flags.norm);

    std::vector<EvaluationReport> reports;
    reports.push_back(cross_validate(labeled.data, config, mode, opt.k, opt.flags.seed));
    reports.back().features = selection;

    if (config.algorithm != Algorithm::majority) {
        ClassifierConfig majority_config = config;
        majority_config.algorithm = Algorithm::majority;
        reports.push_back(cross_validate(labeled.data, majority_config, mode, opt.k, opt.flags.seed));
        reports.back().features = selection;
    }
    reports.push_back(baseline_name_only(labeled.screen_names, labeled.data.labels,
                                         resources.name_db, resources.name_options, opt.k,
                                         opt.flags.seed));
    reports.back().features = FeatureSelection::name;

    std::cout << labeled.data.labels.size() << " users, " << opt.k << "-fold cross-validation\n"
              << format_distribution(dataset_summary(labeled.data.labels)) << "\n\n"
              << render_report_table(reports);

    if (!opt.json_path.empty()) {
        nlohmann::json out = nlohmann::json::array();
        for (const EvaluationReport& r : reports) out.push_back(report_json(r));
        std::ofstream file(opt.json_path, std::ios::binary);
        if (!file) throw DataError("cannot open '" + opt.json_path + "' for writing");
        file << out.dump(2) << '\n';
    }
}

}  // namespace

void register_evaluate(CLI::App& app) {
    auto opt = std::make_shared<EvaluateOptions>();
    CLI::App* cmd = app.add_subcommand(
        "evaluate", "Cross-validate a classifier with majority and name-only baselines");
    add_pipeline_flags(*cmd, opt->flags);
    cmd->add_option("--k", opt->k, "Fold count")->capture_default_str();
    cmd->add_option("--json", opt->json_path, "Write full-precision results to this file");
    cmd->callback([opt] { run_evaluate(*opt); });
}

}  // namespace usertype::cli
