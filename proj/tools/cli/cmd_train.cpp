#include <iostream>
#include <memory>

#include "common.hpp"
#include "usertype/model_io.hpp"

namespace usertype::cli {

namespace {

struct TrainOptions {
    PipelineFlags flags;
    std::string model_path;
};

void run_train(const TrainOptions& opt) {
    FeatureSelection selection = feature_selection_from_string(opt.flags.features);
    ResourceSet resources = load_resources(ResourceNeeds::for_selection(selection),
                                           opt.flags.name_db_path, opt.flags.lexicon_path,
                                           opt.flags.image_dir);
    resources.name_options = opt.flags.name_options();
    FeatureSchema schema = make_run_schema(selection, resources);

    LoadedUsers users = load_users_deduped(opt.flags.users_path, std::cerr);
    auto labels = load_labels(opt.flags.labels_path);
    LabeledFeatures labeled =
        assemble_labeled(users, labels, schema, resources.extractors(), std::cerr);

    TrainedModel model;
    model.config = opt.flags.classifier_config();
    model.name_options = resources.name_options;
    model.preprocessor = fit_preprocessor(labeled.data.vectors, schema,
                                          normalization_mode_from_string(opt.flags.norm));

    std::vector<std::vector<double>> rows;
    rows.reserve(labeled.data.vectors.size());
    for (const FeatureVector& v : labeled.data.vectors)
        rows.push_back(apply_preprocessor(model.preprocessor, v));
    model.params = train_classifier(model.config, rows, labeled.data.labels);

    serialize_model(model, opt.model_path);

    std::cout << "trained " << to_string(model.config.algorithm) << " (features: "
              << to_string(selection) << ", dimension " << schema.dimension() << ") on "
              << labeled.data.labels.size() << " users\n"
              << format_distribution(dataset_summary(labeled.data.labels)) << '\n'
              << "model written to " << opt.model_path << '\n';
    if (labeled.labels_without_user > 0)
        std::cout << labeled.labels_without_user << " label(s) had no matching user\n";
}

}  // namespace

void register_train(CLI::App& app) {
    auto opt = std::make_shared<TrainOptions>();
    CLI::App* cmd = app.add_subcommand("train", "Fit a classifier and write a model artifact");
    add_pipeline_flags(*cmd, opt->flags);
    cmd->add_option("--model", opt->model_path, "Output model path")->required();
    cmd->callback([opt] { run_train(*opt); });
}

}  // namespace usertype::cli
