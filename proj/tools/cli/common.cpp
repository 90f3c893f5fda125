#include "common.hpp"

#include <unordered_set>

#include "usertype/error.hpp"
#include "usertype/name_features.hpp"
#include "usertype/text_features.hpp"

namespace usertype::cli {

FeatureExtractors ResourceSet::extractors() const {
    FeatureExtractors ex;
    if (has_name_db) ex.name_db = &name_db;
    ex.name_options = name_options;
    if (has_lexicon) ex.lexicon = &lexicon;
    ex.images = images.get();
    return ex;
}

ResourceNeeds ResourceNeeds::for_selection(FeatureSelection selection) {
    ResourceNeeds needs;
    needs.name = selection == FeatureSelection::name || selection == FeatureSelection::all;
    needs.text = selection == FeatureSelection::text || selection == FeatureSelection::all;
    return needs;
}

ResourceNeeds ResourceNeeds::for_schema(const FeatureSchema& schema) {
    ResourceNeeds needs;
    needs.name = schema.has(FeatureGroup::name);
    needs.text = schema.has(FeatureGroup::text);
    return needs;
}

ResourceSet load_resources(const ResourceNeeds& needs, const std::string& name_db_path,
                           const std::string& lexicon_path, const std::string& image_dir) {
    ResourceSet resources;
    if (needs.name) {
        if (name_db_path.empty())
            throw ConfigError("this run uses name features: --name-db is required");
        resources.name_db = load_name_database(name_db_path);
        resources.has_name_db = true;
    }
    if (needs.text) {
        if (lexicon_path.empty())
            throw ConfigError("this run uses text features: --lexicon is required");
        resources.lexicon = load_lexicon(lexicon_path);
        resources.has_lexicon = true;
    }
    if (image_dir.empty())
        resources.images = std::make_unique<NullImageProvider>();
    else
        resources.images = std::make_unique<DirectoryImageProvider>(image_dir);
    return resources;
}

LoadedUsers load_users_deduped(const std::string& path, std::ostream& diagnostics) {
    LoadedUsers loaded;
    auto [records, stats] = load_user_records(path);
    loaded.stats = stats;
    std::unordered_set<std::string> seen;
    seen.reserve(records.size());
    for (UserRecord& record : records) {
        if (seen.insert(record.user_id).second)
            loaded.records.push_back(std::move(record));
        else
            ++loaded.duplicate_records;
    }
    if (loaded.stats.skipped > 0)
        diagnostics << "note: skipped " << loaded.stats.skipped << " malformed line(s) in '"
                    << path << "'\n";
    return loaded;
}

LabeledFeatures assemble_labeled(const LoadedUsers& users,
                                 const std::unordered_map<std::string, UserType>& labels,
                                 const FeatureSchema& schema, const FeatureExtractors& extractors,
                                 std::ostream& diagnostics) {
    LabeledFeatures out;
    out.data.schema = schema;

    std::unordered_set<std::string> matched;
    matched.reserve(labels.size());
    for (const UserRecord& record : users.records) {
        auto it = labels.find(record.user_id);
        if (it == labels.end()) continue;
        matched.insert(record.user_id);
        out.data.vectors.push_back(assemble(record, schema, extractors));
        out.data.labels.push_back(it->second);
        out.screen_names.push_back(record.screen_name);
    }
    for (const auto& [user_id, label] : labels) {
        if (!matched.contains(user_id)) {
            ++out.labels_without_user;
            diagnostics << "warning: label for unknown user '" << user_id << "' skipped\n";
        }
    }
    if (out.data.labels.empty()) throw DataError("no labeled users found in the input");
    return out;
}

ClassifierConfig PipelineFlags::classifier_config() const {
    ClassifierConfig config;
    config.algorithm = algorithm_from_string(classifier);
    config.seed = seed;
    config.forest.trees = trees;
    config.forest.features_per_split = features_per_split;
    config.forest.bootstrap = !no_bootstrap;
    config.forest.max_depth = max_depth;
    config.forest.min_leaf = min_leaf;
    config.svm.lambda = lambda;
    config.svm.epochs = epochs;
    config.logistic.lambda = lambda;
    config.logistic.iterations = iterations;
    config.logistic.step = step;
    config.nb.smoothing_ratio = smoothing;
    return config;
}

NameOptions PipelineFlags::name_options() const {
    NameOptions options;
    options.theta = theta;
    options.strategy = name_strategy_from_string(name_strategy);
    return options;
}

void add_pipeline_flags(CLI::App& cmd, PipelineFlags& flags) {
    cmd.add_option("--users", flags.users_path, "Line-delimited JSON user records")->required();
    cmd.add_option("--labels", flags.labels_path, "user_id,label CSV")->required();
    cmd.add_option("--name-db", flags.name_db_path, "Name frequency CSV (name,gender,frequency[,country])");
    cmd.add_option("--lexicon", flags.lexicon_path, "Word-category lexicon file");
    cmd.add_option("--image-dir", flags.image_dir, "Directory of image probability vectors");
    cmd.add_option("--features", flags.features, "Feature groups: name|text|image|metadata|all")
        ->capture_default_str();
    cmd.add_option("--classifier", flags.classifier,
                   "random_forest|linear_svm_ovr|logistic_regression|gaussian_nb|majority")
        ->capture_default_str();
    cmd.add_option("--norm", flags.norm, "Normalization: feature|sample")->capture_default_str();
    cmd.add_option("--seed", flags.seed, "Base RNG seed")->capture_default_str();
    cmd.add_option("--theta", flags.theta, "Name gender dominance threshold, in (0.5, 1]")
        ->capture_default_str();
    cmd.add_option("--name-strategy", flags.name_strategy, "Screen-name token choice: first|best-total")
        ->capture_default_str();
    cmd.add_option("--trees", flags.trees, "Forest size")->capture_default_str();
    cmd.add_option("--mtry", flags.features_per_split,
                   "Features tried per split (0 = ceil(sqrt(D)))")
        ->capture_default_str();
    cmd.add_option("--max-depth", flags.max_depth, "Tree depth cap (0 = unbounded)")
        ->capture_default_str();
    cmd.add_option("--min-leaf", flags.min_leaf, "Minimum rows per leaf")->capture_default_str();
    cmd.add_flag("--no-bootstrap", flags.no_bootstrap, "Grow each tree on the full training set");
    cmd.add_option("--lambda", flags.lambda, "L2 strength (SVM and logistic)")
        ->capture_default_str();
    cmd.add_option("--epochs", flags.epochs, "SVM passes over the data")->capture_default_str();
    cmd.add_option("--iterations", flags.iterations, "Logistic gradient steps")
        ->capture_default_str();
    cmd.add_option("--step", flags.step, "Logistic step size")->capture_default_str();
    cmd.add_option("--smoothing", flags.smoothing, "Naive Bayes variance smoothing ratio")
        ->capture_default_str();
}

FeatureSchema make_run_schema(FeatureSelection selection, const ResourceSet& resources) {
    std::size_t k = resources.has_lexicon ? resources.lexicon.category_count() : 0;
    return make_schema(selection, k);
}

}  // namespace usertype::cli
