#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "usertype/classifiers.hpp"
#include "usertype/eval.hpp"
#include "usertype/feature_assembly.hpp"
#include "usertype/record_io.hpp"

namespace usertype::cli {

/// Owns the loaded lookup resources. The FeatureExtractors view holds
/// pointers into this object, so it must outlive any assemble() call.
struct ResourceSet {
    NameDatabase name_db;
    LexiconDictionary lexicon;
    std::unique_ptr<ImageFeatureProvider> images;
    bool has_name_db = false;
    bool has_lexicon = false;
    NameOptions name_options;

    FeatureExtractors extractors() const;
};

/// Which lookup resources a run needs.
struct ResourceNeeds {
    bool name = false;
    bool text = false;

    static ResourceNeeds for_selection(FeatureSelection selection);
    static ResourceNeeds for_schema(const FeatureSchema& schema);
};

/// Loads the needed resources; a needed resource without a path is a
/// ConfigError. The image provider is directory-backed when a directory is
/// given and a null provider (every lookup missing) otherwise.
ResourceSet load_resources(const ResourceNeeds& needs, const std::string& name_db_path,
                           const std::string& lexicon_path, const std::string& image_dir);

struct LoadedUsers {
    std::vector<UserRecord> records;  // first record per user_id, input order
    StreamStats stats;
    std::uint64_t duplicate_records = 0;
};

LoadedUsers load_users_deduped(const std::string& path, std::ostream& diagnostics);

struct LabeledFeatures {
    AssembledDataset data;
    std::vector<std::string> screen_names;  // aligned with data.labels
    std::uint64_t labels_without_user = 0;
};

/// Joins first-seen records with the label map and assembles one feature
/// vector per labeled user. Labels whose user never appears are warned
/// about, skipped and counted.
LabeledFeatures assemble_labeled(const LoadedUsers& users,
                                 const std::unordered_map<std::string, UserType>& labels,
                                 const FeatureSchema& schema, const FeatureExtractors& extractors,
                                 std::ostream& diagnostics);

/// Flags shared by train and evaluate.
struct PipelineFlags {
    std::string users_path;
    std::string labels_path;
    std::string name_db_path;
    std::string lexicon_path;
    std::string image_dir;
    std::string features = "all";
    std::string classifier = "random_forest";
    std::string norm = "feature";
    std::uint64_t seed = 0;
    double theta = 0.9;
    std::string name_strategy = "first";
    std::size_t trees = 100;
    std::size_t features_per_split = 0;
    std::size_t max_depth = 0;
    std::size_t min_leaf = 1;
    bool no_bootstrap = false;
    double lambda = 1e-4;
    std::size_t epochs = 100;
    std::size_t iterations = 500;
    double step = 0.1;
    double smoothing = 1e-9;

    ClassifierConfig classifier_config() const;
    NameOptions name_options() const;
};

void add_pipeline_flags(CLI::App& cmd, PipelineFlags& flags);

/// Builds the run's schema; K comes from the loaded lexicon when text
/// features are selected and is 0 otherwise.
FeatureSchema make_run_schema(FeatureSelection selection, const ResourceSet& resources);

void register_train(CLI::App& app);
void register_evaluate(CLI::App& app);
void register_classify(CLI::App& app);
void register_report(CLI::App& app);

}  // namespace usertype::cli
