#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "usertype/classifiers.hpp"
#include "usertype/feature_assembly.hpp"
#include "usertype/name_features.hpp"
#include "usertype/rng.hpp"
#include "usertype/types.hpp"

namespace usertype {

/// 3x3 counts; rows = true class, columns = predicted class, class order
/// (Male, Female, Organization). Additive across folds.
struct ConfusionMatrix {
    std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};

    void add(UserType truth, UserType predicted) {
        ++counts[class_index(truth)][class_index(predicted)];
    }
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
    std::uint64_t total() const;
    std::uint64_t diagonal() const;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricsSummary {
    double accuracy = 0.0;
    std::array<ClassMetrics, kNumClasses> per_class{};
};

/// accuracy = trace/total; per class, precision = TP/(TP+FP), recall =
/// TP/(TP+FN), F1 = 2PR/(P+R); every 0/0 is defined as 0. Empty matrix is a
/// DataError.
MetricsSummary metrics_from_confusion(const ConfusionMatrix& cm);

/// Deterministic stratified partition: within each class, fold sizes differ
/// by at most one. A class that appears with fewer than k examples is a
/// DataError; absent classes are fine.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const UserType> labels,
                                                       std::size_t k, std::uint64_t seed);

/// Seed used to train fold `fold` inside cross_validate; exposed so a fold
/// can be refit externally and compared bit-for-bit.
inline std::uint64_t fold_seed(std::uint64_t base_seed, std::size_t fold) {
    return mix_seed(base_seed, 0x464f4c44ull + fold);
}

struct FoldResult {
    ConfusionMatrix confusion;
    MetricsSummary metrics;
};

struct EvaluationReport {
    std::string method;                // display label, e.g. "random_forest"
    FeatureSelection features = FeatureSelection::all;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<FoldResult> folds;
    MetricsSummary mean;               // arithmetic mean of per-fold metrics
    ConfusionMatrix pooled;            // sum of fold confusion matrices
};

/// Called once per fold with the indices and the exact model that scored it.
using FoldObserver = std::function<void(std::size_t fold, std::span<const std::size_t> train_indices,
                                        std::span<const std::size_t> test_indices,
                                        const TrainedModel& model)>;

struct AssembledDataset {
    FeatureSchema schema;
    std::vector<FeatureVector> vectors;
    std::vector<UserType> labels;
};

/// k-fold cross-validation with no leakage: the preprocessor and the
/// classifier are both fitted on each fold's training split only.
EvaluationReport cross_validate(const AssembledDataset& data, const ClassifierConfig& config,
                                NormalizationMode mode, std::size_t k, std::uint64_t seed,
                                const FoldObserver& observer = {});

/// Name-database baseline under the same fold structure: female/male lookups
/// map directly; unisex/none fall back to the training split's more frequent
/// individual class. Never predicts Organization.
EvaluationReport baseline_name_only(std::span<const std::string> screen_names,
                                    std::span<const UserType> labels, const NameDatabase& db,
                                    const NameOptions& options, std::size_t k, std::uint64_t seed);

/// Aligned table with Accuracy / F1-Org / F1-Female / F1-Male columns,
/// percentages at 2 decimals.
std::string render_report_table(std::span<const EvaluationReport> reports);

}  // namespace usertype
