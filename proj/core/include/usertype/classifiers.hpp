#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "usertype/feature_assembly.hpp"
#include "usertype/types.hpp"

namespace usertype {

enum class Algorithm : std::uint8_t {
    random_forest,
    linear_svm_ovr,
    logistic_regression,
    gaussian_nb,
    majority,
};

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& token);

struct ForestParams {
    std::size_t trees = 100;
    std::size_t features_per_split = 0;  // 0 = ceil(sqrt(D))
    bool bootstrap = true;               // sample size n, with replacement
    std::size_t max_depth = 0;           // 0 = unbounded
    std::size_t min_leaf = 1;
};

struct SvmParams {
    double lambda = 1e-4;  // L2 regularization
    std::size_t epochs = 100;
    // step schedule is 1 / (lambda * t), t counting per-example updates
};

struct LogisticParams {
    double lambda = 1e-4;
    std::size_t iterations = 500;  // full-batch gradient steps
    double step = 0.1;
};

struct NbParams {
    double smoothing_ratio = 1e-9;  // variance smoothing: ratio * max feature variance
};

struct ClassifierConfig {
    Algorithm algorithm = Algorithm::random_forest;
    std::uint64_t seed = 0;  // always explicit; no hidden entropy sources
    ForestParams forest;
    SvmParams svm;
    LogisticParams logistic;
    NbParams nb;
};

// ---------------------------------------------------------------------------
// Fitted parameters

struct TreeNode {
    std::int32_t feature = -1;  // -1 = leaf
    double threshold = 0.0;
    std::int32_t left = -1;   // node index, x[feature] <= threshold
    std::int32_t right = -1;  // node index, x[feature] >  threshold
    std::uint8_t label = 0;   // leaf class index

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    std::size_t predict(std::span<const double> x) const;  // class index
    bool operator==(const Tree&) const = default;
};

struct ForestModel {
    std::vector<Tree> trees;
    bool operator==(const ForestModel&) const = default;
};

/// One weight vector + bias per class; argmax of w_c . x + b_c.
struct LinearOvrModel {
    std::array<std::vector<double>, kNumClasses> weights;
    std::array<double, kNumClasses> bias{};
    bool operator==(const LinearOvrModel&) const = default;
};

struct LogisticModel {
    std::array<std::vector<double>, kNumClasses> weights;
    std::array<double, kNumClasses> bias{};
    bool operator==(const LogisticModel&) const = default;
};

struct GaussianNbModel {
    std::array<double, kNumClasses> log_prior{};
    std::array<std::vector<double>, kNumClasses> mean;
    std::array<std::vector<double>, kNumClasses> variance;  // smoothed, > 0
    bool operator==(const GaussianNbModel&) const = default;
};

struct MajorityModel {
    UserType label = UserType::male;
    std::array<double, kNumClasses> shares{};  // training class shares
    bool operator==(const MajorityModel&) const = default;
};

using ClassifierParams =
    std::variant<ForestModel, LinearOvrModel, LogisticModel, GaussianNbModel, MajorityModel>;

/// One serializable artifact: preprocessing statistics plus the fitted
/// classifier. Deserializing reproduces bit-identical predictions.
struct TrainedModel {
    static constexpr std::uint32_t kFormatVersion = 1;

    std::uint32_t format_version = kFormatVersion;
    ClassifierConfig config;
    NameOptions name_options;  // carried so scoring uses the training setup
    Preprocessor preprocessor;
    ClassifierParams params;
};

struct Prediction {
    UserType label;
    std::array<double, kNumClasses> scores{};  // class-order diagnostics
};

// ---------------------------------------------------------------------------
// Training / scoring

/// Trains on preprocessed row-major data. Deterministic given (config.seed,
/// data order); forest tree t draws all of its randomness from a stream
/// seeded by mix_seed(seed, t). Every class must be present (except for the
/// majority baseline, which needs one example in total).
ClassifierParams train_classifier(const ClassifierConfig& config,
                                  const std::vector<std::vector<double>>& rows,
                                  const std::vector<UserType>& labels);

/// Scores one preprocessed vector. Ties (equal votes or scores) go to the
/// first class in class order.
Prediction predict_preprocessed(const ClassifierParams& params, std::span<const double> x);

/// apply_preprocessor + predict_preprocessed in one step.
Prediction predict(const TrainedModel& model, const FeatureVector& raw);

struct SplitCandidate {
    std::size_t feature = 0;
    double threshold = 0.0;
    double impurity_decrease = 0.0;
};

/// CART split search. Candidate thresholds are midpoints of consecutive
/// distinct sorted values per candidate feature (a midpoint that rounds onto
/// the right value cannot separate the rows and is skipped). Returns the
/// split minimizing weighted child Gini, ties broken by (lower feature
/// index, lower threshold); nullopt when the node is pure or no candidate
/// feature admits a valid split.
std::optional<SplitCandidate> gini_best_split(const std::vector<std::vector<double>>& rows,
                                              const std::vector<UserType>& labels,
                                              std::span<const std::size_t> row_indices,
                                              std::span<const std::size_t> candidate_features);

}  // namespace usertype
