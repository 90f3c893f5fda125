#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>

#include "usertype/error.hpp"
#include "usertype/eval.hpp"

namespace usertype {

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    for (std::size_t t = 0; t < kNumClasses; ++t)
        for (std::size_t p = 0; p < kNumClasses; ++p) counts[t][p] += other.counts[t][p];
    return *this;
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t n = 0;
    for (const auto& row : counts)
        for (std::uint64_t c : row) n += c;
    return n;
}

std::uint64_t ConfusionMatrix::diagonal() const {
    std::uint64_t n = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) n += counts[c][c];
    return n;
}

namespace {

double safe_ratio(double numerator, double denominator) {
    return denominator == 0.0 ? 0.0 : numerator / denominator;
}

void finalize_means(EvaluationReport& report) {
    double inv_k = 1.0 / static_cast<double>(report.folds.size());
    for (const FoldResult& fold : report.folds) {
        report.mean.accuracy += fold.metrics.accuracy * inv_k;
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            report.mean.per_class[c].precision += fold.metrics.per_class[c].precision * inv_k;
            report.mean.per_class[c].recall += fold.metrics.per_class[c].recall * inv_k;
            report.mean.per_class[c].f1 += fold.metrics.per_class[c].f1 * inv_k;
        }
    }
}

}  // namespace

MetricsSummary metrics_from_confusion(const ConfusionMatrix& cm) {
    std::uint64_t total = cm.total();
    if (total == 0) throw DataError("empty confusion matrix");

    MetricsSummary summary;
    summary.accuracy = static_cast<double>(cm.diagonal()) / static_cast<double>(total);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        std::uint64_t tp = cm.counts[c][c];
        std::uint64_t fp = 0, fn = 0;
        for (std::size_t other = 0; other < kNumClasses; ++other) {
            if (other == c) continue;
            fp += cm.counts[other][c];
            fn += cm.counts[c][other];
        }
        ClassMetrics& m = summary.per_class[c];
        m.precision = safe_ratio(static_cast<double>(tp), static_cast<double>(tp + fp));
        m.recall = safe_ratio(static_cast<double>(tp), static_cast<double>(tp + fn));
        m.f1 = safe_ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
    }
    return summary;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const UserType> labels,
                                                       std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("fold count must be at least 2");

    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[class_index(labels[i])].push_back(i);
    for (std::size_t c = 0; c < kNumClasses; ++c)
        if (!by_class[c].empty() && by_class[c].size() < k)
            throw DataError(std::string("class '") + to_string(kClassOrder[c]) + "' has " +
                            std::to_string(by_class[c].size()) + " examples, fewer than " +
                            std::to_string(k) + " folds");

    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::vector<std::size_t>& indices : by_class) {
        // Fisher-Yates, then striping keeps per-class fold sizes within one.
        for (std::size_t i = indices.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(rng, i));
            std::swap(indices[i - 1], indices[j]);
        }
        for (std::size_t i = 0; i < indices.size(); ++i) folds[i % k].push_back(indices[i]);
    }
    for (std::vector<std::size_t>& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

EvaluationReport cross_validate(const AssembledDataset& data, const ClassifierConfig& config,
                                NormalizationMode mode, std::size_t k, std::uint64_t seed,
                                const FoldObserver& observer) {
    if (data.vectors.size() != data.labels.size())
        throw InternalError("dataset vectors and labels disagree in length");

    EvaluationReport report;
    report.method = to_string(config.algorithm);
    report.k = k;
    report.seed = seed;

    auto folds = stratified_folds(data.labels, k, seed);

    for (std::size_t fold = 0; fold < k; ++fold) {
        const std::vector<std::size_t>& test_indices = folds[fold];
        std::vector<std::size_t> train_indices;
        train_indices.reserve(data.labels.size() - test_indices.size());
        for (std::size_t other = 0; other < k; ++other) {
            if (other == fold) continue;
            train_indices.insert(train_indices.end(), folds[other].begin(), folds[other].end());
        }
        std::sort(train_indices.begin(), train_indices.end());

        std::vector<FeatureVector> train_vectors;
        std::vector<UserType> train_labels;
        train_vectors.reserve(train_indices.size());
        train_labels.reserve(train_indices.size());
        for (std::size_t i : train_indices) {
            train_vectors.push_back(data.vectors[i]);
            train_labels.push_back(data.labels[i]);
        }

        TrainedModel model;
        model.config = config;
        model.config.seed = fold_seed(seed, fold);
        model.preprocessor = fit_preprocessor(train_vectors, data.schema, mode);

        std::vector<std::vector<double>> train_rows;
        train_rows.reserve(train_vectors.size());
        for (const FeatureVector& v : train_vectors)
            train_rows.push_back(apply_preprocessor(model.preprocessor, v));
        model.params = train_classifier(model.config, train_rows, train_labels);

        FoldResult result;
        for (std::size_t i : test_indices)
            result.confusion.add(data.labels[i], predict(model, data.vectors[i]).label);
        result.metrics = metrics_from_confusion(result.confusion);

        if (observer) observer(fold, train_indices, test_indices, model);

        report.pooled += result.confusion;
        report.folds.push_back(std::move(result));
    }

    finalize_means(report);
    return report;
}

EvaluationReport baseline_name_only(std::span<const std::string> screen_names,
                                    std::span<const UserType> labels, const NameDatabase& db,
                                    const NameOptions& options, std::size_t k, std::uint64_t seed) {
    if (screen_names.size() != labels.size())
        throw InternalError("screen names and labels disagree in length");

    EvaluationReport report;
    report.method = "name_baseline";
    report.k = k;
    report.seed = seed;

    auto folds = stratified_folds(labels, k, seed);

    for (std::size_t fold = 0; fold < k; ++fold) {
        std::uint64_t train_male = 0, train_female = 0;
        for (std::size_t other = 0; other < k; ++other) {
            if (other == fold) continue;
            for (std::size_t i : folds[other]) {
                if (labels[i] == UserType::male) ++train_male;
                if (labels[i] == UserType::female) ++train_female;
            }
        }
        UserType fallback = train_female > train_male ? UserType::female : UserType::male;

        FoldResult result;
        for (std::size_t i : folds[fold]) {
            UserType predicted;
            switch (classify_name(screen_names[i], db, options)) {
                case NameGenderClass::female: predicted = UserType::female; break;
                case NameGenderClass::male: predicted = UserType::male; break;
                default: predicted = fallback; break;
            }
            result.confusion.add(labels[i], predicted);
        }
        result.metrics = metrics_from_confusion(result.confusion);
        report.pooled += result.confusion;
        report.folds.push_back(std::move(result));
    }

    finalize_means(report);
    return report;
}

std::string render_report_table(std::span<const EvaluationReport> reports) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-22s %-10s %9s %9s %9s %9s\n", "Method", "Features",
                  "Accuracy", "F1-Org", "F1-Female", "F1-Male");
    out += line;
    out += std::string(72, '-') + "\n";
    for (const EvaluationReport& r : reports) {
        const auto& pc = r.mean.per_class;
        std::snprintf(line, sizeof line, "%-22s %-10s %8.2f%% %8.2f%% %8.2f%% %8.2f%%\n",
                      r.method.c_str(), to_string(r.features), 100.0 * r.mean.accuracy,
                      100.0 * pc[class_index(UserType::organization)].f1,
                      100.0 * pc[class_index(UserType::female)].f1,
                      100.0 * pc[class_index(UserType::male)].f1);
        out += line;
    }
    return out;
}

}  // namespace usertype
