#include <algorithm>
#include <cmath>

#include "train_detail.hpp"
#include "usertype/error.hpp"

namespace usertype {

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::random_forest: return "random_forest";
        case Algorithm::linear_svm_ovr: return "linear_svm_ovr";
        case Algorithm::logistic_regression: return "logistic_regression";
        case Algorithm::gaussian_nb: return "gaussian_nb";
        case Algorithm::majority: return "majority";
    }
    throw InternalError("unknown algorithm value");
}

Algorithm algorithm_from_string(const std::string& token) {
    if (token == "random_forest") return Algorithm::random_forest;
    if (token == "linear_svm_ovr") return Algorithm::linear_svm_ovr;
    if (token == "logistic_regression") return Algorithm::logistic_regression;
    if (token == "gaussian_nb") return Algorithm::gaussian_nb;
    if (token == "majority") return Algorithm::majority;
    throw ConfigError("unknown classifier '" + token + "'");
}

namespace {

std::array<std::uint64_t, kNumClasses> class_counts(const std::vector<UserType>& labels) {
    std::array<std::uint64_t, kNumClasses> counts{};
    for (UserType y : labels) ++counts[class_index(y)];
    return counts;
}

MajorityModel train_majority(const std::vector<UserType>& labels) {
    auto counts = class_counts(labels);
    std::size_t best = 0;
    for (std::size_t c = 1; c < kNumClasses; ++c)
        if (counts[c] > counts[best]) best = c;
    MajorityModel model;
    model.label = kClassOrder[best];
    for (std::size_t c = 0; c < kNumClasses; ++c)
        model.shares[c] = static_cast<double>(counts[c]) / static_cast<double>(labels.size());
    return model;
}

GaussianNbModel train_gaussian_nb(const ClassifierConfig& config,
                                  const std::vector<std::vector<double>>& rows,
                                  const std::vector<UserType>& labels) {
    const std::size_t n = rows.size();
    const std::size_t dim = rows.front().size();
    auto counts = class_counts(labels);

    GaussianNbModel model;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        model.mean[c].assign(dim, 0.0);
        model.variance[c].assign(dim, 0.0);
        model.log_prior[c] =
            std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double>& mu = model.mean[class_index(labels[i])];
        for (std::size_t d = 0; d < dim; ++d) mu[d] += rows[i][d];
    }
    for (std::size_t c = 0; c < kNumClasses; ++c)
        for (double& m : model.mean[c]) m /= static_cast<double>(counts[c]);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = class_index(labels[i]);
        for (std::size_t d = 0; d < dim; ++d) {
            double diff = rows[i][d] - model.mean[c][d];
            model.variance[c][d] += diff * diff;
        }
    }
    for (std::size_t c = 0; c < kNumClasses; ++c)
        for (double& v : model.variance[c]) v /= static_cast<double>(counts[c]);

    // Smoothing scaled to the pooled spread of the data; the fallback keeps
    // the variance strictly positive when every feature is constant.
    double max_variance = 0.0;
    std::vector<double> pooled_mean(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) pooled_mean[d] += rows[i][d];
    for (double& m : pooled_mean) m /= static_cast<double>(n);
    for (std::size_t d = 0; d < dim; ++d) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double diff = rows[i][d] - pooled_mean[d];
            acc += diff * diff;
        }
        max_variance = std::max(max_variance, acc / static_cast<double>(n));
    }
    double eps = max_variance > 0.0 ? config.nb.smoothing_ratio * max_variance
                                    : config.nb.smoothing_ratio;
    for (std::size_t c = 0; c < kNumClasses; ++c)
        for (double& v : model.variance[c]) v += eps;
    return model;
}

std::size_t argmax_scores(const std::array<double, kNumClasses>& scores) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < kNumClasses; ++c)
        if (scores[c] > scores[best]) best = c;
    return best;
}

Prediction from_scores(const std::array<double, kNumClasses>& scores) {
    return {kClassOrder[argmax_scores(scores)], scores};
}

double dot(const std::vector<double>& w, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t d = 0; d < w.size(); ++d) s += w[d] * x[d];
    return s;
}

struct Scorer {
    std::span<const double> x;

    Prediction operator()(const ForestModel& m) const {
        std::array<double, kNumClasses> votes{};
        for (const Tree& tree : m.trees) votes[tree.predict(x)] += 1.0;
        std::size_t best = argmax_scores(votes);
        for (double& v : votes) v /= static_cast<double>(m.trees.size());
        return {kClassOrder[best], votes};
    }

    Prediction operator()(const LinearOvrModel& m) const {
        std::array<double, kNumClasses> margins{};
        for (std::size_t c = 0; c < kNumClasses; ++c)
            margins[c] = dot(m.weights[c], x) + m.bias[c];
        return from_scores(margins);
    }

    Prediction operator()(const LogisticModel& m) const {
        std::array<double, kNumClasses> z{};
        for (std::size_t c = 0; c < kNumClasses; ++c)
            z[c] = dot(m.weights[c], x) + m.bias[c];
        double zmax = std::max({z[0], z[1], z[2]});
        double norm = 0.0;
        for (double& zc : z) {
            zc = std::exp(zc - zmax);
            norm += zc;
        }
        for (double& zc : z) zc /= norm;
        return from_scores(z);
    }

    Prediction operator()(const GaussianNbModel& m) const {
        constexpr double kLogTwoPi = 1.8378770664093453;
        std::array<double, kNumClasses> log_post{};
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            double acc = m.log_prior[c];
            const std::vector<double>& mu = m.mean[c];
            const std::vector<double>& var = m.variance[c];
            for (std::size_t d = 0; d < mu.size(); ++d) {
                double diff = x[d] - mu[d];
                acc -= 0.5 * (kLogTwoPi + std::log(var[d]) + diff * diff / var[d]);
            }
            log_post[c] = acc;
        }
        double zmax = std::max({log_post[0], log_post[1], log_post[2]});
        double norm = 0.0;
        for (double& lp : log_post) {
            lp = std::exp(lp - zmax);
            norm += lp;
        }
        for (double& lp : log_post) lp /= norm;
        return from_scores(log_post);
    }

    Prediction operator()(const MajorityModel& m) const { return {m.label, m.shares}; }
};

}  // namespace

ClassifierParams train_classifier(const ClassifierConfig& config,
                                  const std::vector<std::vector<double>>& rows,
                                  const std::vector<UserType>& labels) {
    if (rows.empty()) throw DataError("training set is empty");
    if (rows.size() != labels.size())
        throw InternalError("training rows and labels disagree in length");
    const std::size_t dim = rows.front().size();
    if (dim == 0) throw DataError("training rows have zero features");
    for (const std::vector<double>& row : rows)
        if (row.size() != dim) throw InternalError("training rows disagree in width");

    if (config.algorithm != Algorithm::majority) {
        auto counts = class_counts(labels);
        for (std::size_t c = 0; c < kNumClasses; ++c)
            if (counts[c] == 0)
                throw DataError(std::string("training set has no '") +
                                to_string(kClassOrder[c]) + "' examples");
    }

    switch (config.algorithm) {
        case Algorithm::random_forest: return train_random_forest(config, rows, labels);
        case Algorithm::linear_svm_ovr: return train_linear_svm(config, rows, labels);
        case Algorithm::logistic_regression: return train_logistic(config, rows, labels);
        case Algorithm::gaussian_nb: return train_gaussian_nb(config, rows, labels);
        case Algorithm::majority: return train_majority(labels);
    }
    throw InternalError("unknown algorithm value");
}

Prediction predict_preprocessed(const ClassifierParams& params, std::span<const double> x) {
    return std::visit(Scorer{x}, params);
}

Prediction predict(const TrainedModel& model, const FeatureVector& raw) {
    std::vector<double> x = apply_preprocessor(model.preprocessor, raw);
    return predict_preprocessed(model.params, x);
}

}  // namespace usertype
