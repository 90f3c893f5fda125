#include <algorithm>
#include <cmath>

#include "train_detail.hpp"

namespace usertype {

namespace {

double dot(const std::vector<double>& w, const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t d = 0; d < w.size(); ++d) s += w[d] * x[d];
    return s;
}

}  // namespace

LinearOvrModel train_linear_svm(const ClassifierConfig& config,
                                const std::vector<std::vector<double>>& rows,
                                const std::vector<UserType>& labels) {
    const std::size_t n = rows.size();
    const std::size_t dim = rows.front().size();
    const double lambda = config.svm.lambda;

    LinearOvrModel model;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        std::vector<double> w(dim, 0.0);
        double b = 0.0;
        std::uint64_t t = 0;
        for (std::size_t epoch = 0; epoch < config.svm.epochs; ++epoch) {
            for (std::size_t i = 0; i < n; ++i) {
                ++t;
                double eta = 1.0 / (lambda * static_cast<double>(t));
                double y = class_index(labels[i]) == c ? 1.0 : -1.0;
                bool violated = y * (dot(w, rows[i]) + b) < 1.0;
                // The bias rides along as a regularized weight on a constant
                // input of 1, so it shrinks on the same schedule as w.
                double shrink = 1.0 - 1.0 / static_cast<double>(t);
                for (double& wd : w) wd *= shrink;
                b *= shrink;
                if (violated) {
                    const std::vector<double>& x = rows[i];
                    double step = eta * y;
                    for (std::size_t d = 0; d < dim; ++d) w[d] += step * x[d];
                    b += step;
                }
            }
        }
        model.weights[c] = std::move(w);
        model.bias[c] = b;
    }
    return model;
}

LogisticModel train_logistic(const ClassifierConfig& config,
                             const std::vector<std::vector<double>>& rows,
                             const std::vector<UserType>& labels) {
    const std::size_t n = rows.size();
    const std::size_t dim = rows.front().size();
    const double lambda = config.logistic.lambda;
    const double inv_n = 1.0 / static_cast<double>(n);

    LogisticModel model;
    for (auto& w : model.weights) w.assign(dim, 0.0);
    model.bias = {0.0, 0.0, 0.0};

    std::array<std::vector<double>, kNumClasses> grad;
    for (auto& g : grad) g.assign(dim, 0.0);

    for (std::size_t iter = 0; iter < config.logistic.iterations; ++iter) {
        for (auto& g : grad) std::fill(g.begin(), g.end(), 0.0);
        std::array<double, kNumClasses> grad_bias{};

        for (std::size_t i = 0; i < n; ++i) {
            const std::vector<double>& x = rows[i];
            std::array<double, kNumClasses> z;
            for (std::size_t c = 0; c < kNumClasses; ++c)
                z[c] = dot(model.weights[c], x) + model.bias[c];
            double zmax = std::max({z[0], z[1], z[2]});
            double norm = 0.0;
            std::array<double, kNumClasses> p;
            for (std::size_t c = 0; c < kNumClasses; ++c) {
                p[c] = std::exp(z[c] - zmax);
                norm += p[c];
            }
            std::size_t truth = class_index(labels[i]);
            for (std::size_t c = 0; c < kNumClasses; ++c) {
                double delta = p[c] / norm - (c == truth ? 1.0 : 0.0);
                grad_bias[c] += delta;
                std::vector<double>& g = grad[c];
                for (std::size_t d = 0; d < dim; ++d) g[d] += delta * x[d];
            }
        }

        for (std::size_t c = 0; c < kNumClasses; ++c) {
            std::vector<double>& w = model.weights[c];
            const std::vector<double>& g = grad[c];
            for (std::size_t d = 0; d < dim; ++d)
                w[d] -= config.logistic.step * (g[d] * inv_n + lambda * w[d]);
            model.bias[c] -= config.logistic.step * grad_bias[c] * inv_n;
        }
    }
    return model;
}

}  // namespace usertype
