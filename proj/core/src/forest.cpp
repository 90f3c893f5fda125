#include <algorithm>
#include <cmath>
#include <numeric>

#include "train_detail.hpp"
#include "usertype/rng.hpp"

namespace usertype {

namespace {

std::array<std::uint64_t, kNumClasses> count_classes(const std::vector<UserType>& labels,
                                                     std::span<const std::size_t> rows) {
    std::array<std::uint64_t, kNumClasses> counts{};
    for (std::size_t r : rows) ++counts[class_index(labels[r])];
    return counts;
}

double gini_from_counts(const std::array<std::uint64_t, kNumClasses>& counts, std::size_t n) {
    double g = 1.0;
    for (std::uint64_t c : counts) {
        double p = static_cast<double>(c) / static_cast<double>(n);
        g -= p * p;
    }
    return g;
}

std::size_t majority_class(const std::array<std::uint64_t, kNumClasses>& counts) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < kNumClasses; ++c)
        if (counts[c] > counts[best]) best = c;
    return best;
}

struct TreeBuilder {
    const std::vector<std::vector<double>>& rows;
    const std::vector<UserType>& labels;
    const ForestParams& params;
    std::size_t dim;
    std::size_t mtry;
    std::mt19937_64 rng;
    std::vector<std::size_t> feature_pool;  // permutation of [0, dim)
    Tree tree;

    TreeBuilder(const std::vector<std::vector<double>>& rows_, const std::vector<UserType>& labels_,
                const ForestParams& params_, std::uint64_t seed)
        : rows(rows_), labels(labels_), params(params_), dim(rows_.front().size()),
          mtry(params_.features_per_split > 0
                   ? std::min(params_.features_per_split, dim)
                   : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(dim))))),
          rng(seed), feature_pool(dim) {
        std::iota(feature_pool.begin(), feature_pool.end(), std::size_t{0});
    }

    std::span<const std::size_t> sample_features() {
        for (std::size_t j = 0; j < mtry; ++j) {
            std::size_t k = j + static_cast<std::size_t>(bounded(rng, dim - j));
            std::swap(feature_pool[j], feature_pool[k]);
        }
        return {feature_pool.data(), mtry};
    }

    std::int32_t grow(std::vector<std::size_t>& node_rows, std::size_t depth) {
        auto counts = count_classes(labels, node_rows);
        auto index = static_cast<std::int32_t>(tree.nodes.size());
        TreeNode node;
        node.label = static_cast<std::uint8_t>(majority_class(counts));
        tree.nodes.push_back(node);

        bool pure = gini_from_counts(counts, node_rows.size()) == 0.0;
        bool depth_capped = params.max_depth > 0 && depth >= params.max_depth;
        if (pure || node_rows.size() < 2 * params.min_leaf || depth_capped) return index;

        auto best = gini_best_split(rows, labels, node_rows, sample_features());
        if (!best) return index;

        std::vector<std::size_t> left, right;
        for (std::size_t r : node_rows)
            (rows[r][best->feature] <= best->threshold ? left : right).push_back(r);
        if (left.size() < params.min_leaf || right.size() < params.min_leaf) return index;
        node_rows.clear();
        node_rows.shrink_to_fit();

        tree.nodes[index].feature = static_cast<std::int32_t>(best->feature);
        tree.nodes[index].threshold = best->threshold;
        std::int32_t left_index = grow(left, depth + 1);
        tree.nodes[index].left = left_index;
        std::int32_t right_index = grow(right, depth + 1);
        tree.nodes[index].right = right_index;
        return index;
    }
};

}  // namespace

std::optional<SplitCandidate> gini_best_split(const std::vector<std::vector<double>>& rows,
                                              const std::vector<UserType>& labels,
                                              std::span<const std::size_t> row_indices,
                                              std::span<const std::size_t> candidate_features) {
    const std::size_t n = row_indices.size();
    if (n < 2 || candidate_features.empty()) return std::nullopt;

    auto parent_counts = count_classes(labels, row_indices);
    double parent_gini = gini_from_counts(parent_counts, n);
    if (parent_gini == 0.0) return std::nullopt;

    bool found = false;
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    double best_weighted = 0.0;

    std::vector<std::pair<double, std::uint8_t>> values(n);
    for (std::size_t feature : candidate_features) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = row_indices[i];
            values[i] = {rows[r][feature], static_cast<std::uint8_t>(class_index(labels[r]))};
        }
        std::sort(values.begin(), values.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::array<std::uint64_t, kNumClasses> left_counts{};
        for (std::size_t i = 1; i < n; ++i) {
            ++left_counts[values[i - 1].second];
            if (values[i - 1].first == values[i].first) continue;

            double threshold = std::midpoint(values[i - 1].first, values[i].first);
            // A midpoint that rounds up onto the right value would send both
            // sides left; such a boundary cannot be represented.
            if (!(threshold < values[i].first)) continue;

            std::array<std::uint64_t, kNumClasses> right_counts{};
            for (std::size_t c = 0; c < kNumClasses; ++c)
                right_counts[c] = parent_counts[c] - left_counts[c];
            std::size_t nl = i, nr = n - i;
            double weighted = (static_cast<double>(nl) * gini_from_counts(left_counts, nl) +
                               static_cast<double>(nr) * gini_from_counts(right_counts, nr)) /
                              static_cast<double>(n);

            bool better =
                !found || weighted < best_weighted ||
                (weighted == best_weighted &&
                 (feature < best_feature || (feature == best_feature && threshold < best_threshold)));
            if (better) {
                found = true;
                best_feature = feature;
                best_threshold = threshold;
                best_weighted = weighted;
            }
        }
    }
    if (!found) return std::nullopt;
    return SplitCandidate{best_feature, best_threshold, parent_gini - best_weighted};
}

std::size_t Tree::predict(std::span<const double> x) const {
    std::size_t node = 0;
    while (!nodes[node].is_leaf()) {
        const TreeNode& s = nodes[node];
        node = static_cast<std::size_t>(x[static_cast<std::size_t>(s.feature)] <= s.threshold
                                            ? s.left
                                            : s.right);
    }
    return nodes[node].label;
}

ForestModel train_random_forest(const ClassifierConfig& config,
                                const std::vector<std::vector<double>>& rows,
                                const std::vector<UserType>& labels) {
    const std::size_t n = rows.size();
    ForestModel model;
    model.trees.reserve(config.forest.trees);
    for (std::size_t t = 0; t < config.forest.trees; ++t) {
        // Each tree's randomness derives only from (seed, tree index), so
        // trees could be grown concurrently without changing the model.
        TreeBuilder builder(rows, labels, config.forest, mix_seed(config.seed, t));
        std::vector<std::size_t> bootstrap(n);
        if (config.forest.bootstrap) {
            for (std::size_t i = 0; i < n; ++i)
                bootstrap[i] = static_cast<std::size_t>(bounded(builder.rng, n));
        } else {
            std::iota(bootstrap.begin(), bootstrap.end(), std::size_t{0});
        }
        builder.grow(bootstrap, 0);
        model.trees.push_back(std::move(builder.tree));
    }
    return model;
}

}  // namespace usertype
