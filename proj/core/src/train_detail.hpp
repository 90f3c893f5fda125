#pragma once

#include "usertype/classifiers.hpp"

namespace usertype {

ForestModel train_random_forest(const ClassifierConfig& config,
                                const std::vector<std::vector<double>>& rows,
                                const std::vector<UserType>& labels);

LinearOvrModel train_linear_svm(const ClassifierConfig& config,
                                const std::vector<std::vector<double>>& rows,
                                const std::vector<UserType>& labels);

LogisticModel train_logistic(const ClassifierConfig& config,
                             const std::vector<std::vector<double>>& rows,
                             const std::vector<UserType>& labels);

}  // namespace usertype
