#include "usertype/types.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace usertype {

const char* to_string(UserType t) {
    switch (t) {
        case UserType::male: return "male";
        case UserType::female: return "female";
        case UserType::organization: return "organization";
    }
    throw InternalError("unreachable UserType value");
}

UserType user_type_from_string(const std::string& token) {
    std::string lower(token);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "male") return UserType::male;
    if (lower == "female") return UserType::female;
    if (lower == "organization") return UserType::organization;
    throw ConfigError("unknown user type label '" + token +
                      "' (expected male, female or organization)");
}

ClassDistribution dataset_summary(const std::vector<UserType>& labels) {
    if (labels.empty()) throw DataError("dataset_summary: empty dataset");
    ClassDistribution dist;
    for (UserType t : labels) ++dist.counts[class_index(t)];
    dist.total = labels.size();
    return dist;
}

ClassDistribution dataset_summary(const std::vector<LabeledExample>& examples) {
    std::vector<UserType> labels;
    labels.reserve(examples.size());
    for (const auto& ex : examples) labels.push_back(ex.label);
    return dataset_summary(labels);
}

std::string format_distribution(const ClassDistribution& dist) {
    std::string out;
    char buf[96];
    for (UserType t : kClassOrder) {
        std::snprintf(buf, sizeof(buf), "%-12s %8llu (%6.2f%%)\n", to_string(t),
                      static_cast<unsigned long long>(dist.counts[class_index(t)]),
                      100.0 * dist.share(t));
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "%-12s %8llu\n", "total",
                  static_cast<unsigned long long>(dist.total));
    out += buf;
    return out;
}

}  // namespace usertype
