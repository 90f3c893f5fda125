#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "usertype/error.hpp"

namespace usertype {

/// The three-way target class. The order (Male, Female, Organization) is
/// fixed; it defines score/confusion-matrix layout and every tie-break.
enum class UserType : std::uint8_t { male = 0, female = 1, organization = 2 };

inline constexpr std::size_t kNumClasses = 3;

inline constexpr std::array<UserType, kNumClasses> kClassOrder = {
    UserType::male, UserType::female, UserType::organization};

inline constexpr std::size_t class_index(UserType t) {
    return static_cast<std::size_t>(t);
}

const char* to_string(UserType t);

/// Case-insensitive {male, female, organization}; throws ConfigError otherwise.
UserType user_type_from_string(const std::string& token);

/// One tweet plus the profile snapshot attached to it. Everything the
/// feature extractors consume comes from here.
struct UserRecord {
    std::string user_id;
    std::string screen_name;
    std::string handle;
    std::string description;
    std::string tweet_text;
    std::int64_t friends_count = 0;
    std::int64_t followers_count = 0;
    std::int64_t statuses_count = 0;
    bool verified = false;
    std::int64_t retweet_count = 0;
    std::int64_t favorite_count = 0;
    /// Key/path for the profile-image probability vector. Empty = no image.
    std::optional<std::string> image_vector_ref;

    bool operator==(const UserRecord&) const = default;
};

struct LabeledExample {
    UserRecord record;
    UserType label;
};

/// Per-class counts and shares over a labeled dataset.
struct ClassDistribution {
    std::array<std::uint64_t, kNumClasses> counts{};
    std::uint64_t total = 0;

    double share(UserType t) const {
        return static_cast<double>(counts[class_index(t)]) / static_cast<double>(total);
    }
};

ClassDistribution dataset_summary(const std::vector<LabeledExample>& examples);
ClassDistribution dataset_summary(const std::vector<UserType>& labels);

/// Renders "Male 353 (24.62%)  Female 451 (31.45%) ..." with 2-decimal shares.
std::string format_distribution(const ClassDistribution& dist);

}  // namespace usertype
