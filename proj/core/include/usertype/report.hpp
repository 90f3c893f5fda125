#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "usertype/types.hpp"

namespace usertype {

/// Campaign distribution aggregates. A user is counted once (first record
/// seen, first prediction); each record contributes one tweet plus its
/// retweet/favorite counts to the user's class.
struct DistributionReport {
    struct Row {
        std::uint64_t users = 0;
        std::uint64_t tweets = 0;
        std::uint64_t retweets = 0;
        std::uint64_t favorites = 0;
    };

    std::array<Row, kNumClasses> per_class{};
    Row totals{};
    std::uint64_t records_without_label = 0;  // skipped, tallied

    double user_share(UserType t) const;
    double tweet_share(UserType t) const;
    double retweet_share(UserType t) const;
    double favorite_share(UserType t) const;
};

/// Aggregates records in stream order against a user_id -> class mapping
/// (predictions or gold labels). A labeled user that never appears in the
/// record stream is a DataError; a record whose user has no label is skipped
/// and tallied. Cross-checks its own totals before returning.
DistributionReport build_distribution_report(
    const std::vector<UserRecord>& records,
    const std::unordered_map<std::string, UserType>& label_by_user);

/// Aligned table: Users / Tweets / Retweets / Favorites per class with
/// 2-decimal shares.
std::string render_distribution_table(const DistributionReport& report);

}  // namespace usertype
