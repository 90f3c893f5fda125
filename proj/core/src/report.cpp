#include <cstdio>
#include <unordered_set>

#include "usertype/error.hpp"
#include "usertype/report.hpp"

namespace usertype {

namespace {

double share(std::uint64_t part, std::uint64_t whole) {
    return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

double DistributionReport::user_share(UserType t) const {
    return share(per_class[class_index(t)].users, totals.users);
}
double DistributionReport::tweet_share(UserType t) const {
    return share(per_class[class_index(t)].tweets, totals.tweets);
}
double DistributionReport::retweet_share(UserType t) const {
    return share(per_class[class_index(t)].retweets, totals.retweets);
}
double DistributionReport::favorite_share(UserType t) const {
    return share(per_class[class_index(t)].favorites, totals.favorites);
}

DistributionReport build_distribution_report(
    const std::vector<UserRecord>& records,
    const std::unordered_map<std::string, UserType>& label_by_user) {
    DistributionReport report;
    std::unordered_set<std::string> seen_users;
    std::unordered_set<std::string> matched_users;
    seen_users.reserve(records.size());

    for (const UserRecord& record : records) {
        auto it = label_by_user.find(record.user_id);
        if (it == label_by_user.end()) {
            ++report.records_without_label;
            continue;
        }
        DistributionReport::Row& row = report.per_class[class_index(it->second)];
        if (seen_users.insert(record.user_id).second) {
            ++row.users;
            matched_users.insert(record.user_id);
        }
        row.tweets += 1;
        row.retweets += static_cast<std::uint64_t>(record.retweet_count);
        row.favorites += static_cast<std::uint64_t>(record.favorite_count);
    }

    if (matched_users.size() != label_by_user.size()) {
        for (const auto& [user_id, label] : label_by_user) {
            if (!matched_users.contains(user_id))
                throw DataError("labeled user '" + user_id + "' has no records");
        }
    }

    for (const DistributionReport::Row& row : report.per_class) {
        report.totals.users += row.users;
        report.totals.tweets += row.tweets;
        report.totals.retweets += row.retweets;
        report.totals.favorites += row.favorites;
    }
    if (report.totals.users != label_by_user.size())
        throw InternalError("distribution user total disagrees with the label map");
    return report;
}

std::string render_distribution_table(const DistributionReport& report) {
    std::string out;
    char line[200];
    std::snprintf(line, sizeof line, "%-14s %10s %8s %12s %8s %12s %8s %12s %8s\n", "Class",
                  "Users", "%", "Tweets", "%", "Retweets", "%", "Favorites", "%");
    out += line;
    out += std::string(99, '-') + "\n";

    auto emit = [&](const char* name, const DistributionReport::Row& row, double users_pct,
                    double tweets_pct, double retweets_pct, double favorites_pct) {
        std::snprintf(line, sizeof line,
                      "%-14s %10llu %7.2f%% %12llu %7.2f%% %12llu %7.2f%% %12llu %7.2f%%\n", name,
                      static_cast<unsigned long long>(row.users), users_pct,
                      static_cast<unsigned long long>(row.tweets), tweets_pct,
                      static_cast<unsigned long long>(row.retweets), retweets_pct,
                      static_cast<unsigned long long>(row.favorites), favorites_pct);
        out += line;
    };

    for (UserType t : kClassOrder) {
        emit(to_string(t), report.per_class[class_index(t)], 100.0 * report.user_share(t),
             100.0 * report.tweet_share(t), 100.0 * report.retweet_share(t),
             100.0 * report.favorite_share(t));
    }
    emit("total", report.totals, 100.0, 100.0, 100.0, 100.0);
    if (report.records_without_label > 0) {
        std::snprintf(line, sizeof line, "(%llu records without a label were skipped)\n",
                      static_cast<unsigned long long>(report.records_without_label));
        out += line;
    }
    return out;
}

}  // namespace usertype
