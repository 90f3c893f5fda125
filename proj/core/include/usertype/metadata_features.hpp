#pragma once

#include <array>

#include "usertype/types.hpp"

namespace usertype {

/// Order is pinned: (friends, followers, statuses, verified).
inline constexpr std::size_t kMetadataDims = 4;

/// Pure projection of the four profile-metadata fields; verified maps to {0,1}.
inline std::array<double, kMetadataDims> extract_metadata_features(const UserRecord& record) {
    return {static_cast<double>(record.friends_count),
            static_cast<double>(record.followers_count),
            static_cast<double>(record.statuses_count),
            record.verified ? 1.0 : 0.0};
}

}  // namespace usertype
