#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>

#include "usertype/error.hpp"

namespace usertype {

/// Four-way outcome of the name lookup.
enum class NameGenderClass : std::uint8_t { female, male, unisex, none };

const char* to_string(NameGenderClass c);

struct NameEntry {
    std::uint64_t male_freq = 0;
    std::uint64_t female_freq = 0;
    std::string country;  // loaded and preserved, unused by classification
};

/// Frequency table of given names by gender. Keys are lowercase, trimmed.
struct NameDatabase {
    std::unordered_map<std::string, NameEntry> entries;

    const NameEntry* find(const std::string& normalized_token) const {
        auto it = entries.find(normalized_token);
        return it == entries.end() ? nullptr : &it->second;
    }
};

/// CSV format: name,gender(M|F),frequency[,country]. Repeated (name,gender)
/// rows accumulate their frequencies; keys are normalized to lowercase.
NameDatabase load_name_database(const std::string& path);
NameDatabase load_name_database_from(std::istream& in, const std::string& source_name);

enum class NameTokenStrategy {
    first_match,  // first screen-name token present in the database decides
    best_total,   // token with the highest male+female frequency decides
};

struct NameOptions {
    /// Dominance threshold: gender g wins when freq_g / (freq_f + freq_m) >= theta,
    /// otherwise the name is unisex. Must lie in (0.5, 1].
    double theta = 0.9;
    NameTokenStrategy strategy = NameTokenStrategy::first_match;
};

/// Classifies a screen name (not the handle). Tokenizes on whitespace and
/// punctuation, lowercases, and applies the configured token-selection
/// strategy. Returns none when no token is in the database. Total function.
NameGenderClass classify_name(const std::string& screen_name, const NameDatabase& db,
                              const NameOptions& options = {});

/// One-hot over (female, male, unisex); none is the all-zeros code.
std::array<double, 3> encode_name_features(NameGenderClass c);

NameTokenStrategy name_strategy_from_string(const std::string& token);
const char* to_string(NameTokenStrategy s);

}  // namespace usertype
