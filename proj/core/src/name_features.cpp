#include "usertype/name_features.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <vector>

namespace usertype {

namespace {

std::string normalize_token(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Screen-name tokens: runs of alphanumerics (non-ASCII bytes count as word
// characters); anything else, apostrophes included, separates tokens.
std::vector<std::string> split_name_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c >= 0x80) {
            current += static_cast<char>(std::tolower(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> split_csv_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

}  // namespace

const char* to_string(NameGenderClass c) {
    switch (c) {
        case NameGenderClass::female: return "female";
        case NameGenderClass::male: return "male";
        case NameGenderClass::unisex: return "unisex";
        case NameGenderClass::none: return "none";
    }
    throw InternalError("unreachable NameGenderClass value");
}

NameDatabase load_name_database_from(std::istream& in, const std::string& source_name) {
    NameDatabase db;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        auto fields = split_csv_fields(line);
        auto fail = [&](const std::string& what) -> DataError {
            return DataError(source_name + ":" + std::to_string(line_number) + ": " + what);
        };
        if (fields.size() < 3 || fields.size() > 4)
            throw fail("expected 'name,gender,frequency[,country]'");

        std::string name = normalize_token(fields[0]);
        std::string gender = normalize_token(fields[1]);
        std::string freq_text = normalize_token(fields[2]);
        if (line_number == 1 && name == "name" && gender == "gender") continue;
        if (name.empty()) throw fail("empty name");
        if (gender != "m" && gender != "f") throw fail("unknown gender token '" + fields[1] + "'");

        std::uint64_t freq = 0;
        auto [end, ec] = std::from_chars(freq_text.data(), freq_text.data() + freq_text.size(), freq);
        if (ec != std::errc() || end != freq_text.data() + freq_text.size())
            throw fail("non-numeric frequency '" + fields[2] + "'");

        NameEntry& entry = db.entries[name];
        if (gender == "f")
            entry.female_freq += freq;
        else
            entry.male_freq += freq;
        if (fields.size() == 4 && entry.country.empty()) entry.country = normalize_token(fields[3]);
    }
    return db;
}

NameDatabase load_name_database(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open name database: " + path);
    return load_name_database_from(in, path);
}

NameGenderClass classify_name(const std::string& screen_name, const NameDatabase& db,
                              const NameOptions& options) {
    if (!(options.theta > 0.5 && options.theta <= 1.0))
        throw ConfigError("name dominance threshold must lie in (0.5, 1]");

    const NameEntry* chosen = nullptr;
    if (options.strategy == NameTokenStrategy::first_match) {
        for (const auto& token : split_name_tokens(screen_name)) {
            if (const NameEntry* entry = db.find(token)) {
                chosen = entry;
                break;
            }
        }
    } else {
        std::uint64_t best_total = 0;
        for (const auto& token : split_name_tokens(screen_name)) {
            const NameEntry* entry = db.find(token);
            if (!entry) continue;
            std::uint64_t total = entry->male_freq + entry->female_freq;
            if (total > best_total) {  // earliest token wins ties
                best_total = total;
                chosen = entry;
            }
        }
    }
    if (!chosen) return NameGenderClass::none;

    double total = static_cast<double>(chosen->male_freq + chosen->female_freq);
    if (static_cast<double>(chosen->female_freq) / total >= options.theta)
        return NameGenderClass::female;
    if (static_cast<double>(chosen->male_freq) / total >= options.theta)
        return NameGenderClass::male;
    return NameGenderClass::unisex;
}

std::array<double, 3> encode_name_features(NameGenderClass c) {
    switch (c) {
        case NameGenderClass::female: return {1.0, 0.0, 0.0};
        case NameGenderClass::male: return {0.0, 1.0, 0.0};
        case NameGenderClass::unisex: return {0.0, 0.0, 1.0};
        case NameGenderClass::none: return {0.0, 0.0, 0.0};
    }
    throw InternalError("unreachable NameGenderClass value");
}

NameTokenStrategy name_strategy_from_string(const std::string& token) {
    if (token == "first") return NameTokenStrategy::first_match;
    if (token == "best-total") return NameTokenStrategy::best_total;
    throw ConfigError("unknown name token strategy '" + token + "' (expected first or best-total)");
}

const char* to_string(NameTokenStrategy s) {
    return s == NameTokenStrategy::first_match ? "first" : "best-total";
}

}  // namespace usertype
