#include "usertype/record_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>

#include <json.hpp>

namespace usertype {

namespace {

using nlohmann::json;

std::string get_string(const json& obj, const char* key, std::size_t line_number) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    if (!it->is_string())
        throw RecordParseError(std::string("field '") + key + "' must be a string", line_number);
    return it->get<std::string>();
}

std::int64_t get_count(const json& obj, const char* key, std::size_t line_number) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return 0;
    if (!it->is_number_integer())
        throw RecordParseError(std::string("field '") + key + "' must be an integer", line_number);
    auto value = it->get<std::int64_t>();
    if (value < 0)
        throw RecordParseError(std::string("field '") + key + "' must be >= 0", line_number);
    return value;
}

void trim(std::string& s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
}

}  // namespace

UserRecord parse_user_record(const std::string& line, std::size_t line_number) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object())
        throw RecordParseError("malformed record (expected one JSON object)", line_number);

    UserRecord r;
    r.user_id = get_string(obj, "user_id", line_number);
    if (r.user_id.empty()) throw RecordParseError("missing or empty user_id", line_number);

    r.screen_name = get_string(obj, "screen_name", line_number);
    r.handle = get_string(obj, "handle", line_number);
    r.description = get_string(obj, "description", line_number);
    r.tweet_text = get_string(obj, "tweet_text", line_number);
    r.friends_count = get_count(obj, "friends_count", line_number);
    r.followers_count = get_count(obj, "followers_count", line_number);
    r.statuses_count = get_count(obj, "statuses_count", line_number);
    r.retweet_count = get_count(obj, "retweet_count", line_number);
    r.favorite_count = get_count(obj, "favorite_count", line_number);

    if (auto it = obj.find("verified"); it != obj.end() && !it->is_null()) {
        if (!it->is_boolean())
            throw RecordParseError("field 'verified' must be a boolean", line_number);
        r.verified = it->get<bool>();
    }

    std::string ref = get_string(obj, "image_vector_ref", line_number);
    if (!ref.empty()) r.image_vector_ref = std::move(ref);
    return r;
}

std::string serialize_user_record(const UserRecord& r) {
    json obj{
        {"user_id", r.user_id},
        {"screen_name", r.screen_name},
        {"handle", r.handle},
        {"description", r.description},
        {"tweet_text", r.tweet_text},
        {"friends_count", r.friends_count},
        {"followers_count", r.followers_count},
        {"statuses_count", r.statuses_count},
        {"verified", r.verified},
        {"retweet_count", r.retweet_count},
        {"favorite_count", r.favorite_count},
    };
    if (r.image_vector_ref) obj["image_vector_ref"] = *r.image_vector_ref;
    return obj.dump();
}

StreamStats for_each_record(
    std::istream& in, const std::function<void(UserRecord&&, std::size_t)>& on_record,
    const std::function<void(std::size_t, const std::string&)>& on_bad_line) {
    StreamStats stats;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++stats.lines;
        try {
            UserRecord record = parse_user_record(line, line_number);
            ++stats.parsed;
            on_record(std::move(record), line_number);
        } catch (const RecordParseError& e) {
            ++stats.skipped;
            if (on_bad_line) on_bad_line(line_number, e.what());
        }
    }
    return stats;
}

std::pair<std::vector<UserRecord>, StreamStats> load_user_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open users file: " + path);
    std::vector<UserRecord> records;
    StreamStats stats =
        for_each_record(in, [&](UserRecord&& r, std::size_t) { records.push_back(std::move(r)); });
    return {std::move(records), stats};
}

std::unordered_map<std::string, UserType> load_labels_from(std::istream& in,
                                                           const std::string& source_name) {
    std::unordered_map<std::string, UserType> labels;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError(source_name + ":" + std::to_string(line_number) +
                            ": expected 'user_id,label'");
        std::string user_id = line.substr(0, comma);
        std::string token = line.substr(comma + 1);
        trim(user_id);
        trim(token);

        std::string token_lower(token);
        std::transform(token_lower.begin(), token_lower.end(), token_lower.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (line_number == 1 && user_id == "user_id" && token_lower == "label") continue;

        UserType label;
        try {
            label = user_type_from_string(token);
        } catch (const ConfigError& e) {
            throw DataError(source_name + ":" + std::to_string(line_number) + ": " + e.what());
        }
        auto [it, inserted] = labels.emplace(user_id, label);
        if (!inserted && it->second != label)
            throw DataError(source_name + ":" + std::to_string(line_number) +
                            ": conflicting labels for user_id '" + user_id + "'");
    }
    return labels;
}

std::unordered_map<std::string, UserType> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open labels file: " + path);
    return load_labels_from(in, path);
}

}  // namespace usertype
