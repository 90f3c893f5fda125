#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "usertype/types.hpp"

namespace usertype {

/// Parses one line of the users input (a JSON object per line).
///
/// Required: nonempty "user_id". Absent optional fields get documented
/// defaults (empty text, zero counts, unverified, no image ref). A field
/// that is present but has the wrong type or violates an invariant
/// (negative count) raises RecordParseError; defaults never mask
/// malformed input.
UserRecord parse_user_record(const std::string& line, std::size_t line_number = 0);

/// Inverse of parse_user_record: one JSON object, no trailing newline.
/// parse(serialize(r)) == r for every valid record.
std::string serialize_user_record(const UserRecord& record);

struct StreamStats {
    std::uint64_t lines = 0;    // non-blank input lines seen
    std::uint64_t parsed = 0;   // records handed to the callback
    std::uint64_t skipped = 0;  // malformed lines skipped
};

/// Single-pass reader over line-delimited records. Blank lines are ignored;
/// malformed lines are skipped and tallied (optionally reported through
/// on_bad_line), never fatal.
StreamStats for_each_record(std::istream& in,
                            const std::function<void(UserRecord&&, std::size_t line_number)>& on_record,
                            const std::function<void(std::size_t line_number, const std::string& what)>& on_bad_line = {});

/// Loads every record from a file, skipping and counting malformed lines.
std::pair<std::vector<UserRecord>, StreamStats> load_user_records(const std::string& path);

/// Loads the `user_id,label` CSV. The header row is optional; label tokens
/// are case-insensitive. A user_id repeated with a conflicting label is a
/// DataError; repeating the same label is harmless.
std::unordered_map<std::string, UserType> load_labels(const std::string& path);
std::unordered_map<std::string, UserType> load_labels_from(std::istream& in, const std::string& source_name);

}  // namespace usertype
