#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "usertype/error.hpp"

namespace usertype {

/// Word-category lexicon: an ordered category table plus a mapping from
/// literal words and trailing-`*` prefix patterns to category id sets.
/// Category order is fixed at load time and defines feature order.
struct LexiconDictionary {
    struct Category {
        std::uint32_t id;
        std::string name;
    };

    std::vector<Category> categories;
    /// literal word -> indexes into `categories`
    std::unordered_map<std::string, std::vector<std::uint32_t>> literals;
    /// wildcard prefix (the part before `*`) -> indexes into `categories`
    std::unordered_map<std::string, std::vector<std::uint32_t>> wildcards;

    std::size_t category_count() const { return categories.size(); }
};

/// File format, UTF-8, tab-separated:
///   %
///   id<TAB>category_name
///   %
///   pattern<TAB>id[<TAB>id...]
/// Patterns may carry one trailing `*` (prefix match). Duplicate category
/// ids, references to unknown ids and malformed wildcards are errors.
LexiconDictionary load_lexicon(const std::string& path);
LexiconDictionary load_lexicon_from(std::istream& in, const std::string& source_name);

/// Lowercased bag-of-words tokenizer for tweets and profile bios.
/// URLs (`http`-prefixed chunks) and @-mentions are dropped, a hashtag's `#`
/// is stripped and its body kept, apostrophes survive only between word
/// characters, everything else splits tokens.
std::vector<std::string> tokenize(const std::string& text);

struct CategoryProfile {
    std::uint64_t word_count = 0;
    /// Per category, in lexicon order: 100 * matched_tokens / word_count.
    std::vector<double> percentages;
};

/// Counts category hits over the token list. Each token is attributed to at
/// most one pattern: an exact literal if there is one, otherwise the longest
/// matching wildcard prefix; the token then counts once per category that
/// pattern maps to.
CategoryProfile category_profile(const std::vector<std::string>& tokens,
                                 const LexiconDictionary& lexicon);

/// [tweet word_count, tweet %s (K), description word_count, description %s (K)]
std::vector<double> extract_text_features(const std::string& tweet_text,
                                          const std::string& description,
                                          const LexiconDictionary& lexicon);

}  // namespace usertype
