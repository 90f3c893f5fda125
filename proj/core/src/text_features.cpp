#include "usertype/text_features.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <unordered_set>

namespace usertype {

namespace {

bool is_word_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    });
    return s;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

// Splits a whitespace-free chunk into word tokens. Apostrophes survive only
// with word characters on both sides.
void append_word_tokens(const std::string& chunk, std::vector<std::string>& out) {
    std::string current;
    for (std::size_t i = 0; i < chunk.size(); ++i) {
        unsigned char c = chunk[i];
        if (is_word_char(c)) {
            current += c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
        } else if (c == '\'' && !current.empty() && i + 1 < chunk.size() &&
                   is_word_char(static_cast<unsigned char>(chunk[i + 1]))) {
            current += '\'';
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) continue;
        std::string chunk = text.substr(start, i - start);

        if (chunk[0] == '@') continue;  // user mention
        std::string lower = lowercase(chunk);
        if (lower.rfind("http", 0) == 0) continue;  // URL
        std::size_t body = 0;
        while (body < lower.size() && lower[body] == '#') ++body;  // keep hashtag bodies
        append_word_tokens(lower.substr(body), tokens);
    }
    return tokens;
}

LexiconDictionary load_lexicon_from(std::istream& in, const std::string& source_name) {
    LexiconDictionary dict;
    std::unordered_map<std::uint32_t, std::uint32_t> index_by_id;
    std::string line;
    std::size_t line_number = 0;
    int section = 0;  // 0 = preamble, 1 = categories, 2 = entries

    auto fail = [&](const std::string& what) -> DataError {
        return DataError(source_name + ":" + std::to_string(line_number) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (line == "%") {
            ++section;
            if (section > 2) throw fail("unexpected extra '%' separator");
            continue;
        }

        if (section == 0) throw fail("content before the first '%' separator");

        auto fields = split_tabs(line);
        if (section == 1) {
            if (fields.size() != 2) throw fail("expected 'id<TAB>name' category row");
            std::uint32_t id = 0;
            try {
                unsigned long parsed = std::stoul(fields[0]);
                id = static_cast<std::uint32_t>(parsed);
                if (id == 0 || parsed != id) throw std::out_of_range("range");
            } catch (const std::exception&) {
                throw fail("category id must be a positive integer, got '" + fields[0] + "'");
            }
            if (index_by_id.count(id)) throw fail("duplicate category id " + fields[0]);
            index_by_id[id] = static_cast<std::uint32_t>(dict.categories.size());
            dict.categories.push_back({id, fields[1]});
        } else {
            if (fields.size() < 2) throw fail("expected 'pattern<TAB>id[<TAB>id...]' entry row");
            std::string pattern = lowercase(fields[0]);
            if (pattern.empty()) throw fail("empty pattern");

            auto star = pattern.find('*');
            bool wildcard = star != std::string::npos;
            if (wildcard && (star != pattern.size() - 1 || pattern.size() == 1 ||
                             pattern.find('*') != pattern.rfind('*')))
                throw fail("malformed wildcard '" + fields[0] + "' (one trailing '*' only)");

            std::vector<std::uint32_t> category_indexes;
            for (std::size_t f = 1; f < fields.size(); ++f) {
                std::uint32_t id = 0;
                try {
                    id = static_cast<std::uint32_t>(std::stoul(fields[f]));
                } catch (const std::exception&) {
                    throw fail("bad category id '" + fields[f] + "'");
                }
                auto it = index_by_id.find(id);
                if (it == index_by_id.end())
                    throw fail("entry references unknown category id " + fields[f]);
                category_indexes.push_back(it->second);
            }
            std::sort(category_indexes.begin(), category_indexes.end());
            category_indexes.erase(std::unique(category_indexes.begin(), category_indexes.end()),
                                   category_indexes.end());

            auto& table = wildcard ? dict.wildcards : dict.literals;
            std::string key = wildcard ? pattern.substr(0, star) : pattern;
            auto& existing = table[key];  // repeated patterns merge their categories
            existing.insert(existing.end(), category_indexes.begin(), category_indexes.end());
            std::sort(existing.begin(), existing.end());
            existing.erase(std::unique(existing.begin(), existing.end()), existing.end());
        }
    }
    if (section < 2) throw DataError(source_name + ": missing '%' section separators");
    return dict;
}

LexiconDictionary load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lexicon: " + path);
    return load_lexicon_from(in, path);
}

CategoryProfile category_profile(const std::vector<std::string>& tokens,
                                 const LexiconDictionary& lexicon) {
    CategoryProfile profile;
    profile.word_count = tokens.size();
    profile.percentages.assign(lexicon.category_count(), 0.0);
    if (tokens.empty()) return profile;

    std::vector<std::uint64_t> hits(lexicon.category_count(), 0);
    for (const auto& token : tokens) {
        // An exact literal always outranks wildcards: any matching wildcard
        // prefix is at most as long as the token itself.
        const std::vector<std::uint32_t>* winner = nullptr;
        if (auto it = lexicon.literals.find(token); it != lexicon.literals.end()) {
            winner = &it->second;
        } else if (!lexicon.wildcards.empty()) {
            for (std::size_t len = token.size(); len >= 1; --len) {
                auto it = lexicon.wildcards.find(token.substr(0, len));
                if (it != lexicon.wildcards.end()) {
                    winner = &it->second;
                    break;
                }
            }
        }
        if (winner)
            for (std::uint32_t idx : *winner) ++hits[idx];
    }

    for (std::size_t c = 0; c < hits.size(); ++c)
        profile.percentages[c] =
            100.0 * static_cast<double>(hits[c]) / static_cast<double>(profile.word_count);
    return profile;
}

std::vector<double> extract_text_features(const std::string& tweet_text,
                                          const std::string& description,
                                          const LexiconDictionary& lexicon) {
    std::vector<double> features;
    features.reserve(2 * (lexicon.category_count() + 1));
    for (const std::string* source : {&tweet_text, &description}) {
        CategoryProfile profile = category_profile(tokenize(*source), lexicon);
        features.push_back(static_cast<double>(profile.word_count));
        features.insert(features.end(), profile.percentages.begin(), profile.percentages.end());
    }
    return features;
}

}  // namespace usertype
