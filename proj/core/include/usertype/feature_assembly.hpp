#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "usertype/image_features.hpp"
#include "usertype/metadata_features.hpp"
#include "usertype/name_features.hpp"
#include "usertype/text_features.hpp"
#include "usertype/types.hpp"

namespace usertype {

enum class FeatureGroup : std::uint8_t { name = 0, text = 1, image = 2, metadata = 3 };

const char* to_string(FeatureGroup g);
FeatureGroup feature_group_from_string(const std::string& token);

/// Which feature groups a run uses. `all` is the full four-group layout.
enum class FeatureSelection : std::uint8_t { name, text, image, metadata, all };

const char* to_string(FeatureSelection s);
FeatureSelection feature_selection_from_string(const std::string& token);

/// Fixed layout of the assembled vector: the selected groups in canonical
/// order (name, text, image, metadata) with sizes 3, 2*(K+1), 1000, 4.
/// With all groups and K categories the dimension is 1007 + 2*(K+1).
struct FeatureSchema {
    std::vector<FeatureGroup> groups;     // subset, canonical order
    std::size_t lexicon_categories = 0;   // K; meaningful when text is present

    bool has(FeatureGroup g) const;
    std::size_t group_size(FeatureGroup g) const;
    std::size_t group_offset(FeatureGroup g) const;  // throws if absent
    std::size_t dimension() const;

    /// True exactly for the two per-source word-count dims and the three
    /// metadata count dims; these get the log(1+x) transform.
    bool is_count_dim(std::size_t dim) const;

    bool operator==(const FeatureSchema&) const = default;
};

FeatureSchema make_schema(FeatureSelection selection, std::size_t lexicon_categories);

/// Raw assembled vector. Only the image group can be wholly missing; the
/// status records whether it was present, absent, or present-but-corrupt
/// (the last two are imputed alike downstream but reported separately).
struct FeatureVector {
    std::vector<double> values;
    ImageStatus image_status = ImageStatus::missing;

    bool image_missing() const { return image_status != ImageStatus::present; }
};

/// Everything assemble() needs besides the record. Pointers may be null for
/// groups the schema does not include.
struct FeatureExtractors {
    const NameDatabase* name_db = nullptr;
    NameOptions name_options;
    const LexiconDictionary* lexicon = nullptr;
    const ImageFeatureProvider* images = nullptr;
};

/// Concatenates the group extractions in schema order. Missing/invalid image
/// vectors leave zeros in the image dims and set the status; every other
/// group is a total function of the record.
FeatureVector assemble(const UserRecord& record, const FeatureSchema& schema,
                       const FeatureExtractors& extractors);

enum class NormalizationMode : std::uint8_t {
    feature_standardize,   // per-dimension (x - mean) / spread
    sample_unit_length,    // per-vector scaling to unit Euclidean length
};

const char* to_string(NormalizationMode m);
NormalizationMode normalization_mode_from_string(const std::string& token);

/// Training-set statistics, fitted exactly once and immutable afterwards:
/// image-group imputation means, then per-dimension mean/spread computed on
/// the imputed, log-transformed training matrix. Constant dimensions store
/// spread 1 so they standardize to exactly 0.
struct Preprocessor {
    FeatureSchema schema;
    NormalizationMode mode = NormalizationMode::feature_standardize;
    std::vector<double> image_impute;  // image-group dims, training means
    std::vector<double> mean;          // size D
    std::vector<double> spread;        // size D, > 0

    bool operator==(const Preprocessor&) const = default;
};

/// Requires >= 2 vectors, all matching `schema`; if the schema includes the
/// image group at least one vector must have it present (cannot-fit DataError
/// otherwise).
Preprocessor fit_preprocessor(std::span<const FeatureVector> training, const FeatureSchema& schema,
                              NormalizationMode mode = NormalizationMode::feature_standardize);

/// Impute missing image dims -> log1p count dims -> normalize per `mode`.
/// Output is fully finite; schema mismatch raises DataError.
std::vector<double> apply_preprocessor(const Preprocessor& pre, const FeatureVector& v);

}  // namespace usertype
