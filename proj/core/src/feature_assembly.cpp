#include "usertype/feature_assembly.hpp"

#include <algorithm>
#include <cmath>

namespace usertype {

namespace {

constexpr std::size_t kNameDims = 3;

std::size_t size_of_group(FeatureGroup g, std::size_t lexicon_categories) {
    switch (g) {
        case FeatureGroup::name: return kNameDims;
        case FeatureGroup::text: return 2 * (lexicon_categories + 1);
        case FeatureGroup::image: return kImageDims;
        case FeatureGroup::metadata: return kMetadataDims;
    }
    throw InternalError("unreachable FeatureGroup value");
}

}  // namespace

const char* to_string(FeatureGroup g) {
    switch (g) {
        case FeatureGroup::name: return "name";
        case FeatureGroup::text: return "text";
        case FeatureGroup::image: return "image";
        case FeatureGroup::metadata: return "metadata";
    }
    throw InternalError("unreachable FeatureGroup value");
}

FeatureGroup feature_group_from_string(const std::string& token) {
    if (token == "name") return FeatureGroup::name;
    if (token == "text") return FeatureGroup::text;
    if (token == "image") return FeatureGroup::image;
    if (token == "metadata") return FeatureGroup::metadata;
    throw ConfigError("unknown feature group '" + token + "'");
}

const char* to_string(FeatureSelection s) {
    switch (s) {
        case FeatureSelection::name: return "name";
        case FeatureSelection::text: return "text";
        case FeatureSelection::image: return "image";
        case FeatureSelection::metadata: return "metadata";
        case FeatureSelection::all: return "all";
    }
    throw InternalError("unreachable FeatureSelection value");
}

FeatureSelection feature_selection_from_string(const std::string& token) {
    if (token == "name") return FeatureSelection::name;
    if (token == "text") return FeatureSelection::text;
    if (token == "image") return FeatureSelection::image;
    if (token == "metadata") return FeatureSelection::metadata;
    if (token == "all") return FeatureSelection::all;
    throw ConfigError("unknown feature selection '" + token +
                      "' (expected name, text, image, metadata or all)");
}

bool FeatureSchema::has(FeatureGroup g) const {
    return std::find(groups.begin(), groups.end(), g) != groups.end();
}

std::size_t FeatureSchema::group_size(FeatureGroup g) const {
    return size_of_group(g, lexicon_categories);
}

std::size_t FeatureSchema::group_offset(FeatureGroup g) const {
    std::size_t offset = 0;
    for (FeatureGroup present : groups) {
        if (present == g) return offset;
        offset += size_of_group(present, lexicon_categories);
    }
    throw InternalError(std::string("schema does not include group ") + to_string(g));
}

std::size_t FeatureSchema::dimension() const {
    std::size_t d = 0;
    for (FeatureGroup g : groups) d += size_of_group(g, lexicon_categories);
    return d;
}

bool FeatureSchema::is_count_dim(std::size_t dim) const {
    if (has(FeatureGroup::text)) {
        std::size_t off = group_offset(FeatureGroup::text);
        std::size_t per_source = lexicon_categories + 1;
        if (dim == off || dim == off + per_source) return true;  // the word counts
    }
    if (has(FeatureGroup::metadata)) {
        std::size_t off = group_offset(FeatureGroup::metadata);
        if (dim >= off && dim < off + 3) return true;  // friends, followers, statuses
    }
    return false;
}

FeatureSchema make_schema(FeatureSelection selection, std::size_t lexicon_categories) {
    FeatureSchema schema;
    schema.lexicon_categories = lexicon_categories;
    switch (selection) {
        case FeatureSelection::name: schema.groups = {FeatureGroup::name}; break;
        case FeatureSelection::text: schema.groups = {FeatureGroup::text}; break;
        case FeatureSelection::image: schema.groups = {FeatureGroup::image}; break;
        case FeatureSelection::metadata: schema.groups = {FeatureGroup::metadata}; break;
        case FeatureSelection::all:
            schema.groups = {FeatureGroup::name, FeatureGroup::text, FeatureGroup::image,
                             FeatureGroup::metadata};
            break;
    }
    return schema;
}

FeatureVector assemble(const UserRecord& record, const FeatureSchema& schema,
                       const FeatureExtractors& extractors) {
    FeatureVector out;
    out.values.reserve(schema.dimension());
    out.image_status = ImageStatus::missing;

    for (FeatureGroup g : schema.groups) {
        switch (g) {
            case FeatureGroup::name: {
                if (!extractors.name_db)
                    throw ConfigError("schema includes name features but no name database given");
                auto encoded = encode_name_features(
                    classify_name(record.screen_name, *extractors.name_db, extractors.name_options));
                out.values.insert(out.values.end(), encoded.begin(), encoded.end());
                break;
            }
            case FeatureGroup::text: {
                if (!extractors.lexicon)
                    throw ConfigError("schema includes text features but no lexicon given");
                auto text = extract_text_features(record.tweet_text, record.description,
                                                  *extractors.lexicon);
                out.values.insert(out.values.end(), text.begin(), text.end());
                break;
            }
            case FeatureGroup::image: {
                if (!extractors.images)
                    throw ConfigError("schema includes image features but no image provider given");
                ImageLookupResult result;
                if (record.image_vector_ref)
                    result = extractors.images->lookup(*record.image_vector_ref);
                out.image_status = result.status;
                if (result.status == ImageStatus::present)
                    out.values.insert(out.values.end(), result.probs.begin(), result.probs.end());
                else
                    out.values.insert(out.values.end(), kImageDims, 0.0);
                break;
            }
            case FeatureGroup::metadata: {
                auto meta = extract_metadata_features(record);
                out.values.insert(out.values.end(), meta.begin(), meta.end());
                break;
            }
        }
    }
    if (!schema.has(FeatureGroup::image)) out.image_status = ImageStatus::missing;
    return out;
}

const char* to_string(NormalizationMode m) {
    return m == NormalizationMode::feature_standardize ? "feature" : "sample";
}

NormalizationMode normalization_mode_from_string(const std::string& token) {
    if (token == "feature") return NormalizationMode::feature_standardize;
    if (token == "sample") return NormalizationMode::sample_unit_length;
    throw ConfigError("unknown normalization mode '" + token + "' (expected feature or sample)");
}

namespace {

// Imputation + log transform, shared by fit and apply.
void impute_and_log(const Preprocessor& pre, std::vector<double>& values, bool image_missing) {
    const FeatureSchema& schema = pre.schema;
    if (image_missing && schema.has(FeatureGroup::image)) {
        std::size_t off = schema.group_offset(FeatureGroup::image);
        std::copy(pre.image_impute.begin(), pre.image_impute.end(), values.begin() + off);
    }
    for (std::size_t d = 0; d < values.size(); ++d)
        if (schema.is_count_dim(d)) values[d] = std::log1p(values[d]);
}

}  // namespace

Preprocessor fit_preprocessor(std::span<const FeatureVector> training, const FeatureSchema& schema,
                              NormalizationMode mode) {
    const std::size_t n = training.size();
    const std::size_t dim = schema.dimension();
    if (n < 2) throw DataError("fit_preprocessor: need at least 2 training vectors");
    for (const FeatureVector& v : training)
        if (v.values.size() != dim)
            throw DataError("fit_preprocessor: vector does not match schema dimension");

    Preprocessor pre;
    pre.schema = schema;
    pre.mode = mode;

    if (schema.has(FeatureGroup::image)) {
        std::size_t off = schema.group_offset(FeatureGroup::image);
        std::size_t present = 0;
        pre.image_impute.assign(kImageDims, 0.0);
        for (const FeatureVector& v : training) {
            if (v.image_missing()) continue;
            ++present;
            for (std::size_t d = 0; d < kImageDims; ++d) pre.image_impute[d] += v.values[off + d];
        }
        if (present == 0)
            throw DataError("fit_preprocessor: no training vector has an image group present");
        for (double& x : pre.image_impute) x /= static_cast<double>(present);
    }

    std::vector<std::vector<double>> work;
    work.reserve(n);
    for (const FeatureVector& v : training) {
        work.push_back(v.values);
        impute_and_log(pre, work.back(), v.image_missing());
    }

    pre.mean.assign(dim, 0.0);
    pre.spread.assign(dim, 1.0);
    for (std::size_t d = 0; d < dim; ++d) {
        double lo = work[0][d], hi = work[0][d];
        double sum = 0.0;
        for (const auto& row : work) {
            sum += row[d];
            lo = std::min(lo, row[d]);
            hi = std::max(hi, row[d]);
        }
        if (lo == hi) {
            // Constant column: spread 1 makes the standardized value exactly 0.
            pre.mean[d] = lo;
            pre.spread[d] = 1.0;
            continue;
        }
        double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const auto& row : work) {
            double diff = row[d] - mean;
            ss += diff * diff;
        }
        pre.mean[d] = mean;
        pre.spread[d] = std::sqrt(ss / static_cast<double>(n));
    }
    return pre;
}

std::vector<double> apply_preprocessor(const Preprocessor& pre, const FeatureVector& v) {
    const std::size_t dim = pre.schema.dimension();
    if (v.values.size() != dim)
        throw DataError("apply_preprocessor: vector does not match schema dimension");

    std::vector<double> out = v.values;
    impute_and_log(pre, out, v.image_missing());

    if (pre.mode == NormalizationMode::feature_standardize) {
        for (std::size_t d = 0; d < dim; ++d) out[d] = (out[d] - pre.mean[d]) / pre.spread[d];
    } else {
        double norm_sq = 0.0;
        for (double x : out) norm_sq += x * x;
        if (norm_sq > 0.0) {
            double inv = 1.0 / std::sqrt(norm_sq);
            for (double& x : out) x *= inv;
        }
    }

    for (double x : out)
        if (!std::isfinite(x))
            throw InternalError("apply_preprocessor produced a non-finite value");
    return out;
}

}  // namespace usertype
