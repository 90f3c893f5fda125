#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "usertype/error.hpp"

namespace usertype {

inline constexpr std::size_t kImageDims = 1000;
inline constexpr double kImageSumTolerance = 1e-3;

enum class ImageStatus : std::uint8_t {
    present,  // vector loaded and valid
    missing,  // no ref, or the ref resolves to nothing
    invalid,  // a vector was found but failed validation
};

struct ImageLookupResult {
    ImageStatus status = ImageStatus::missing;
    std::vector<double> probs;  // kImageDims values when status == present
};

/// Throws DataError unless probs has exactly kImageDims values, each in
/// [0,1], summing to 1 within kImageSumTolerance.
void validate_image_vector(const std::vector<double>& probs);

/// Reads a vector file: kImageDims whitespace-separated decimals.
/// Wrong count, out-of-range values or a bad sum raise DataError; this is
/// distinct from a missing file, which callers map to ImageStatus::missing.
std::vector<double> load_image_vector(const std::string& path);

/// Source of image probability vectors, keyed by UserRecord::image_vector_ref.
/// Implementations must be deterministic for a fixed ref within one run and
/// safe for concurrent lookups (or document single-threaded use).
class ImageFeatureProvider {
public:
    virtual ~ImageFeatureProvider() = default;
    virtual ImageLookupResult lookup(const std::string& ref) const = 0;
};

/// File-based default: resolves refs relative to a root directory.
/// Missing file -> missing; unparseable or invalid vector -> invalid.
class DirectoryImageProvider final : public ImageFeatureProvider {
public:
    explicit DirectoryImageProvider(std::string root) : root_(std::move(root)) {}
    ImageLookupResult lookup(const std::string& ref) const override;

private:
    std::string root_;
};

/// Provider for pipelines with no image source: every ref is missing.
class NullImageProvider final : public ImageFeatureProvider {
public:
    ImageLookupResult lookup(const std::string&) const override { return {}; }
};

}  // namespace usertype
