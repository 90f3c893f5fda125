#include "usertype/image_features.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace usertype {

void validate_image_vector(const std::vector<double>& probs) {
    if (probs.size() != kImageDims)
        throw DataError("image vector has " + std::to_string(probs.size()) + " values, expected " +
                        std::to_string(kImageDims));
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0))
            throw DataError("image probability out of [0,1]: " + std::to_string(p));
        sum += p;
    }
    if (std::abs(sum - 1.0) > kImageSumTolerance)
        throw DataError("image probabilities sum to " + std::to_string(sum) +
                        ", outside tolerance of 1");
}

std::vector<double> load_image_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open image vector file: " + path);

    std::vector<double> probs;
    probs.reserve(kImageDims);
    double value;
    while (in >> value) probs.push_back(value);
    if (!in.eof()) throw DataError(path + ": non-numeric content in image vector");
    validate_image_vector(probs);
    return probs;
}

ImageLookupResult DirectoryImageProvider::lookup(const std::string& ref) const {
    if (ref.empty()) return {};
    std::filesystem::path path = std::filesystem::path(root_) / ref;
    std::error_code ec;
    if (!std::filesystem::exists(path, ec) || ec) return {};
    try {
        return {ImageStatus::present, load_image_vector(path.string())};
    } catch (const DataError&) {
        return {ImageStatus::invalid, {}};
    }
}

}  // namespace usertype
