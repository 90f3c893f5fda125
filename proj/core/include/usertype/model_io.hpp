#pragma once

#include <iosfwd>
#include <string>

#include "usertype/classifiers.hpp"

namespace usertype {

/// Self-describing JSON artifact with an explicit format_version and a CRC32
/// over the payload, verified on load. Serialization is deterministic: the
/// same model always produces the same bytes.
std::string serialize_model_to_string(const TrainedModel& model);
void serialize_model(const TrainedModel& model, const std::string& path);

/// Rejects unsupported format versions (ModelIoError::Kind::version_mismatch)
/// and corrupt payloads, whether truncated or bit-flipped
/// (ModelIoError::Kind::corrupt).
TrainedModel deserialize_model_from_string(const std::string& text);
TrainedModel deserialize_model(const std::string& path);

/// CRC-32 (IEEE 802.3 polynomial), used for the artifact checksum.
std::uint32_t crc32(std::string_view data);

}  // namespace usertype
