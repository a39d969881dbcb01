#pragma once

#include <string>

#include "qtime/model.hpp"

namespace qtime {

/// Weight container: magic "QTMW", format version, the model config, named
/// arrays (parameters in shape order plus the fitted feature scalers) as
/// 64-bit little-endian floats, and a trailing CRC-32. Round-trips bitwise.
void save_model(const ModelBundle& bundle, const std::string& path);

/// Loads and verifies a container. Throws DataError on version mismatch,
/// checksum failure (truncation/corruption), or an array set inconsistent
/// with the stored config. When `expect` is given, the stored config must
/// match it exactly.
ModelBundle load_model(const std::string& path, const ModelConfig* expect = nullptr);

}  // namespace qtime
