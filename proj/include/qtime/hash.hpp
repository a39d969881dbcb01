#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace qtime {

inline constexpr uint64_t kFnvOffset = 1469598103934665603ull;
inline constexpr uint64_t kFnvPrime = 1099511628211ull;

/// FNV-1a over a byte range, continuing from `h`.
inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = kFnvOffset) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

inline uint64_t fnv1a64(std::string_view s, uint64_t h = kFnvOffset) {
    return fnv1a64(s.data(), s.size(), h);
}

/// Mixes a tag string into a seed; used to derive per-command and per-sample
/// RNG streams from the single project seed.
inline uint64_t derive_seed(uint64_t seed, std::string_view tag) {
    return seed ^ fnv1a64(tag);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    uint64_t h = fnv1a64(&index, sizeof index);
    return seed ^ h;
}

std::string hash_hex(uint64_t h);

/// FNV-1a of a file's contents. Throws DataError if the file cannot be read.
uint64_t hash_file(const std::string& path);

/// CRC-32 (IEEE 802.3 polynomial), used by the weight container.
uint32_t crc32(const void* data, size_t len, uint32_t crc = 0);

}  // namespace qtime
