#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace trobust {

// 64-bit FNV-1a over a byte range. Used to pin canonical fixtures in tests.
inline std::uint64_t fnv1a64(const void* data, std::size_t size) noexcept {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 14695981039346656037ULL;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= static_cast<std::uint64_t>(bytes[i]);
    hash *= 1099511628211ULL;
  }
  return hash;
}

inline std::uint64_t fnv1a64(std::string_view text) noexcept {
  return fnv1a64(text.data(), text.size());
}

}  // namespace trobust
