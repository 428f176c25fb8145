#pragma once

#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>

namespace xorbench {

/// Streaming 64-bit FNV-1a. Each byte step is a bijection of the state, so
/// any single-byte change in the input changes the digest.
class Fnv1a {
 public:
  Fnv1a& bytes(std::span<const unsigned char> data) noexcept {
    for (unsigned char c : data) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }

  Fnv1a& str(std::string_view s) noexcept {
    return bytes({reinterpret_cast<const unsigned char*>(s.data()), s.size()});
  }

  /// Little-endian encoding, independent of host byte order.
  template <typename T>
    requires std::is_integral_v<T>
  Fnv1a& integer(T value) noexcept {
    auto u = static_cast<std::uint64_t>(value);
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf[i] = static_cast<unsigned char>(u >> (8 * i));
    }
    return bytes(buf);
  }

  std::uint64_t digest() const noexcept { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::uint64_t hash_string(std::string_view s) noexcept {
  return Fnv1a{}.str(s).digest();
}

}  // namespace xorbench
