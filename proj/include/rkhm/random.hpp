#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace rkhm {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// seed XOR fnv1a(purpose), finalized with splitmix64. Extra integers (trial
/// number, replicate index, ...) are folded in one by one.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose,
                          std::initializer_list<std::uint64_t> indices = {});

inline std::mt19937_64 substream(std::uint64_t seed, std::string_view purpose,
                                 std::initializer_list<std::uint64_t> indices = {}) {
  return std::mt19937_64(derive_seed(seed, purpose, indices));
}

}  // namespace rkhm
