#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace sleepspike {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);

/// HMAC-SHA-256.
Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> msg);

}  // namespace sleepspike
