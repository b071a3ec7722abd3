#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace holx {

// 64-bit digest of a physical descriptor. The function is FNV-1a 64
// (offset basis 0xcbf29ce484222325, prime 0x100000001b3) and must never
// change: checksums are persisted in model files.
using Digest = std::uint64_t;

Digest digest(std::string_view bytes) noexcept;

// 16 lowercase hex digits.
std::string digest_hex(Digest d);
std::optional<Digest> parse_digest_hex(std::string_view text);

std::string hex_encode(std::string_view bytes);
std::optional<std::string> hex_decode(std::string_view text);

}  // namespace holx
