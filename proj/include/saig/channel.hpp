#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "saig/codec.hpp"

namespace saig {

// Wire frame. All multi-byte fields are big-endian.
//
//   offset    size  field
//   0         4     magic "SAIG" (0x53 0x41 0x49 0x47)
//   4         1     version, currently 1
//   5         1     flags: bit0 = hints present, bits 1..7 reserved (0)
//   6         1     reserved, must be 0
//   7         1     phrase_count (n)
//   8         2n    phrases: attribute u8, value u8
//   8+2n      1     hint_count (m)
//   9+2n      ...   hints: x,y,w,h as u16, then w*h*3 raw RGB bytes
//   end-4     4     crc32 over every preceding byte
//
// CRC-32 is the reflected IEEE 802.3 polynomial 0xEDB88320. The minimal frame
// (no phrases, no hints) is 13 bytes.

inline constexpr std::size_t kMagicBytes = 4;
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr int kMinFrameBytes = 13;

inline constexpr int kHintTile = 6;  // hint patches are 6x6 tiles
inline constexpr int kHintHeaderBytes = 8;
inline constexpr int kHintBytes = kHintHeaderBytes + kHintTile * kHintTile * 3;  // 116

inline constexpr int frame_bytes(int phrase_count, int hint_count) {
    return kMinFrameBytes + 2 * phrase_count + hint_count * kHintBytes;
}

std::uint32_t crc32_ieee(const std::uint8_t* data, std::size_t n);

enum class WireErrorKind {
    BadMagic,
    UnsupportedVersion,
    Truncated,
    CrcMismatch,
    RangeViolation,
    HintOutOfBounds,
};

const char* to_string(WireErrorKind kind);

struct WireError {
    WireErrorKind kind = WireErrorKind::Truncated;
    std::size_t offset = 0;  // byte offset of the offending field
    std::string message;
};

struct Frame {
    Prompt prompt;
    std::vector<HintPatch> hints;

    bool operator==(const Frame&) const = default;
};

// serialize() rejects invalid prompts/hints with std::invalid_argument; it
// only ever emits frames deserialize() accepts.
std::vector<std::uint8_t> serialize(const Prompt& prompt, const std::vector<HintPatch>& hints);

struct DeserializeResult {
    std::optional<Frame> frame;
    WireError error;

    bool ok() const { return frame.has_value(); }
};

// Strict parse: structural walk first (magic, version, reserved byte, counts,
// truncation, no trailing bytes), then the CRC check, then semantic validation
// (flag bits, attribute/value ranges, prompt invariants, hint geometry).
DeserializeResult deserialize(const std::vector<std::uint8_t>& bytes);

// Saliency-ordered hint selection: the raster is cut into 6x6 tiles (row-major
// tile index 0..23); a tile's saliency is the number of cells where `decoded`
// disagrees with `original`. Tiles with zero saliency are never sent. Sorted by
// descending saliency, ties by ascending tile index; greedily take whole hints
// while they fit into budget_remaining.
std::vector<HintPatch> select_hints(const Raster& original, const Raster& decoded,
                                    int budget_remaining);

struct BudgetTooSmallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Priority order for keeping phrases under a budget squeeze, most important
// first. Clutter phrases are dropped before any real attribute.
extern const std::array<int, kAttrCount> kAttrPriority;

// Fits the prompt into budget_bytes: drops phrases in reverse priority until
// the text fits, then fills the remainder with the highest-saliency hints.
// budget_bytes < 13 cannot carry even the empty frame -> BudgetTooSmallError.
std::vector<std::uint8_t> assemble_payload(const Prompt& prompt, const Raster& original,
                                           int budget_bytes);

}  // namespace saig
