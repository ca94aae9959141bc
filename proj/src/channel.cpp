#include "saig/channel.hpp"

#include <algorithm>

namespace saig {

std::uint32_t crc32_ieee(const std::uint8_t* data, std::size_t n) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c >> 1) ^ (0xEDB88320u & (0u - (c & 1u)));
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t c = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < n; ++i) c = (c >> 8) ^ table[(c ^ data[i]) & 0xFFu];
    return ~c;
}

const char* to_string(WireErrorKind kind) {
    switch (kind) {
        case WireErrorKind::BadMagic: return "BadMagic";
        case WireErrorKind::UnsupportedVersion: return "UnsupportedVersion";
        case WireErrorKind::Truncated: return "Truncated";
        case WireErrorKind::CrcMismatch: return "CrcMismatch";
        case WireErrorKind::RangeViolation: return "RangeViolation";
        case WireErrorKind::HintOutOfBounds: return "HintOutOfBounds";
    }
    return "?";
}

namespace {

constexpr std::array<std::uint8_t, kMagicBytes> kMagic{0x53, 0x41, 0x49, 0x47};  // "SAIG"

void push_u16be(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void push_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::uint16_t read_u16be(const std::uint8_t* p) {
    return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

std::uint32_t read_u32be(const std::uint8_t* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
}

void validate_hint(const HintPatch& hint) {
    if (hint.w == 0 || hint.h == 0) throw std::invalid_argument("serialize: empty hint patch");
    if (hint.pixels.size() != static_cast<std::size_t>(hint.w) * hint.h * 3)
        throw std::invalid_argument("serialize: hint pixel payload size mismatch");
    if (hint.x + hint.w > Raster::kWidth || hint.y + hint.h > Raster::kHeight)
        throw std::invalid_argument("serialize: hint patch exceeds raster bounds");
}

}  // namespace

std::vector<std::uint8_t> serialize(const Prompt& prompt, const std::vector<HintPatch>& hints) {
    if (!prompt_valid(prompt)) throw std::invalid_argument("serialize: invalid prompt");
    if (hints.size() > 255) throw std::invalid_argument("serialize: too many hints");
    for (const HintPatch& h : hints) validate_hint(h);

    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic.begin(), kMagic.end());
    out.push_back(kWireVersion);
    out.push_back(hints.empty() ? 0x00 : 0x01);  // flags
    out.push_back(0x00);                         // reserved
    out.push_back(static_cast<std::uint8_t>(prompt.size()));
    for (const Phrase& p : prompt) {
        out.push_back(p.attribute);
        out.push_back(p.value);
    }
    out.push_back(static_cast<std::uint8_t>(hints.size()));
    for (const HintPatch& h : hints) {
        push_u16be(out, h.x);
        push_u16be(out, h.y);
        push_u16be(out, h.w);
        push_u16be(out, h.h);
        out.insert(out.end(), h.pixels.begin(), h.pixels.end());
    }
    push_u32be(out, crc32_ieee(out.data(), out.size()));
    return out;
}

DeserializeResult deserialize(const std::vector<std::uint8_t>& bytes) {
    auto fail = [](WireErrorKind kind, std::size_t offset, std::string msg) {
        return DeserializeResult{std::nullopt, {kind, offset, std::move(msg)}};
    };
    // Truncation is always reported at the offset where the input ends.
    auto truncated = [&](const char* what) {
        return fail(WireErrorKind::Truncated, bytes.size(),
                    std::string("frame ends inside ") + what);
    };

    // Structural walk.
    for (std::size_t i = 0; i < kMagicBytes && i < bytes.size(); ++i)
        if (bytes[i] != kMagic[i])
            return fail(WireErrorKind::BadMagic, i, "magic mismatch, expected \"SAIG\"");
    if (bytes.size() < kMagicBytes) return truncated("magic");

    std::size_t cur = kMagicBytes;
    if (cur + 1 > bytes.size()) return truncated("version");
    const std::uint8_t version = bytes[cur++];
    if (version != kWireVersion)
        return fail(WireErrorKind::UnsupportedVersion, 4,
                    "unsupported version " + std::to_string(version));

    if (cur + 1 > bytes.size()) return truncated("flags");
    const std::size_t flags_off = cur;
    const std::uint8_t flags = bytes[cur++];

    if (cur + 1 > bytes.size()) return truncated("reserved byte");
    if (bytes[cur] != 0)
        return fail(WireErrorKind::RangeViolation, cur, "reserved byte must be zero");
    ++cur;

    if (cur + 1 > bytes.size()) return truncated("phrase count");
    const std::uint8_t phrase_count = bytes[cur++];

    const std::size_t phrases_off = cur;
    if (cur + 2u * phrase_count > bytes.size()) return truncated("phrase list");
    cur += 2u * phrase_count;

    if (cur + 1 > bytes.size()) return truncated("hint count");
    const std::uint8_t hint_count = bytes[cur++];

    std::vector<std::size_t> hint_offsets;
    hint_offsets.reserve(hint_count);
    for (int i = 0; i < hint_count; ++i) {
        hint_offsets.push_back(cur);
        if (cur + kHintHeaderBytes > bytes.size()) return truncated("hint header");
        const std::size_t pixel_len =
            static_cast<std::size_t>(read_u16be(&bytes[cur + 4])) * read_u16be(&bytes[cur + 6]) * 3;
        cur += kHintHeaderBytes;
        if (cur + pixel_len > bytes.size()) return truncated("hint pixels");
        cur += pixel_len;
    }

    const std::size_t crc_off = cur;
    if (cur + 4 > bytes.size()) return truncated("crc32");
    cur += 4;
    if (cur != bytes.size())
        return fail(WireErrorKind::RangeViolation, cur, "trailing bytes after frame");

    // Integrity.
    const std::uint32_t want = read_u32be(&bytes[crc_off]);
    const std::uint32_t got = crc32_ieee(bytes.data(), crc_off);
    if (want != got)
        return fail(WireErrorKind::CrcMismatch, crc_off, "crc32 mismatch");

    // Semantic validation.
    if (flags & 0xFE)
        return fail(WireErrorKind::RangeViolation, flags_off, "reserved flag bits set");
    if (((flags & 0x01) != 0) != (hint_count > 0))
        return fail(WireErrorKind::RangeViolation, flags_off,
                    "hints flag inconsistent with hint count");

    Frame frame;
    frame.prompt.reserve(phrase_count);
    for (int i = 0; i < phrase_count; ++i) {
        const std::size_t off = phrases_off + 2u * i;
        const std::uint8_t attribute = bytes[off];
        const std::uint8_t value = bytes[off + 1];
        if (attribute >= kAttrCount)
            return fail(WireErrorKind::RangeViolation, off, "phrase attribute out of range");
        if (value >= kAttrCardinality[attribute])
            return fail(WireErrorKind::RangeViolation, off + 1, "phrase value out of range");
        frame.prompt.push_back({attribute, value});
    }
    if (!prompt_valid(frame.prompt))
        return fail(WireErrorKind::RangeViolation, phrases_off, "prompt invariants violated");

    frame.hints.reserve(hint_count);
    for (const std::size_t off : hint_offsets) {
        HintPatch hint;
        hint.x = read_u16be(&bytes[off]);
        hint.y = read_u16be(&bytes[off + 2]);
        hint.w = read_u16be(&bytes[off + 4]);
        hint.h = read_u16be(&bytes[off + 6]);
        if (hint.w == 0 || hint.h == 0)
            return fail(WireErrorKind::RangeViolation, off + 4, "hint patch is empty");
        if (hint.x + hint.w > Raster::kWidth || hint.y + hint.h > Raster::kHeight)
            return fail(WireErrorKind::HintOutOfBounds, off, "hint patch exceeds raster bounds");
        const std::uint8_t* px = &bytes[off + kHintHeaderBytes];
        hint.pixels.assign(px, px + static_cast<std::size_t>(hint.w) * hint.h * 3);
        frame.hints.push_back(std::move(hint));
    }

    return {std::move(frame), {}};
}

std::vector<HintPatch> select_hints(const Raster& original, const Raster& decoded,
                                    int budget_remaining) {
    constexpr int kTilesX = Raster::kWidth / kHintTile;   // 6
    constexpr int kTilesY = Raster::kHeight / kHintTile;  // 4

    struct Tile {
        int saliency = 0;
        int index = 0;
    };
    std::vector<Tile> tiles;
    for (int ty = 0; ty < kTilesY; ++ty) {
        for (int tx = 0; tx < kTilesX; ++tx) {
            int saliency = 0;
            for (int dy = 0; dy < kHintTile; ++dy)
                for (int dx = 0; dx < kHintTile; ++dx) {
                    const int cell = (ty * kHintTile + dy) * Raster::kWidth + tx * kHintTile + dx;
                    saliency += !original.cell_equal(decoded, cell);
                }
            if (saliency > 0) tiles.push_back({saliency, ty * kTilesX + tx});
        }
    }
    std::sort(tiles.begin(), tiles.end(), [](const Tile& a, const Tile& b) {
        if (a.saliency != b.saliency) return a.saliency > b.saliency;
        return a.index < b.index;
    });

    std::vector<HintPatch> out;
    int budget = budget_remaining;
    for (const Tile& t : tiles) {
        if (budget < kHintBytes) break;
        budget -= kHintBytes;
        HintPatch hint;
        hint.x = static_cast<std::uint16_t>(t.index % kTilesX * kHintTile);
        hint.y = static_cast<std::uint16_t>(t.index / kTilesX * kHintTile);
        hint.w = kHintTile;
        hint.h = kHintTile;
        hint.pixels.resize(static_cast<std::size_t>(kHintTile) * kHintTile * 3);
        std::uint8_t* dst = hint.pixels.data();
        for (int dy = 0; dy < kHintTile; ++dy)
            for (int dx = 0; dx < kHintTile; ++dx, dst += 3) {
                const Rgb c = original.get(hint.x + dx, hint.y + dy);
                dst[0] = c.r;
                dst[1] = c.g;
                dst[2] = c.b;
            }
        out.push_back(std::move(hint));
    }
    return out;
}

// Keep-priority rank per attribute index; higher rank is dropped first.
const std::array<int, kAttrCount> kAttrPriority{
    0,  // vehicle_type
    3,  // color
    1,  // direction
    2,  // heading
    4,  // distance
    5,  // clutter
};

std::vector<std::uint8_t> assemble_payload(const Prompt& prompt, const Raster& original,
                                           int budget_bytes) {
    if (budget_bytes < kMinFrameBytes)
        throw BudgetTooSmallError("budget of " + std::to_string(budget_bytes) +
                                  " bytes cannot carry the minimal " +
                                  std::to_string(kMinFrameBytes) + "-byte frame");
    if (!prompt_valid(prompt)) throw std::invalid_argument("assemble_payload: invalid prompt");

    Prompt kept = prompt;
    while (frame_bytes(static_cast<int>(kept.size()), 0) > budget_bytes) {
        // Drop the lowest-priority phrase; >= keeps scanning so ties (several
        // clutter phrases) shed the rightmost one first.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < kept.size(); ++i)
            if (kAttrPriority[kept[i].attribute] >= kAttrPriority[kept[worst].attribute]) worst = i;
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(worst));
    }

    const int remaining = budget_bytes - frame_bytes(static_cast<int>(kept.size()), 0);
    const std::vector<HintPatch> hints = select_hints(original, decode(kept, {}), remaining);
    return serialize(kept, hints);
}

}  // namespace saig
