#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "saig/rng.hpp"
#include "saig/scene.hpp"

namespace saig {

// A prompt is a short list of attribute phrases. Attributes 0..4 mirror the
// SceneSpec fields; attribute 5 is a clutter phrase describing a hallucinated
// object (value 0..3 selects its position). Invariants (prompt_valid):
//   - at most one phrase per real attribute, at most 4 clutter phrases,
//   - total length <= 8,
//   - canonical order: real phrases by ascending attribute, clutter last.
inline constexpr int kAttrVehicleType = 0;
inline constexpr int kAttrColor = 1;
inline constexpr int kAttrDirection = 2;
inline constexpr int kAttrHeading = 3;
inline constexpr int kAttrDistance = 4;
inline constexpr int kAttrClutter = 5;
inline constexpr int kAttrCount = 6;

inline constexpr std::array<int, kAttrCount> kAttrCardinality{5, 8, 4, 3, 3, 4};
inline constexpr int kMaxPromptLen = 8;
inline constexpr int kMaxClutterPhrases = 4;

extern const std::array<const char*, kAttrCount> kAttrNames;

struct Phrase {
    std::uint8_t attribute = 0;
    std::uint8_t value = 0;

    auto operator<=>(const Phrase&) const = default;
};

using Prompt = std::vector<Phrase>;

bool prompt_valid(const Prompt& prompt);

// Semicolon-separated "attr=value" with enum value names for real attributes
// and the decimal position for clutter, e.g.
//   "vehicle_type=truck;color=red;clutter=2"
// The empty prompt prints as "". Parsing rejects anything that does not
// round-trip, including invariant violations.
std::string prompt_to_text(const Prompt& prompt);
std::optional<Prompt> prompt_from_text(const std::string& text);

// Defaulted scene for decoding partial prompts.
inline constexpr SceneSpec kDecodeDefaults{VehicleType::sedan, Color::white, Direction::left,
                                           Heading::parallel, Distance::mid};

Prompt prompt_from_spec(const SceneSpec& spec);
SceneSpec spec_from_prompt(const Prompt& prompt);

// Best-matching spec over all 1440 templates (ties broken by the
// lexicographically smallest spec), phrased as a full 5-attribute prompt.
Prompt encode_clean(const Raster& image);

// Memoized encode_clean(render(spec)); safe for concurrent callers.
const Prompt& encoded_scene_prompt(const SceneSpec& spec);

struct NoiseConfig {
    double p_drop_heading = 0.5;
    double p_drop_other = 0.1;
    double p_clutter = 0.4;
    double p_value_swap = 0.1;
};

// Channel-style corruption of a prompt. Draw order is part of the contract:
// one drop draw per phrase in prompt order (heading uses p_drop_heading, the
// rest p_drop_other), then the clutter draw (plus a position draw when it
// fires, appended at the end), then the value-swap draw (plus a wrong-value
// draw when it fires, replacing the surviving color phrase's value with a
// uniformly random different color).
Prompt apply_noise(const Prompt& prompt, const NoiseConfig& cfg, Rng& rng);

struct HintPatch {
    std::uint16_t x = 0, y = 0, w = 0, h = 0;
    std::vector<std::uint8_t> pixels;  // w*h*3, row-major RGB

    bool operator==(const HintPatch&) const = default;
};

// Renders the defaulted spec, stamps one 4x4 magenta artifact per clutter
// phrase at (x = 4 + 8*value, y = 2), then overwrites hint rectangles in list
// order. Out-of-bounds hints raise std::out_of_range; malformed hints raise
// std::invalid_argument.
Raster decode(const Prompt& prompt, const std::vector<HintPatch>& hints);

inline constexpr int kArtifactSize = 4;
inline constexpr int kArtifactY = 2;
inline int artifact_x(int clutter_value) { return 4 + 8 * clutter_value; }

}  // namespace saig
