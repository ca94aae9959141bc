#include "saig/codec.hpp"

#include <algorithm>
#include <mutex>

#include "saig/match.hpp"

namespace saig {

const std::array<const char*, kAttrCount> kAttrNames{"vehicle_type", "color",    "direction",
                                                     "heading",      "distance", "clutter"};

namespace {

const char* value_name(int attribute, int value) {
    switch (attribute) {
        case kAttrVehicleType: return kVehicleTypeNames[value];
        case kAttrColor: return kColorNames[value];
        case kAttrDirection: return kDirectionNames[value];
        case kAttrHeading: return kHeadingNames[value];
        case kAttrDistance: return kDistanceNames[value];
        default: return nullptr;
    }
}

int value_from_name(int attribute, const std::string& name) {
    const int n = kAttrCardinality[attribute];
    for (int v = 0; v < n; ++v)
        if (name == value_name(attribute, v)) return v;
    return -1;
}

}  // namespace

bool prompt_valid(const Prompt& prompt) {
    if (prompt.size() > static_cast<std::size_t>(kMaxPromptLen)) return false;
    std::array<int, kAttrCount> counts{};
    int last_real = -1;
    bool seen_clutter = false;
    for (const Phrase& p : prompt) {
        if (p.attribute >= kAttrCount) return false;
        if (p.value >= kAttrCardinality[p.attribute]) return false;
        ++counts[p.attribute];
        if (p.attribute == kAttrClutter) {
            seen_clutter = true;
        } else {
            if (seen_clutter) return false;           // clutter must come last
            if (p.attribute <= last_real) return false;  // ascending, no repeats
            last_real = p.attribute;
        }
    }
    for (int a = 0; a < kAttrClutter; ++a)
        if (counts[a] > 1) return false;
    return counts[kAttrClutter] <= kMaxClutterPhrases;
}

std::string prompt_to_text(const Prompt& prompt) {
    std::string out;
    for (std::size_t i = 0; i < prompt.size(); ++i) {
        if (i > 0) out += ';';
        const Phrase& p = prompt[i];
        out += kAttrNames[p.attribute];
        out += '=';
        if (p.attribute == kAttrClutter)
            out += static_cast<char>('0' + p.value);
        else
            out += value_name(p.attribute, p.value);
    }
    return out;
}

std::optional<Prompt> prompt_from_text(const std::string& text) {
    Prompt prompt;
    if (!text.empty()) {
        std::size_t pos = 0;
        while (true) {
            const std::size_t semi = text.find(';', pos);
            const std::string token =
                text.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
            const std::size_t eq = token.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 >= token.size()) return std::nullopt;
            const std::string attr_name = token.substr(0, eq);
            const std::string value_str = token.substr(eq + 1);

            int attribute = -1;
            for (int a = 0; a < kAttrCount; ++a)
                if (attr_name == kAttrNames[a]) attribute = a;
            if (attribute < 0) return std::nullopt;

            int value = -1;
            if (attribute == kAttrClutter) {
                if (value_str.size() == 1 && value_str[0] >= '0' && value_str[0] <= '3')
                    value = value_str[0] - '0';
            } else {
                value = value_from_name(attribute, value_str);
            }
            if (value < 0) return std::nullopt;

            prompt.push_back({static_cast<std::uint8_t>(attribute),
                              static_cast<std::uint8_t>(value)});
            if (semi == std::string::npos) break;
            pos = semi + 1;
        }
    }
    if (!prompt_valid(prompt)) return std::nullopt;
    return prompt;
}

Prompt prompt_from_spec(const SceneSpec& spec) {
    return {{kAttrVehicleType, static_cast<std::uint8_t>(spec.vehicle_type)},
            {kAttrColor, static_cast<std::uint8_t>(spec.color)},
            {kAttrDirection, static_cast<std::uint8_t>(spec.direction)},
            {kAttrHeading, static_cast<std::uint8_t>(spec.heading)},
            {kAttrDistance, static_cast<std::uint8_t>(spec.distance)}};
}

SceneSpec spec_from_prompt(const Prompt& prompt) {
    SceneSpec spec = kDecodeDefaults;
    for (const Phrase& p : prompt) {
        switch (p.attribute) {
            case kAttrVehicleType: spec.vehicle_type = static_cast<VehicleType>(p.value); break;
            case kAttrColor: spec.color = static_cast<Color>(p.value); break;
            case kAttrDirection: spec.direction = static_cast<Direction>(p.value); break;
            case kAttrHeading: spec.heading = static_cast<Heading>(p.value); break;
            case kAttrDistance: spec.distance = static_cast<Distance>(p.value); break;
            default: break;  // clutter phrases carry no scene attribute
        }
    }
    return spec;
}

Prompt encode_clean(const Raster& image) {
    const AgreementTable table = spec_agreements(image);
    int best = 0;
    for (int i = 1; i < kSpecCount; ++i)
        if (table[i] > table[best]) best = i;  // ties keep the smallest index
    return prompt_from_spec(spec_from_index(best));
}

const Prompt& encoded_scene_prompt(const SceneSpec& spec) {
    static std::array<Prompt, kSpecCount> memo;
    static std::array<std::once_flag, kSpecCount> flags;
    const int idx = spec_index(spec);
    std::call_once(flags[idx], [&] { memo[idx] = encode_clean(render(spec)); });
    return memo[idx];
}

Prompt apply_noise(const Prompt& prompt, const NoiseConfig& cfg, Rng& rng) {
    if (!prompt_valid(prompt)) throw std::invalid_argument("apply_noise: invalid prompt");
    Prompt out;
    for (const Phrase& p : prompt) {
        const double p_drop = p.attribute == kAttrHeading ? cfg.p_drop_heading : cfg.p_drop_other;
        if (!rng.bernoulli(p_drop)) out.push_back(p);
    }
    // Hallucinated-object insertion. The draws are always consumed; the phrase
    // is only appended while the prompt invariants allow it.
    if (rng.bernoulli(cfg.p_clutter)) {
        const std::uint8_t v =
            static_cast<std::uint8_t>(rng.next_below(kAttrCardinality[kAttrClutter]));
        const long clutter = std::count_if(out.begin(), out.end(), [](const Phrase& p) {
            return p.attribute == kAttrClutter;
        });
        if (out.size() < static_cast<std::size_t>(kMaxPromptLen) && clutter < kMaxClutterPhrases)
            out.push_back({kAttrClutter, v});
    }
    // Value corruption: the surviving color phrase may flip to a wrong color.
    if (rng.bernoulli(cfg.p_value_swap)) {
        const std::uint32_t wrong = rng.next_below(kColors - 1);
        for (Phrase& p : out) {
            if (p.attribute == kAttrColor) {
                p.value = static_cast<std::uint8_t>(wrong >= p.value ? wrong + 1 : wrong);
                break;
            }
        }
    }
    return out;
}

Raster decode(const Prompt& prompt, const std::vector<HintPatch>& hints) {
    if (!prompt_valid(prompt)) throw std::invalid_argument("decode: invalid prompt");
    Raster img = render(spec_from_prompt(prompt));
    for (const Phrase& p : prompt) {
        if (p.attribute != kAttrClutter) continue;
        const int x0 = artifact_x(p.value);
        for (int dy = 0; dy < kArtifactSize; ++dy)
            for (int dx = 0; dx < kArtifactSize; ++dx)
                img.set(x0 + dx, kArtifactY + dy, kClutterColor);
    }
    for (const HintPatch& hint : hints) {
        if (hint.w == 0 || hint.h == 0)
            throw std::invalid_argument("decode: empty hint patch");
        if (hint.pixels.size() != static_cast<std::size_t>(hint.w) * hint.h * 3)
            throw std::invalid_argument("decode: hint pixel payload size mismatch");
        if (hint.x + hint.w > Raster::kWidth || hint.y + hint.h > Raster::kHeight)
            throw std::out_of_range("decode: hint patch exceeds raster bounds");
        const std::uint8_t* src = hint.pixels.data();
        for (int dy = 0; dy < hint.h; ++dy) {
            for (int dx = 0; dx < hint.w; ++dx, src += 3) {
                img.set(hint.x + dx, hint.y + dy, {src[0], src[1], src[2]});
            }
        }
    }
    return img;
}

}  // namespace saig
