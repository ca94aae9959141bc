#include "saig/scene.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace saig {

const std::array<const char*, kVehicleTypes> kVehicleTypeNames{
    "sedan", "truck", "three_wheeler", "bus", "motorcycle"};
const std::array<const char*, kColors> kColorNames{"white",  "black",  "red",    "blue",
                                                   "green",  "yellow", "silver", "orange"};
const std::array<const char*, kDirections> kDirectionNames{"left", "right", "rear_left",
                                                           "rear_right"};
const std::array<const char*, kHeadings> kHeadingNames{"toward", "away", "parallel"};
const std::array<const char*, kDistances> kDistanceNames{"near", "mid", "far"};

const std::array<Rgb, kColors> kColorValues{{
    {255, 255, 255},  // white
    {0, 0, 0},        // black
    {200, 0, 0},      // red
    {0, 0, 200},      // blue
    {0, 160, 0},      // green
    {240, 220, 0},    // yellow
    {192, 192, 192},  // silver
    {255, 140, 0},    // orange
}};

int spec_index(const SceneSpec& spec) {
    int idx = static_cast<int>(spec.vehicle_type);
    idx = idx * kColors + static_cast<int>(spec.color);
    idx = idx * kDirections + static_cast<int>(spec.direction);
    idx = idx * kHeadings + static_cast<int>(spec.heading);
    idx = idx * kDistances + static_cast<int>(spec.distance);
    return idx;
}

SceneSpec spec_from_index(int idx) {
    if (idx < 0 || idx >= kSpecCount) throw std::out_of_range("spec index out of range");
    SceneSpec s;
    s.distance = static_cast<Distance>(idx % kDistances);
    idx /= kDistances;
    s.heading = static_cast<Heading>(idx % kHeadings);
    idx /= kHeadings;
    s.direction = static_cast<Direction>(idx % kDirections);
    idx /= kDirections;
    s.color = static_cast<Color>(idx % kColors);
    idx /= kColors;
    s.vehicle_type = static_cast<VehicleType>(idx);
    return s;
}

ClassLabel class_of(const SceneSpec& spec) {
    return static_cast<int>(spec.vehicle_type) * kColors + static_cast<int>(spec.color);
}

GlyphBox glyph_box(Direction dir, Distance dist) {
    GlyphBox box;
    switch (dist) {
        case Distance::near: box.w = 12; box.h = 8; break;
        case Distance::mid: box.w = 8; box.h = 6; break;
        case Distance::far: box.w = 5; box.h = 4; break;
    }
    const bool left_side = dir == Direction::left || dir == Direction::rear_left;
    box.x = left_side ? 0 : 24;
    if (dir == Direction::left || dir == Direction::right) {
        box.y = 6;
    } else {
        box.y = dist == Distance::near ? 16 : 18;
    }
    return box;
}

bool glyph_mask(VehicleType type, int w, int h, int r, int c) {
    switch (type) {
        case VehicleType::sedan:
            return true;
        case VehicleType::truck:
            // Notch the cab corner out of the top rows.
            return !(r < h / 4 && c >= w - w / 3);
        case VehicleType::three_wheeler:
            // Wedge widening toward the bottom row.
            return c <= std::max(1, (r + 1) * w / h - 1);
        case VehicleType::bus:
            // Dashed window strip along the top row.
            return !(r == 0 && c % 3 == 1);
        case VehicleType::motorcycle:
            // Narrow middle column band.
            return c >= w / 3 && c < w - w / 3;
    }
    return false;
}

int glyph_cell_count(VehicleType type, Distance dist) {
    GlyphBox box = glyph_box(Direction::left, dist);
    int n = 0;
    for (int r = 0; r < box.h; ++r)
        for (int c = 0; c < box.w; ++c)
            if (glyph_mask(type, box.w, box.h, r, c)) ++n;
    return n;
}

std::array<std::pair<int, int>, 2> marker_cells(VehicleType type, Heading heading, int w, int h) {
    std::array<std::pair<int, int>, 2> out{};
    int found = 0;
    auto take = [&](int r, int c) {
        if (found < 2 && glyph_mask(type, w, h, r, c)) out[found++] = {r, c};
    };
    switch (heading) {
        case Heading::toward:  // bottom edge, scanning upward
            for (int r = h - 1; r >= 0 && found < 2; --r)
                for (int c = 0; c < w && found < 2; ++c) take(r, c);
            break;
        case Heading::away:  // top edge, scanning downward
            for (int r = 0; r < h && found < 2; ++r)
                for (int c = 0; c < w && found < 2; ++c) take(r, c);
            break;
        case Heading::parallel:  // side edge, scanning right to left
            for (int c = w - 1; c >= 0 && found < 2; --c)
                for (int r = 0; r < h && found < 2; ++r) take(r, c);
            break;
    }
    return out;
}

Raster render(const SceneSpec& spec) {
    Raster img;
    for (int cell = 0; cell < Raster::kCells; ++cell) {
        img.rgb[3 * cell + 0] = kBackground.r;
        img.rgb[3 * cell + 1] = kBackground.g;
        img.rgb[3 * cell + 2] = kBackground.b;
    }
    const GlyphBox box = glyph_box(spec.direction, spec.distance);
    const Rgb body = kColorValues[static_cast<int>(spec.color)];
    for (int r = 0; r < box.h; ++r)
        for (int c = 0; c < box.w; ++c)
            if (glyph_mask(spec.vehicle_type, box.w, box.h, r, c))
                img.set(box.x + c, box.y + r, body);
    for (auto [r, c] : marker_cells(spec.vehicle_type, spec.heading, box.w, box.h))
        img.set(box.x + c, box.y + r, kMarkerColor);
    return img;
}

SceneSpec generate_scene(Rng& rng) {
    SceneSpec s;
    s.vehicle_type = static_cast<VehicleType>(rng.next_below(kVehicleTypes));
    s.color = static_cast<Color>(rng.next_below(kColors));
    s.direction = static_cast<Direction>(rng.next_below(kDirections));
    const std::uint32_t h = rng.next_below(10);
    s.heading = h < 6 ? Heading::toward : h < 8 ? Heading::away : Heading::parallel;
    s.distance = static_cast<Distance>(rng.next_below(kDistances));
    return s;
}

std::vector<SceneRecord> Dataset::split(const std::string& name) const {
    std::vector<SceneRecord> out;
    for (const auto& s : scenes)
        if (s.split == name) out.push_back(s);
    return out;
}

Dataset generate_dataset(int n_train, int n_test, std::uint64_t seed) {
    if (n_train < 0 || n_test < 0) throw std::invalid_argument("negative dataset size");
    Rng rng(seed);
    Dataset ds;
    ds.scenes.reserve(static_cast<std::size_t>(n_train) + n_test);
    for (int i = 0; i < n_train + n_test; ++i) {
        SceneRecord rec;
        rec.id = i;
        rec.split = i < n_train ? "train" : "test";
        rec.spec = generate_scene(rng);
        ds.scenes.push_back(std::move(rec));
    }
    return ds;
}

void write_dataset_jsonl(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& rec : ds.scenes) {
        nlohmann::ordered_json j;
        j["id"] = rec.id;
        j["split"] = rec.split;
        j["vehicle_type"] = static_cast<int>(rec.spec.vehicle_type);
        j["color"] = static_cast<int>(rec.spec.color);
        j["direction"] = static_cast<int>(rec.spec.direction);
        j["heading"] = static_cast<int>(rec.spec.heading);
        j["distance"] = static_cast<int>(rec.spec.distance);
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

int require_range(const nlohmann::json& j, const char* key, int lo, int hi, int lineno) {
    const auto& v = j.at(key);
    if (!v.is_number_integer())
        throw DataFormatError("dataset line " + std::to_string(lineno) + ": \"" + key +
                              "\" must be an integer");
    const long long x = v.get<long long>();
    if (x < lo || x > hi)
        throw DataFormatError("dataset line " + std::to_string(lineno) + ": \"" + key +
                              "\" out of range");
    return static_cast<int>(x);
}

}  // namespace

Dataset read_dataset_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset: " + path);

    static const std::array<const char*, 7> kKeys{"id",      "split",   "vehicle_type", "color",
                                                  "direction", "heading", "distance"};
    Dataset ds;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            throw DataFormatError("dataset line " + std::to_string(lineno) + ": empty line");
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw DataFormatError("dataset line " + std::to_string(lineno) + ": not a JSON object");
        for (const auto& [key, value] : j.items()) {
            (void)value;
            if (std::find_if(kKeys.begin(), kKeys.end(),
                             [&](const char* k) { return key == k; }) == kKeys.end())
                throw DataFormatError("dataset line " + std::to_string(lineno) +
                                      ": unknown key \"" + key + "\"");
        }
        for (const char* key : kKeys)
            if (!j.contains(key))
                throw DataFormatError("dataset line " + std::to_string(lineno) +
                                      ": missing key \"" + key + "\"");

        SceneRecord rec;
        rec.id = require_range(j, "id", 0, std::numeric_limits<int>::max(), lineno);
        if (!j.at("split").is_string())
            throw DataFormatError("dataset line " + std::to_string(lineno) +
                                  ": \"split\" must be a string");
        rec.split = j.at("split").get<std::string>();
        if (rec.split != "train" && rec.split != "test")
            throw DataFormatError("dataset line " + std::to_string(lineno) +
                                  ": split must be \"train\" or \"test\"");
        rec.spec.vehicle_type =
            static_cast<VehicleType>(require_range(j, "vehicle_type", 0, kVehicleTypes - 1, lineno));
        rec.spec.color = static_cast<Color>(require_range(j, "color", 0, kColors - 1, lineno));
        rec.spec.direction =
            static_cast<Direction>(require_range(j, "direction", 0, kDirections - 1, lineno));
        rec.spec.heading =
            static_cast<Heading>(require_range(j, "heading", 0, kHeadings - 1, lineno));
        rec.spec.distance =
            static_cast<Distance>(require_range(j, "distance", 0, kDistances - 1, lineno));
        ds.scenes.push_back(std::move(rec));
    }
    return ds;
}

}  // namespace saig
