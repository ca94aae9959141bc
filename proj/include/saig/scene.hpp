#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "saig/rng.hpp"

namespace saig {

enum class VehicleType : std::uint8_t { sedan, truck, three_wheeler, bus, motorcycle };
enum class Color : std::uint8_t { white, black, red, blue, green, yellow, silver, orange };
enum class Direction : std::uint8_t { left, right, rear_left, rear_right };
enum class Heading : std::uint8_t { toward, away, parallel };
enum class Distance : std::uint8_t { near, mid, far };

inline constexpr int kVehicleTypes = 5;
inline constexpr int kColors = 8;
inline constexpr int kDirections = 4;
inline constexpr int kHeadings = 3;
inline constexpr int kDistances = 3;
inline constexpr int kSpecCount =
    kVehicleTypes * kColors * kDirections * kHeadings * kDistances;  // 1440
inline constexpr int kClassCount = kVehicleTypes * kColors;          // 40

extern const std::array<const char*, kVehicleTypes> kVehicleTypeNames;
extern const std::array<const char*, kColors> kColorNames;
extern const std::array<const char*, kDirections> kDirectionNames;
extern const std::array<const char*, kHeadings> kHeadingNames;
extern const std::array<const char*, kDistances> kDistanceNames;

struct SceneSpec {
    VehicleType vehicle_type = VehicleType::sedan;
    Color color = Color::white;
    Direction direction = Direction::left;
    Heading heading = Heading::toward;
    Distance distance = Distance::near;

    bool operator==(const SceneSpec&) const = default;
};

// Dense index over all 1440 specs, lexicographic in
// (vehicle_type, color, direction, heading, distance).
int spec_index(const SceneSpec& spec);
SceneSpec spec_from_index(int idx);

// Coarse class identity: vehicle type and color, 40 classes. Direction,
// heading and distance are treated as nuisance attributes.
using ClassLabel = int;
ClassLabel class_of(const SceneSpec& spec);

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kBackground{128, 128, 128};
inline constexpr Rgb kMarkerColor{20, 20, 20};    // heading marker, distinct from every body color
inline constexpr Rgb kClutterColor{255, 0, 255};  // hallucinated-object artifact

extern const std::array<Rgb, kColors> kColorValues;

// Cell raster, 36x24 RGB, row-major from the top-left corner.
struct Raster {
    static constexpr int kWidth = 36;
    static constexpr int kHeight = 24;
    static constexpr int kCells = kWidth * kHeight;  // 864
    static constexpr int kBytes = kCells * 3;        // 2592

    std::array<std::uint8_t, kBytes> rgb{};

    std::uint8_t* at(int x, int y) { return rgb.data() + 3 * (y * kWidth + x); }
    const std::uint8_t* at(int x, int y) const { return rgb.data() + 3 * (y * kWidth + x); }

    void set(int x, int y, Rgb c) {
        auto* p = at(x, y);
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }
    Rgb get(int x, int y) const {
        const auto* p = at(x, y);
        return {p[0], p[1], p[2]};
    }
    bool cell_equal(const Raster& other, int cell) const {
        const auto* a = rgb.data() + 3 * cell;
        const auto* b = other.rgb.data() + 3 * cell;
        return a[0] == b[0] && a[1] == b[1] && a[2] == b[2];
    }

    bool operator==(const Raster&) const = default;
};

// Glyph placement: a bounding box anchored per (direction, distance), a
// per-vehicle footprint mask inside that box, and a two-cell heading marker.
// Exposed so tests can recompute footprints independently of render().
struct GlyphBox {
    int x = 0, y = 0, w = 0, h = 0;
};

GlyphBox glyph_box(Direction dir, Distance dist);
bool glyph_mask(VehicleType type, int w, int h, int r, int c);
int glyph_cell_count(VehicleType type, Distance dist);

// The two marker cells in box-relative (row, col) coordinates. Always cells of
// the footprint: front edge for toward/away, side edge for parallel.
std::array<std::pair<int, int>, 2> marker_cells(VehicleType type, Heading heading, int w, int h);

Raster render(const SceneSpec& spec);

// Attribute priors: heading 0.6/0.2/0.2 (toward/away/parallel), all other
// attributes uniform. Draw order: type, color, direction, heading, distance.
SceneSpec generate_scene(Rng& rng);

struct SceneRecord {
    int id = 0;
    std::string split;  // "train" or "test"
    SceneSpec spec;
};

struct Dataset {
    std::vector<SceneRecord> scenes;

    std::vector<SceneRecord> split(const std::string& name) const;
};

// ids 0..n_train+n_test-1; the first n_train records are the train split.
Dataset generate_dataset(int n_train, int n_test, std::uint64_t seed);

// JSONL, one object per scene:
//   {"id":0,"split":"train","vehicle_type":2,"color":5,"direction":0,"heading":1,"distance":2}
// Reading is strict: unknown keys, missing keys, out-of-range values and
// malformed lines all raise DataFormatError.
void write_dataset_jsonl(const Dataset& ds, const std::string& path);
Dataset read_dataset_jsonl(const std::string& path);

struct DataFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace saig
