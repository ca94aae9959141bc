#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "saig/scene.hpp"

using namespace saig;

namespace {

int non_background_cells(const Raster& img) {
    int n = 0;
    for (int y = 0; y < Raster::kHeight; ++y)
        for (int x = 0; x < Raster::kWidth; ++x) n += !(img.get(x, y) == kBackground);
    return n;
}

std::uint64_t raster_hash(const Raster& img) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (std::uint8_t b : img.rgb) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("spec indexing is a bijection over all 1440 specs") {
    std::set<int> seen;
    for (int i = 0; i < kSpecCount; ++i) {
        const SceneSpec s = spec_from_index(i);
        CHECK(spec_index(s) == i);
        seen.insert(i);
    }
    CHECK(seen.size() == 1440);
    CHECK_THROWS_AS(spec_from_index(1440), std::out_of_range);
    CHECK_THROWS_AS(spec_from_index(-1), std::out_of_range);
}

TEST_CASE("class_of follows vehicle_type*8+color") {
    for (int i = 0; i < kSpecCount; ++i) {
        const SceneSpec s = spec_from_index(i);
        CHECK(class_of(s) ==
              static_cast<int>(s.vehicle_type) * 8 + static_cast<int>(s.color));
    }
    CHECK(class_of({VehicleType::motorcycle, Color::orange, Direction::left, Heading::toward,
                    Distance::near}) == 39);
}

TEST_CASE("glyph footprints match the hand-derived cell counts") {
    // Derived by expanding each mask formula over the three box sizes.
    struct Row {
        VehicleType type;
        int near, mid, far;
    };
    const Row expected[] = {
        {VehicleType::sedan, 96, 48, 20},         {VehicleType::truck, 88, 46, 19},
        {VehicleType::three_wheeler, 53, 27, 12}, {VehicleType::bus, 92, 45, 18},
        {VehicleType::motorcycle, 32, 24, 12},
    };
    for (const Row& row : expected) {
        CHECK(glyph_cell_count(row.type, Distance::near) == row.near);
        CHECK(glyph_cell_count(row.type, Distance::mid) == row.mid);
        CHECK(glyph_cell_count(row.type, Distance::far) == row.far);
    }
}

TEST_CASE("reference scene renders exactly 96 non-background cells") {
    const Raster img = render(
        {VehicleType::sedan, Color::red, Direction::left, Heading::toward, Distance::near});
    CHECK(non_background_cells(img) == 96);
}

TEST_CASE("every render paints the footprint plus a two-cell marker") {
    for (int i = 0; i < kSpecCount; ++i) {
        const SceneSpec s = spec_from_index(i);
        const Raster img = render(s);

        // Markers recolor in-footprint cells, so the lit-cell count equals the
        // footprint size.
        CHECK(non_background_cells(img) == glyph_cell_count(s.vehicle_type, s.distance));

        int marker = 0, body = 0;
        const Rgb body_color = kColorValues[static_cast<int>(s.color)];
        const GlyphBox box = glyph_box(s.direction, s.distance);
        for (int y = 0; y < Raster::kHeight; ++y) {
            for (int x = 0; x < Raster::kWidth; ++x) {
                const Rgb c = img.get(x, y);
                if (c == kBackground) continue;
                CHECK(x >= box.x);
                CHECK(x < box.x + box.w);
                CHECK(y >= box.y);
                CHECK(y < box.y + box.h);
                if (c == kMarkerColor)
                    ++marker;
                else if (c == body_color)
                    ++body;
            }
        }
        CHECK(marker == 2);
        CHECK(body == glyph_cell_count(s.vehicle_type, s.distance) - 2);
    }
}

TEST_CASE("marker positions separate the three headings everywhere") {
    for (int t = 0; t < kVehicleTypes; ++t) {
        for (int d = 0; d < kDistances; ++d) {
            const GlyphBox box = glyph_box(Direction::left, static_cast<Distance>(d));
            const auto toward =
                marker_cells(static_cast<VehicleType>(t), Heading::toward, box.w, box.h);
            const auto away = marker_cells(static_cast<VehicleType>(t), Heading::away, box.w, box.h);
            const auto parallel =
                marker_cells(static_cast<VehicleType>(t), Heading::parallel, box.w, box.h);
            std::set<std::pair<int, int>> all;
            for (const auto& m : {toward, away, parallel}) {
                all.insert(m[0]);
                all.insert(m[1]);
                CHECK(m[0] != m[1]);
                for (const auto& [r, c] : m) {
                    CHECK(glyph_mask(static_cast<VehicleType>(t), box.w, box.h, r, c));
                    CHECK(r >= 0);
                    CHECK(r < box.h);
                    CHECK(c >= 0);
                    CHECK(c < box.w);
                }
            }
            CHECK(all.size() == 6);  // three pairwise-disjoint markers
        }
    }
}

TEST_CASE("all 1440 renders are pairwise distinct") {
    std::set<std::uint64_t> hashes;
    for (int i = 0; i < kSpecCount; ++i) hashes.insert(raster_hash(render(spec_from_index(i))));
    CHECK(hashes.size() == 1440);
}

TEST_CASE("glyph boxes stay inside the raster and clear of the artifact band") {
    for (int d = 0; d < kDirections; ++d) {
        for (int dist = 0; dist < kDistances; ++dist) {
            const GlyphBox box =
                glyph_box(static_cast<Direction>(d), static_cast<Distance>(dist));
            CHECK(box.x >= 0);
            CHECK(box.x + box.w <= Raster::kWidth);
            CHECK(box.y + box.h <= Raster::kHeight);
            CHECK(box.x % 6 == 0);  // anchored to tile columns
            // Glyphs never reach the artifact band in rows 2..5.
            CHECK(box.y >= 6);
        }
    }
}

TEST_CASE("generate_scene follows the attribute priors") {
    Rng rng(123);
    const int n = 10000;
    int heading_counts[3] = {0, 0, 0};
    int type_counts[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < n; ++i) {
        const SceneSpec s = generate_scene(rng);
        ++heading_counts[static_cast<int>(s.heading)];
        ++type_counts[static_cast<int>(s.vehicle_type)];
    }
    CHECK(heading_counts[0] > static_cast<int>(0.58 * n));
    CHECK(heading_counts[0] < static_cast<int>(0.62 * n));
    CHECK(heading_counts[1] > static_cast<int>(0.18 * n));
    CHECK(heading_counts[1] < static_cast<int>(0.22 * n));
    CHECK(heading_counts[2] > static_cast<int>(0.18 * n));
    CHECK(heading_counts[2] < static_cast<int>(0.22 * n));
    for (int t = 0; t < 5; ++t) {
        CHECK(type_counts[t] > static_cast<int>(0.17 * n));
        CHECK(type_counts[t] < static_cast<int>(0.23 * n));
    }
}

TEST_CASE("dataset generation assigns ids and splits in order") {
    const Dataset ds = generate_dataset(7, 3, 99);
    REQUIRE(ds.scenes.size() == 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(ds.scenes[i].id == i);
        CHECK(ds.scenes[i].split == (i < 7 ? "train" : "test"));
    }
    CHECK(ds.split("train").size() == 7);
    CHECK(ds.split("test").size() == 3);
}

TEST_CASE("dataset JSONL round-trips exactly") {
    const std::string path = temp_path("saig_test_dataset.jsonl");
    const Dataset ds = generate_dataset(12, 5, 321);
    write_dataset_jsonl(ds, path);
    const Dataset back = read_dataset_jsonl(path);
    REQUIRE(back.scenes.size() == ds.scenes.size());
    for (std::size_t i = 0; i < ds.scenes.size(); ++i) {
        CHECK(back.scenes[i].id == ds.scenes[i].id);
        CHECK(back.scenes[i].split == ds.scenes[i].split);
        CHECK(back.scenes[i].spec == ds.scenes[i].spec);
    }
    std::filesystem::remove(path);
}

TEST_CASE("dataset reader rejects malformed input") {
    const std::string path = temp_path("saig_test_bad.jsonl");
    auto write_and_expect_throw = [&](const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        out << content;
        out.close();
        CHECK_THROWS_AS(read_dataset_jsonl(path), DataFormatError);
    };
    const std::string good =
        R"({"id":0,"split":"train","vehicle_type":1,"color":2,"direction":3,"heading":0,"distance":1})";

    write_and_expect_throw("not json\n");
    write_and_expect_throw(good + "\n\n" + good + "\n");  // blank line
    write_and_expect_throw(
        R"({"id":0,"split":"train","vehicle_type":1,"color":2,"direction":3,"heading":0,"distance":1,"extra":1})"
        "\n");
    write_and_expect_throw(
        R"({"id":0,"split":"train","vehicle_type":1,"color":2,"direction":3,"heading":0})"
        "\n");  // missing key
    write_and_expect_throw(
        R"({"id":0,"split":"dev","vehicle_type":1,"color":2,"direction":3,"heading":0,"distance":1})"
        "\n");  // bad split
    write_and_expect_throw(
        R"({"id":0,"split":"train","vehicle_type":5,"color":2,"direction":3,"heading":0,"distance":1})"
        "\n");  // vehicle_type out of range
    write_and_expect_throw(
        R"({"id":-1,"split":"train","vehicle_type":1,"color":2,"direction":3,"heading":0,"distance":1})"
        "\n");  // negative id
    write_and_expect_throw(
        R"({"id":0.5,"split":"train","vehicle_type":1,"color":2,"direction":3,"heading":0,"distance":1})"
        "\n");  // non-integer id

    // Control: the well-formed line parses.
    {
        std::ofstream out(path, std::ios::binary);
        out << good << "\n";
    }
    CHECK(read_dataset_jsonl(path).scenes.size() == 1);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(read_dataset_jsonl("/nonexistent/nope.jsonl"), std::runtime_error);
}
