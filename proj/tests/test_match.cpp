#include <doctest.h>

#include "saig/match.hpp"
#include "saig/rng.hpp"

using namespace saig;

namespace {

Raster random_raster(Rng& rng) {
    Raster img;
    for (auto& b : img.rgb) b = static_cast<std::uint8_t>(rng.next_below(256));
    return img;
}

}  // namespace

TEST_CASE("pack keeps cells comparable") {
    const Raster a = render(spec_from_index(0));
    Raster b = a;
    CHECK(agreement(pack(a), pack(b)) == Raster::kCells);

    b.set(10, 10, {1, 2, 3});
    CHECK(agreement(pack(a), pack(b)) == Raster::kCells - 1);

    // A one-channel difference must break cell equality.
    Raster c = a;
    auto* p = c.at(0, 0);
    p[2] = static_cast<std::uint8_t>(p[2] ^ 0x01);
    CHECK(agreement(pack(a), pack(c)) == Raster::kCells - 1);
}

TEST_CASE("template cache mirrors render") {
    const auto& rasters = spec_rasters();
    const auto& packed = spec_templates();
    for (int i : {0, 1, 777, 1205, 1439}) {
        CHECK(rasters[i] == render(spec_from_index(i)));
        CHECK(agreement(packed[i], pack(render(spec_from_index(i)))) == Raster::kCells);
    }
}

TEST_CASE("serial and parallel agreement kernels are identical") {
    Rng rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        Raster img;
        if (trial % 2 == 0) {
            img = random_raster(rng);
        } else {
            img = render(spec_from_index(static_cast<int>(rng.next_below(kSpecCount))));
            // Corrupt a few cells so the input is not an exact template.
            for (int k = 0; k < 5; ++k) {
                const int x = static_cast<int>(rng.next_below(Raster::kWidth));
                const int y = static_cast<int>(rng.next_below(Raster::kHeight));
                img.set(x, y, {static_cast<std::uint8_t>(rng.next_below(256)),
                               static_cast<std::uint8_t>(rng.next_below(256)),
                               static_cast<std::uint8_t>(rng.next_below(256))});
            }
        }
        const AgreementTable s = spec_agreements_serial(img);
        const AgreementTable p = spec_agreements_parallel(img);
        CHECK(s == p);
    }
}

TEST_CASE("agreement against own template is total") {
    for (int i : {3, 250, 1000}) {
        const AgreementTable t = spec_agreements_serial(spec_rasters()[i]);
        CHECK(t[i] == Raster::kCells);
        for (int j = 0; j < kSpecCount; ++j)
            if (j != i) CHECK(t[j] < Raster::kCells);  // renders are pairwise distinct
    }
}
