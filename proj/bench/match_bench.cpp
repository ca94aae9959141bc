#include <chrono>
#include <cstdio>
#include <vector>

#include "saig/codec.hpp"
#include "saig/match.hpp"
#include "saig/rng.hpp"
#include "saig/scene.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<saig::Raster> make_inputs(int n, std::uint32_t seed) {
    saig::Rng rng(seed);
    std::vector<saig::Raster> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        saig::SceneSpec spec = saig::generate_scene(rng);
        saig::Raster img = saig::render(spec);
        // Perturb a few cells so matching is not a trivial exact hit.
        for (int k = 0; k < 24; ++k) {
            const int x = static_cast<int>(rng.next_below(saig::Raster::kWidth));
            const int y = static_cast<int>(rng.next_below(saig::Raster::kHeight));
            img.set(x, y, {static_cast<std::uint8_t>(rng.next_below(256)),
                           static_cast<std::uint8_t>(rng.next_below(256)),
                           static_cast<std::uint8_t>(rng.next_below(256))});
        }
        out.push_back(img);
    }
    return out;
}

}  // namespace

int main() {
    using namespace saig;

    constexpr int kIterations = 200;
    const std::vector<Raster> inputs = make_inputs(kIterations, 20260816);

    spec_templates();  // build the template cache outside the timed region

    long checksum_serial = 0;
    auto t0 = Clock::now();
    for (const Raster& img : inputs) {
        const AgreementTable table = spec_agreements_serial(img);
        checksum_serial += table[0] + table[kSpecCount - 1];
    }
    const double serial_s = seconds_since(t0);

    long checksum_parallel = 0;
    t0 = Clock::now();
    for (const Raster& img : inputs) {
        const AgreementTable table = spec_agreements_parallel(img);
        checksum_parallel += table[0] + table[kSpecCount - 1];
    }
    const double parallel_s = seconds_since(t0);

    if (checksum_serial != checksum_parallel) {
        std::fprintf(stderr, "kernel mismatch: serial %ld vs parallel %ld\n", checksum_serial,
                     checksum_parallel);
        return 1;
    }

    long encoded = 0;
    t0 = Clock::now();
    for (const Raster& img : inputs) encoded += static_cast<long>(encode_clean(img).size());
    const double encode_s = seconds_since(t0);

    const double per_serial = serial_s / kIterations * 1e3;
    const double per_parallel = parallel_s / kIterations * 1e3;
    std::printf("spec_agreements over %d rasters (%d templates each)\n", kIterations, kSpecCount);
    std::printf("  %-10s %10s %14s\n", "kernel", "total s", "ms / raster");
    std::printf("  %-10s %10.3f %14.3f\n", "serial", serial_s, per_serial);
    std::printf("  %-10s %10.3f %14.3f\n", "parallel", parallel_s, per_parallel);
    std::printf("  speedup    %10.2fx\n", serial_s / parallel_s);
    std::printf("encode_clean: %.3f ms / raster (%ld phrases emitted)\n",
                encode_s / kIterations * 1e3, encoded);
    return 0;
}
