#include "saig/match.hpp"

namespace saig {

PackedRaster pack(const Raster& img) {
    PackedRaster out;
    for (int cell = 0; cell < Raster::kCells; ++cell) {
        const std::uint8_t* p = img.rgb.data() + 3 * cell;
        out[cell] = (static_cast<std::uint32_t>(p[0]) << 16) |
                    (static_cast<std::uint32_t>(p[1]) << 8) | p[2];
    }
    return out;
}

namespace {

struct TemplateCache {
    std::array<Raster, kSpecCount> rasters;
    std::array<PackedRaster, kSpecCount> packed;

    TemplateCache() {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
        for (int i = 0; i < kSpecCount; ++i) {
            rasters[i] = render(spec_from_index(i));
            packed[i] = pack(rasters[i]);
        }
    }
};

const TemplateCache& cache() {
    static const TemplateCache c;  // magic static: built once, thread-safe
    return c;
}

}  // namespace

const std::array<Raster, kSpecCount>& spec_rasters() { return cache().rasters; }
const std::array<PackedRaster, kSpecCount>& spec_templates() { return cache().packed; }

int agreement(const PackedRaster& a, const PackedRaster& b) {
    int n = 0;
    for (int cell = 0; cell < Raster::kCells; ++cell) n += a[cell] == b[cell];
    return n;
}

AgreementTable spec_agreements_serial(const Raster& input) {
    const PackedRaster in = pack(input);
    const auto& tmpl = spec_templates();
    AgreementTable table;
    for (int i = 0; i < kSpecCount; ++i) table[i] = agreement(in, tmpl[i]);
    return table;
}

AgreementTable spec_agreements_parallel(const Raster& input) {
    const PackedRaster in = pack(input);
    const auto& tmpl = spec_templates();
    AgreementTable table;
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < kSpecCount; ++i) table[i] = agreement(in, tmpl[i]);
    return table;
}

}  // namespace saig
