#pragma once

#include <array>
#include <cstdint>

#include "saig/scene.hpp"

namespace saig {

// Template matching against all 1440 scene renders is the hot kernel behind
// encode_clean() and classify(). Cells are packed into one u32 each so a cell
// comparison is a single integer compare. A serial reference implementation is
// kept alongside the OpenMP variant; both must produce identical tables (unit
// tested) and bench/ compares their throughput.

using PackedRaster = std::array<std::uint32_t, Raster::kCells>;

PackedRaster pack(const Raster& img);

// Cached renders of every spec, indexed by spec_index(). Built on first use.
const std::array<Raster, kSpecCount>& spec_rasters();
const std::array<PackedRaster, kSpecCount>& spec_templates();

// Number of matching cells, 0..864.
int agreement(const PackedRaster& a, const PackedRaster& b);

using AgreementTable = std::array<int, kSpecCount>;

AgreementTable spec_agreements_serial(const Raster& input);
AgreementTable spec_agreements_parallel(const Raster& input);

// Default entry point; dispatches to the parallel kernel.
inline AgreementTable spec_agreements(const Raster& input) {
    return spec_agreements_parallel(input);
}

}  // namespace saig
