#pragma once

#include <vector>

#include "saig/scene.hpp"

namespace saig {

// Reconstruction references for the compression ratio: the desk-scale raster
// itself, and a 360x240 RGB frame at full scale.
inline constexpr long kDeskReferenceBytes = Raster::kBytes;  // 2592
inline constexpr long kPaperReferenceBytes = 360L * 240L * 3L;  // 259200

// Fraction of the 864 cells whose RGB triples match exactly.
double quality(const Raster& a, const Raster& b);

struct ClassScore {
    int class_id = 0;
    double score = 0.0;
};

// Ranks all 40 (vehicle_type, color) classes by the best cell agreement any of
// the class's 36 nuisance renders achieves against the image. Sorted by
// descending score, ties by ascending class id.
std::vector<ClassScore> classify(const Raster& image);

// 1-based rank of class_id in a classify() ranking.
int rank_of_class(const std::vector<ClassScore>& ranking, int class_id);

struct EvalRecord {
    int scene_id = 0;
    int true_class = 0;
    int rank_of_true = 0;
    int payload_bytes = 0;
    double compression_ratio = 0.0;
    double quality = 0.0;
};

// Fraction of records with rank_of_true <= k.
double recall_at_k(const std::vector<EvalRecord>& records, int k);

double compression_ratio(int payload_bytes, long reference_bytes);

}  // namespace saig
