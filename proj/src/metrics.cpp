#include "saig/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "saig/match.hpp"

namespace saig {

double quality(const Raster& a, const Raster& b) {
    int n = 0;
    for (int cell = 0; cell < Raster::kCells; ++cell) n += a.cell_equal(b, cell);
    return static_cast<double>(n) / Raster::kCells;
}

std::vector<ClassScore> classify(const Raster& image) {
    const AgreementTable table = spec_agreements(image);

    // Spec indices are lexicographic, so the 36 nuisance variants of class c
    // occupy the contiguous block [36c, 36c+36).
    constexpr int kNuisance = kSpecCount / kClassCount;
    std::array<int, kClassCount> best{};
    for (int c = 0; c < kClassCount; ++c) {
        int m = 0;
        for (int i = 0; i < kNuisance; ++i) m = std::max(m, table[c * kNuisance + i]);
        best[c] = m;
    }

    std::vector<ClassScore> out(kClassCount);
    std::array<int, kClassCount> order;
    for (int c = 0; c < kClassCount; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (best[a] != best[b]) return best[a] > best[b];
        return a < b;
    });
    for (int r = 0; r < kClassCount; ++r)
        out[r] = {order[r], static_cast<double>(best[order[r]]) / Raster::kCells};
    return out;
}

int rank_of_class(const std::vector<ClassScore>& ranking, int class_id) {
    for (std::size_t i = 0; i < ranking.size(); ++i)
        if (ranking[i].class_id == class_id) return static_cast<int>(i) + 1;
    throw std::invalid_argument("rank_of_class: class id not present in ranking");
}

double recall_at_k(const std::vector<EvalRecord>& records, int k) {
    if (records.empty()) throw std::invalid_argument("recall_at_k: empty record set");
    if (k < 1 || k > kClassCount) throw std::invalid_argument("recall_at_k: k out of range");
    long hits = 0;
    for (const EvalRecord& r : records) hits += r.rank_of_true <= k;
    return static_cast<double>(hits) / records.size();
}

double compression_ratio(int payload_bytes, long reference_bytes) {
    if (payload_bytes <= 0) throw std::invalid_argument("compression_ratio: payload must be > 0");
    if (reference_bytes <= 0)
        throw std::invalid_argument("compression_ratio: reference must be > 0");
    return static_cast<double>(reference_bytes) / payload_bytes;
}

}  // namespace saig
