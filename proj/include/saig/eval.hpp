#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "saig/channel.hpp"
#include "saig/metrics.hpp"
#include "saig/rl.hpp"
#include "saig/scene.hpp"

namespace saig {

// "original" transmits the noisy prompt as-is (text only, no hints);
// "modified" runs the trained editor over the prompt first and then packs
// text plus saliency hints into the byte budget.
enum class EvalMode { original, modified };

enum class ReferenceKind { desk, paper };

inline constexpr int kDefaultBudget = 371;  // text frame + 3 hint patches

struct EvalOptions {
    EvalMode mode = EvalMode::modified;
    int budget = kDefaultBudget;
    std::uint64_t seed = 0;
    NoiseConfig noise;
    ReferenceKind reference = ReferenceKind::desk;
    int horizon = 6;
};

long reference_bytes(ReferenceKind kind);

// One record per scene, ordered by scene id. Per-scene noise depends only on
// (options.seed, scene id), so both modes and every budget replay the same
// corruption. Scenes may be processed in parallel.
std::vector<EvalRecord> run_eval(const std::vector<SceneRecord>& scenes,
                                 const PolicyParams& policy, const EvalOptions& options);

struct EvalSummary {
    double mean_quality = 0.0;
    double mean_ratio = 0.0;
    std::vector<std::pair<int, double>> recall;  // (k, recall@k)
};

EvalSummary summarize(const std::vector<EvalRecord>& records, const std::vector<int>& k_list);

// "scene_id,true_class,rank_of_true,payload_bytes,compression_ratio,quality"
void write_metrics_csv(const std::vector<EvalRecord>& records, const std::string& path);

struct SweepRow {
    int budget = 0;
    double mean_quality = 0.0;
    double mean_ratio = 0.0;
    double recall1 = 0.0;
    double recall5 = 0.0;
};

// Repeats run_eval per budget (same seed, so identical noise per scene).
std::vector<SweepRow> run_sweep(const std::vector<SceneRecord>& scenes,
                                const PolicyParams& policy, const EvalOptions& base,
                                const std::vector<int>& budgets);

// "budget,mean_quality,mean_ratio,recall@1,recall@5"
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace saig
