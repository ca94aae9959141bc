#include "saig/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "saig/match.hpp"

namespace saig {

long reference_bytes(ReferenceKind kind) {
    return kind == ReferenceKind::desk ? kDeskReferenceBytes : kPaperReferenceBytes;
}

std::vector<EvalRecord> run_eval(const std::vector<SceneRecord>& scenes,
                                 const PolicyParams& policy, const EvalOptions& options) {
    if (options.budget < kMinFrameBytes)
        throw BudgetTooSmallError("budget of " + std::to_string(options.budget) +
                                  " bytes cannot carry the minimal " +
                                  std::to_string(kMinFrameBytes) + "-byte frame");

    std::vector<SceneRecord> ordered = scenes;
    std::sort(ordered.begin(), ordered.end(),
              [](const SceneRecord& a, const SceneRecord& b) { return a.id < b.id; });

    const long reference = reference_bytes(options.reference);
    const int n = static_cast<int>(ordered.size());
    std::vector<EvalRecord> records(ordered.size());

    // Warm the template cache before the parallel region.
    (void)spec_rasters();

#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < n; ++i) {
        const SceneRecord& rec = ordered[static_cast<std::size_t>(i)];
        const Raster original = render(rec.spec);

        // Per-scene generator: every mode and budget replays identical noise.
        Rng rng(scene_seed(options.seed, static_cast<std::uint64_t>(rec.id)));
        const Prompt noisy = apply_noise(encoded_scene_prompt(rec.spec), options.noise, rng);

        std::vector<std::uint8_t> payload;
        if (options.mode == EvalMode::original) {
            // Baseline: ship the noisy text description as-is, no hints.
            payload = serialize(noisy, {});
        } else {
            const Prompt edited = optimize(noisy, policy, options.horizon);
            payload = assemble_payload(edited, original, options.budget);
        }

        const DeserializeResult parsed = deserialize(payload);
        if (!parsed.ok()) throw std::logic_error("run_eval: self-produced payload failed to parse");
        const Raster reconstructed = decode(parsed.frame->prompt, parsed.frame->hints);

        EvalRecord& out = records[static_cast<std::size_t>(i)];
        out.scene_id = rec.id;
        out.true_class = class_of(rec.spec);
        out.rank_of_true = rank_of_class(classify(reconstructed), out.true_class);
        out.payload_bytes = static_cast<int>(payload.size());
        out.compression_ratio = compression_ratio(out.payload_bytes, reference);
        out.quality = quality(reconstructed, original);
    }
    return records;
}

EvalSummary summarize(const std::vector<EvalRecord>& records, const std::vector<int>& k_list) {
    if (records.empty()) throw std::invalid_argument("summarize: empty record set");
    EvalSummary s;
    for (const EvalRecord& r : records) {
        s.mean_quality += r.quality;
        s.mean_ratio += r.compression_ratio;
    }
    s.mean_quality /= static_cast<double>(records.size());
    s.mean_ratio /= static_cast<double>(records.size());
    for (int k : k_list) s.recall.emplace_back(k, recall_at_k(records, k));
    return s;
}

void write_metrics_csv(const std::vector<EvalRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "scene_id,true_class,rank_of_true,payload_bytes,compression_ratio,quality\n";
    char buf[160];
    for (const EvalRecord& r : records) {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.6f,%.6f\n", r.scene_id, r.true_class,
                      r.rank_of_true, r.payload_bytes, r.compression_ratio, r.quality);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<SweepRow> run_sweep(const std::vector<SceneRecord>& scenes,
                                const PolicyParams& policy, const EvalOptions& base,
                                const std::vector<int>& budgets) {
    std::vector<SweepRow> rows;
    rows.reserve(budgets.size());
    for (const int budget : budgets) {
        EvalOptions opt = base;
        opt.budget = budget;
        const std::vector<EvalRecord> records = run_eval(scenes, policy, opt);
        const EvalSummary s = summarize(records, {1, 5});
        rows.push_back({budget, s.mean_quality, s.mean_ratio, s.recall[0].second,
                        s.recall[1].second});
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "budget,mean_quality,mean_ratio,recall@1,recall@5\n";
    char buf[160];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f,%.6f\n", r.budget, r.mean_quality,
                      r.mean_ratio, r.recall1, r.recall5);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace saig
