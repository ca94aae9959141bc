#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "saig/eval.hpp"

using namespace saig;

namespace {

std::vector<SceneRecord> sample_scenes(int n, std::uint64_t seed) {
    const Dataset data = generate_dataset(n, 0, seed);
    return data.scenes;
}

void check_equal(const EvalRecord& a, const EvalRecord& b) {
    CHECK(a.scene_id == b.scene_id);
    CHECK(a.true_class == b.true_class);
    CHECK(a.rank_of_true == b.rank_of_true);
    CHECK(a.payload_bytes == b.payload_bytes);
    CHECK(a.compression_ratio == b.compression_ratio);
    CHECK(a.quality == b.quality);
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("reference_bytes distinguishes desk and paper scale") {
    CHECK(reference_bytes(ReferenceKind::desk) == 2592);
    CHECK(reference_bytes(ReferenceKind::paper) == 259200);
}

TEST_CASE("run_eval rejects an uncarriable budget in both modes") {
    const auto scenes = sample_scenes(3, 5);
    const PolicyParams policy;
    EvalOptions opt;
    opt.budget = 12;
    opt.mode = EvalMode::modified;
    CHECK_THROWS_AS(run_eval(scenes, policy, opt), BudgetTooSmallError);
    opt.mode = EvalMode::original;
    CHECK_THROWS_AS(run_eval(scenes, policy, opt), BudgetTooSmallError);
}

TEST_CASE("run_eval original mode matches a scene-by-scene replay") {
    const auto scenes = sample_scenes(8, 123);
    const PolicyParams policy;
    EvalOptions opt;
    opt.mode = EvalMode::original;
    opt.seed = 31;

    const auto records = run_eval(scenes, policy, opt);
    REQUIRE(records.size() == scenes.size());

    for (std::size_t i = 0; i < scenes.size(); ++i) {
        const SceneRecord& rec = scenes[i];
        Rng rng(scene_seed(opt.seed, static_cast<std::uint64_t>(rec.id)));
        const Prompt noisy = apply_noise(encoded_scene_prompt(rec.spec), opt.noise, rng);
        const Raster original = render(rec.spec);
        const Raster reconstructed = decode(noisy, {});

        EvalRecord expect;
        expect.scene_id = rec.id;
        expect.true_class = class_of(rec.spec);
        expect.rank_of_true = rank_of_class(classify(reconstructed), expect.true_class);
        expect.payload_bytes = frame_bytes(static_cast<int>(noisy.size()), 0);
        expect.compression_ratio = compression_ratio(expect.payload_bytes, kDeskReferenceBytes);
        expect.quality = quality(reconstructed, original);
        check_equal(records[i], expect);
    }
}

TEST_CASE("run_eval is deterministic and orders records by scene id") {
    auto scenes = sample_scenes(10, 7);
    const PolicyParams policy;
    EvalOptions opt;
    opt.seed = 4;

    const auto baseline = run_eval(scenes, policy, opt);
    std::reverse(scenes.begin(), scenes.end());
    const auto shuffled = run_eval(scenes, policy, opt);

    REQUIRE(baseline.size() == shuffled.size());
    for (std::size_t i = 0; i < baseline.size(); ++i) check_equal(baseline[i], shuffled[i]);
    for (std::size_t i = 1; i < baseline.size(); ++i)
        CHECK(baseline[i - 1].scene_id < baseline[i].scene_id);
}

TEST_CASE("modified mode respects the budget and never loses to text-only") {
    const auto scenes = sample_scenes(10, 21);
    const PolicyParams policy;  // zero policy: the editor stops immediately

    EvalOptions original_opt;
    original_opt.mode = EvalMode::original;
    original_opt.seed = 9;
    EvalOptions modified_opt;
    modified_opt.mode = EvalMode::modified;
    modified_opt.seed = 9;

    const auto original = run_eval(scenes, policy, original_opt);
    const auto modified = run_eval(scenes, policy, modified_opt);
    REQUIRE(original.size() == modified.size());
    for (std::size_t i = 0; i < modified.size(); ++i) {
        CHECK(modified[i].payload_bytes <= modified_opt.budget);
        // Same per-scene noise; the hints can only add matching cells.
        CHECK(modified[i].quality >= original[i].quality);
    }
}

TEST_CASE("paper-scale ratios are exactly 100x the desk ratios") {
    const auto scenes = sample_scenes(5, 77);
    const PolicyParams policy;
    EvalOptions desk;
    desk.seed = 2;
    EvalOptions paper = desk;
    paper.reference = ReferenceKind::paper;

    const auto a = run_eval(scenes, policy, desk);
    const auto b = run_eval(scenes, policy, paper);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].payload_bytes == b[i].payload_bytes);
        CHECK(b[i].compression_ratio == doctest::Approx(100.0 * a[i].compression_ratio)
                                            .epsilon(1e-12));
    }
}

TEST_CASE("summarize averages records and evaluates every requested k") {
    auto rec = [](int rank, double ratio, double q) {
        EvalRecord r;
        r.rank_of_true = rank;
        r.compression_ratio = ratio;
        r.quality = q;
        return r;
    };
    const std::vector<EvalRecord> records{rec(1, 100.0, 1.0), rec(3, 200.0, 0.5),
                                          rec(2, 300.0, 0.75), rec(10, 400.0, 0.25)};
    const EvalSummary s = summarize(records, {1, 2, 5});
    CHECK(s.mean_quality == doctest::Approx(0.625));
    CHECK(s.mean_ratio == doctest::Approx(250.0));
    REQUIRE(s.recall.size() == 3);
    CHECK(s.recall[0] == std::pair<int, double>{1, 0.25});
    CHECK(s.recall[1] == std::pair<int, double>{2, 0.5});
    CHECK(s.recall[2] == std::pair<int, double>{5, 0.75});

    CHECK_THROWS_AS(summarize({}, {1}), std::invalid_argument);
}

TEST_CASE("metrics csv is written in the documented format") {
    EvalRecord a;
    a.scene_id = 0;
    a.true_class = 12;
    a.rank_of_true = 1;
    a.payload_bytes = 23;
    a.compression_ratio = 2592.0 / 23.0;
    a.quality = 1.0;
    EvalRecord b;
    b.scene_id = 1;
    b.true_class = 39;
    b.rank_of_true = 4;
    b.payload_bytes = 139;
    b.compression_ratio = 2592.0 / 139.0;
    b.quality = 0.984375;

    const std::string path = temp_path("saig_metrics.csv");
    write_metrics_csv({a, b}, path);
    CHECK(slurp(path) ==
          "scene_id,true_class,rank_of_true,payload_bytes,compression_ratio,quality\n"
          "0,12,1,23,112.695652,1.000000\n"
          "1,39,4,139,18.647482,0.984375\n");
    std::filesystem::remove(path);
}

TEST_CASE("run_sweep evaluates each budget with the shared seed") {
    const auto scenes = sample_scenes(6, 50);
    const PolicyParams policy;
    EvalOptions base;
    base.seed = 11;

    const std::vector<int> budgets{23, 139, 371};
    const auto rows = run_sweep(scenes, policy, base, budgets);
    REQUIRE(rows.size() == budgets.size());

    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].budget == budgets[i]);
        EvalOptions opt = base;
        opt.budget = budgets[i];
        const EvalSummary s = summarize(run_eval(scenes, policy, opt), {1, 5});
        CHECK(rows[i].mean_quality == s.mean_quality);
        CHECK(rows[i].mean_ratio == s.mean_ratio);
        CHECK(rows[i].recall1 == s.recall[0].second);
        CHECK(rows[i].recall5 == s.recall[1].second);
    }

    const std::string path = temp_path("saig_sweep.csv");
    write_sweep_csv({rows[0]}, path);
    char expect[160];
    std::snprintf(expect, sizeof expect, "budget,mean_quality,mean_ratio,recall@1,recall@5\n"
                                         "%d,%.6f,%.6f,%.6f,%.6f\n",
                  rows[0].budget, rows[0].mean_quality, rows[0].mean_ratio, rows[0].recall1,
                  rows[0].recall5);
    CHECK(slurp(path) == expect);
    std::filesystem::remove(path);
}
