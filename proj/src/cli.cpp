#include "saig/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

namespace saig {

int run_guarded(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const BudgetTooSmallError& e) {
        std::cerr << "error: BudgetTooSmall: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataFormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw std::invalid_argument("config file " + path + ": not a JSON object");

    static const std::array<const char*, 14> kKeys{
        "seed",        "episodes",     "gamma",      "lr_actor",  "lr_critic",
        "lambda_len",  "horizon",      "p_drop_heading", "p_drop_other", "p_clutter",
        "p_value_swap", "budget",      "mode",       "reference"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find_if(kKeys.begin(), kKeys.end(),
                         [&](const char* k) { return key == k; }) == kKeys.end())
            throw std::invalid_argument("config file " + path + ": unknown key \"" + key + "\"");
    }

    ConfigFile cfg;
    try {
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("episodes")) cfg.episodes = j.at("episodes").get<int>();
        if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
        if (j.contains("lr_actor")) cfg.lr_actor = j.at("lr_actor").get<double>();
        if (j.contains("lr_critic")) cfg.lr_critic = j.at("lr_critic").get<double>();
        if (j.contains("lambda_len")) cfg.lambda_len = j.at("lambda_len").get<double>();
        if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<int>();
        if (j.contains("p_drop_heading"))
            cfg.p_drop_heading = j.at("p_drop_heading").get<double>();
        if (j.contains("p_drop_other")) cfg.p_drop_other = j.at("p_drop_other").get<double>();
        if (j.contains("p_clutter")) cfg.p_clutter = j.at("p_clutter").get<double>();
        if (j.contains("p_value_swap")) cfg.p_value_swap = j.at("p_value_swap").get<double>();
        if (j.contains("budget")) cfg.budget = j.at("budget").get<int>();
        if (j.contains("mode")) cfg.mode = j.at("mode").get<std::string>();
        if (j.contains("reference")) cfg.reference = j.at("reference").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config file " + path + ": " + e.what());
    }
    if (cfg.mode && *cfg.mode != "original" && *cfg.mode != "modified")
        throw std::invalid_argument("config file " + path +
                                    ": mode must be \"original\" or \"modified\"");
    if (cfg.reference && *cfg.reference != "desk" && *cfg.reference != "paper")
        throw std::invalid_argument("config file " + path +
                                    ": reference must be \"desk\" or \"paper\"");
    return cfg;
}

namespace {

void validate_training_config(const TrainingConfig& cfg) {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
    };
    prob(cfg.gamma, "gamma");
    prob(cfg.noise.p_drop_heading, "p_drop_heading");
    prob(cfg.noise.p_drop_other, "p_drop_other");
    prob(cfg.noise.p_clutter, "p_clutter");
    prob(cfg.noise.p_value_swap, "p_value_swap");
    if (!(cfg.lr_actor > 0.0)) throw std::invalid_argument("lr_actor must be > 0");
    if (!(cfg.lr_critic > 0.0)) throw std::invalid_argument("lr_critic must be > 0");
    if (!(cfg.lambda_len >= 0.0)) throw std::invalid_argument("lambda_len must be >= 0");
    if (cfg.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (cfg.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
}

std::vector<SceneSpec> specs_of(const std::vector<SceneRecord>& records) {
    std::vector<SceneSpec> out;
    out.reserve(records.size());
    for (const SceneRecord& r : records) out.push_back(r.spec);
    return out;
}

void print_summary(const EvalSummary& s) {
    char buf[64];
    for (const auto& [k, v] : s.recall) {
        std::snprintf(buf, sizeof buf, "recall@%d=%.6f\n", k, v);
        std::cout << buf;
    }
    std::snprintf(buf, sizeof buf, "mean_ratio=%.6f\n", s.mean_ratio);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "mean_quality=%.6f\n", s.mean_quality);
    std::cout << buf;
}

}  // namespace

int cmd_gen_data(int n_train, int n_test, std::uint64_t seed, const std::string& out_path) {
    return run_guarded([&] {
        if (n_train < 0 || n_test < 0 || n_train + n_test < 1)
            throw std::invalid_argument("dataset sizes must be non-negative and total >= 1");
        const Dataset ds = generate_dataset(n_train, n_test, seed);
        write_dataset_jsonl(ds, out_path);
        std::cout << "wrote " << ds.scenes.size() << " scenes (" << n_train << " train, " << n_test
                  << " test) to " << out_path << '\n';
        return kExitOk;
    });
}

int cmd_train(const TrainCliOptions& opt) {
    return run_guarded([&] {
        validate_training_config(opt.config);
        const Dataset ds = read_dataset_jsonl(opt.data_path);
        const std::vector<SceneRecord> train_split = ds.split("train");
        if (train_split.empty()) throw DataFormatError("dataset has no train scenes");

        const TrainResult result = train(specs_of(train_split), opt.config);
        write_policy_json(result.policy, result.critic, opt.config, opt.out_policy);
        const std::string log_path =
            opt.out_log.empty() ? opt.out_policy + ".log.csv" : opt.out_log;
        write_train_log_csv(result.log, log_path);

        double tail_quality = 0.0;
        const std::size_t tail = std::min<std::size_t>(result.log.size(), 100);
        for (std::size_t i = result.log.size() - tail; i < result.log.size(); ++i)
            tail_quality += result.log[i].mean_quality;
        char buf[96];
        std::snprintf(buf, sizeof buf, "trained %d episodes on %zu scenes, tail quality %.4f\n",
                      opt.config.episodes, train_split.size(), tail_quality / std::max<std::size_t>(tail, 1));
        std::cout << buf << "policy -> " << opt.out_policy << "\nlog -> " << log_path << '\n';
        return kExitOk;
    });
}

int cmd_eval(const EvalCliOptions& opt) {
    return run_guarded([&] {
        for (int k : opt.k_list)
            if (k < 1 || k > kClassCount)
                throw std::invalid_argument("k must be in [1, " + std::to_string(kClassCount) +
                                            "]");
        if (opt.eval.horizon < 1) throw std::invalid_argument("horizon must be >= 1");

        const Dataset ds = read_dataset_jsonl(opt.data_path);
        const std::vector<SceneRecord> test_split = ds.split("test");
        if (test_split.empty()) throw DataFormatError("dataset has no test scenes");
        const LoadedPolicy lp = read_policy_json(opt.policy_path);

        const std::vector<EvalRecord> records = run_eval(test_split, lp.policy, opt.eval);
        write_metrics_csv(records, opt.out_csv);
        print_summary(summarize(records, opt.k_list));
        return kExitOk;
    });
}

int cmd_sweep(const SweepCliOptions& opt) {
    return run_guarded([&] {
        if (opt.budgets.empty()) throw std::invalid_argument("at least one budget is required");
        for (std::size_t i = 0; i < opt.budgets.size(); ++i) {
            if (opt.budgets[i] < kMinFrameBytes)
                throw BudgetTooSmallError("budget of " + std::to_string(opt.budgets[i]) +
                                          " bytes cannot carry the minimal " +
                                          std::to_string(kMinFrameBytes) + "-byte frame");
            if (i > 0 && opt.budgets[i] <= opt.budgets[i - 1])
                throw std::invalid_argument("budgets must be strictly ascending");
        }
        if (opt.eval.horizon < 1) throw std::invalid_argument("horizon must be >= 1");

        const Dataset ds = read_dataset_jsonl(opt.data_path);
        const std::vector<SceneRecord> test_split = ds.split("test");
        if (test_split.empty()) throw DataFormatError("dataset has no test scenes");
        const LoadedPolicy lp = read_policy_json(opt.policy_path);

        EvalOptions base = opt.eval;
        base.mode = EvalMode::modified;  // the sweep always exercises the editor
        const std::vector<SweepRow> rows = run_sweep(test_split, lp.policy, base, opt.budgets);
        write_sweep_csv(rows, opt.out_csv);
        char buf[160];
        for (const SweepRow& r : rows) {
            std::snprintf(buf, sizeof buf, "budget=%d mean_quality=%.6f mean_ratio=%.6f recall@1=%.6f recall@5=%.6f\n",
                          r.budget, r.mean_quality, r.mean_ratio, r.recall1, r.recall5);
            std::cout << buf;
        }
        return kExitOk;
    });
}

int cmd_inspect(const std::string& payload_path) {
    return run_guarded([&] {
        std::ifstream in(payload_path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open payload: " + payload_path);
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());

        char buf[96];
        for (std::size_t off = 0; off < bytes.size(); off += 16) {
            std::snprintf(buf, sizeof buf, "%08zx ", off);
            std::string line = buf;
            for (std::size_t i = off; i < off + 16 && i < bytes.size(); ++i) {
                std::snprintf(buf, sizeof buf, i % 16 == 8 ? " %02x " : "%02x ", bytes[i]);
                line += buf;
            }
            std::cout << line << '\n';
        }

        const DeserializeResult result = deserialize(bytes);
        if (!result.ok()) {
            std::cerr << "error: " << to_string(result.error.kind) << " at offset "
                      << result.error.offset << ": " << result.error.message << '\n';
            return kExitData;
        }
        const Frame& frame = *result.frame;
        std::cout << "payload: " << bytes.size() << " bytes, crc ok\n";
        std::cout << "prompt (" << frame.prompt.size()
                  << " phrases): " << (frame.prompt.empty() ? "<empty>"
                                                            : prompt_to_text(frame.prompt))
                  << '\n';
        if (frame.hints.empty()) {
            std::cout << "hints: none\n";
        } else {
            for (std::size_t i = 0; i < frame.hints.size(); ++i) {
                const HintPatch& h = frame.hints[i];
                std::cout << "hint " << i << ": x=" << h.x << " y=" << h.y << " w=" << h.w
                          << " h=" << h.h << '\n';
            }
        }
        std::snprintf(buf, sizeof buf, "compression: %.2fx desk, %.2fx paper\n",
                      compression_ratio(static_cast<int>(bytes.size()), kDeskReferenceBytes),
                      compression_ratio(static_cast<int>(bytes.size()), kPaperReferenceBytes));
        std::cout << buf;
        return kExitOk;
    });
}

}  // namespace saig
