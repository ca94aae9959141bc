#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "saig/cli.hpp"

namespace {

using saig::ConfigFile;

// Flags that the user typed always win; otherwise a --config value applies;
// otherwise the built-in default already stored in the target survives.
template <typename T, typename U>
void merge(const CLI::App* cmd, const char* flag, const std::optional<U>& from_config, T& target) {
    if (cmd->count(flag) == 0 && from_config) target = static_cast<T>(*from_config);
}

void merge_noise(const CLI::App* cmd, const ConfigFile& cfg, saig::NoiseConfig& noise) {
    merge(cmd, "--p-drop-heading", cfg.p_drop_heading, noise.p_drop_heading);
    merge(cmd, "--p-drop-other", cfg.p_drop_other, noise.p_drop_other);
    merge(cmd, "--p-clutter", cfg.p_clutter, noise.p_clutter);
    merge(cmd, "--p-value-swap", cfg.p_value_swap, noise.p_value_swap);
}

void add_noise_flags(CLI::App* cmd, saig::NoiseConfig& noise) {
    cmd->add_option("--p-drop-heading", noise.p_drop_heading, "heading drop probability")
        ->capture_default_str();
    cmd->add_option("--p-drop-other", noise.p_drop_other, "non-heading drop probability")
        ->capture_default_str();
    cmd->add_option("--p-clutter", noise.p_clutter, "clutter insertion probability")
        ->capture_default_str();
    cmd->add_option("--p-value-swap", noise.p_value_swap, "color swap probability")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"saig: semantic scene codec with a learned prompt editor"};
    app.require_subcommand(1);

    // gen-data -------------------------------------------------------------
    int gd_train = 200, gd_test = 50;
    std::uint64_t gd_seed = 0;
    std::string gd_out, gd_config;
    CLI::App* gen = app.add_subcommand("gen-data", "generate a scene dataset (JSONL)");
    gen->add_option("--train", gd_train, "number of training scenes")->capture_default_str();
    gen->add_option("--test", gd_test, "number of test scenes")->capture_default_str();
    gen->add_option("--seed", gd_seed, "rng seed")->capture_default_str();
    gen->add_option("--out", gd_out, "output JSONL path")->required();
    gen->add_option("--config", gd_config, "JSON config file");

    // train ------------------------------------------------------------------
    saig::TrainCliOptions tr;
    std::string tr_config;
    CLI::App* train = app.add_subcommand("train", "train the prompt editor");
    train->add_option("--data", tr.data_path, "dataset JSONL path")->required();
    train->add_option("--out", tr.out_policy, "output policy JSON path")->required();
    train->add_option("--log", tr.out_log, "training log CSV path (default <out>.log.csv)");
    train->add_option("--episodes", tr.config.episodes, "training episodes")
        ->capture_default_str();
    train->add_option("--gamma", tr.config.gamma, "discount factor")->capture_default_str();
    train->add_option("--lr-actor", tr.config.lr_actor, "actor learning rate")
        ->capture_default_str();
    train->add_option("--lr-critic", tr.config.lr_critic, "critic learning rate")
        ->capture_default_str();
    train->add_option("--lambda-len", tr.config.lambda_len, "length penalty")
        ->capture_default_str();
    train->add_option("--horizon", tr.config.horizon, "episode horizon")->capture_default_str();
    train->add_option("--seed", tr.config.seed, "rng seed")->capture_default_str();
    add_noise_flags(train, tr.config.noise);
    train->add_option("--config", tr_config, "JSON config file");

    // eval -------------------------------------------------------------------
    saig::EvalCliOptions ev;
    std::string ev_config, ev_mode = "modified", ev_reference = "desk";
    CLI::App* eval = app.add_subcommand("eval", "evaluate a policy on the test split");
    eval->add_option("--data", ev.data_path, "dataset JSONL path")->required();
    eval->add_option("--policy", ev.policy_path, "policy JSON path")->required();
    eval->add_option("--out", ev.out_csv, "output metrics CSV path")->required();
    eval->add_option("--mode", ev_mode, "original | modified")
        ->check(CLI::IsMember({"original", "modified"}))
        ->capture_default_str();
    eval->add_option("--budget", ev.eval.budget, "payload byte budget")->capture_default_str();
    eval->add_option("--seed", ev.eval.seed, "rng seed")->capture_default_str();
    eval->add_option("--reference", ev_reference, "compression reference: desk | paper")
        ->check(CLI::IsMember({"desk", "paper"}))
        ->capture_default_str();
    eval->add_option("--horizon", ev.eval.horizon, "editor rollout horizon")
        ->capture_default_str();
    eval->add_option("--k", ev.k_list, "recall@k cutoffs")->capture_default_str();
    add_noise_flags(eval, ev.eval.noise);
    eval->add_option("--config", ev_config, "JSON config file");

    // sweep ------------------------------------------------------------------
    saig::SweepCliOptions sw;
    std::string sw_config, sw_reference = "desk";
    CLI::App* sweep = app.add_subcommand("sweep", "budget sweep in modified mode");
    sweep->add_option("--data", sw.data_path, "dataset JSONL path")->required();
    sweep->add_option("--policy", sw.policy_path, "policy JSON path")->required();
    sweep->add_option("--out", sw.out_csv, "output sweep CSV path")->required();
    sweep->add_option("--budgets", sw.budgets, "ascending payload budgets")
        ->capture_default_str();
    sweep->add_option("--seed", sw.eval.seed, "rng seed")->capture_default_str();
    sweep->add_option("--reference", sw_reference, "compression reference: desk | paper")
        ->check(CLI::IsMember({"desk", "paper"}))
        ->capture_default_str();
    sweep->add_option("--horizon", sw.eval.horizon, "editor rollout horizon")
        ->capture_default_str();
    add_noise_flags(sweep, sw.eval.noise);
    sweep->add_option("--config", sw_config, "JSON config file");

    // inspect ----------------------------------------------------------------
    std::string in_path;
    CLI::App* inspect = app.add_subcommand("inspect", "hex dump and parse a payload file");
    inspect->add_option("payload", in_path, "payload file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? saig::kExitOk : saig::kExitUsage;
    }

    if (gen->parsed()) {
        return saig::run_guarded([&] {
            if (!gd_config.empty()) {
                const ConfigFile cfg = saig::parse_config_file(gd_config);
                merge(gen, "--seed", cfg.seed, gd_seed);
            }
            return saig::cmd_gen_data(gd_train, gd_test, gd_seed, gd_out);
        });
    }
    if (train->parsed()) {
        return saig::run_guarded([&] {
            if (!tr_config.empty()) {
                const ConfigFile cfg = saig::parse_config_file(tr_config);
                merge(train, "--seed", cfg.seed, tr.config.seed);
                merge(train, "--episodes", cfg.episodes, tr.config.episodes);
                merge(train, "--gamma", cfg.gamma, tr.config.gamma);
                merge(train, "--lr-actor", cfg.lr_actor, tr.config.lr_actor);
                merge(train, "--lr-critic", cfg.lr_critic, tr.config.lr_critic);
                merge(train, "--lambda-len", cfg.lambda_len, tr.config.lambda_len);
                merge(train, "--horizon", cfg.horizon, tr.config.horizon);
                merge_noise(train, cfg, tr.config.noise);
            }
            return saig::cmd_train(tr);
        });
    }
    if (eval->parsed()) {
        return saig::run_guarded([&] {
            if (!ev_config.empty()) {
                const ConfigFile cfg = saig::parse_config_file(ev_config);
                merge(eval, "--seed", cfg.seed, ev.eval.seed);
                merge(eval, "--budget", cfg.budget, ev.eval.budget);
                merge(eval, "--horizon", cfg.horizon, ev.eval.horizon);
                merge(eval, "--mode", cfg.mode, ev_mode);
                merge(eval, "--reference", cfg.reference, ev_reference);
                merge_noise(eval, cfg, ev.eval.noise);
            }
            ev.eval.mode =
                ev_mode == "original" ? saig::EvalMode::original : saig::EvalMode::modified;
            ev.eval.reference = ev_reference == "paper" ? saig::ReferenceKind::paper
                                                        : saig::ReferenceKind::desk;
            return saig::cmd_eval(ev);
        });
    }
    if (sweep->parsed()) {
        return saig::run_guarded([&] {
            if (!sw_config.empty()) {
                const ConfigFile cfg = saig::parse_config_file(sw_config);
                merge(sweep, "--seed", cfg.seed, sw.eval.seed);
                merge(sweep, "--horizon", cfg.horizon, sw.eval.horizon);
                merge(sweep, "--reference", cfg.reference, sw_reference);
                merge_noise(sweep, cfg, sw.eval.noise);
            }
            sw.eval.reference = sw_reference == "paper" ? saig::ReferenceKind::paper
                                                        : saig::ReferenceKind::desk;
            return saig::cmd_sweep(sw);
        });
    }
    return saig::cmd_inspect(in_path);
}
