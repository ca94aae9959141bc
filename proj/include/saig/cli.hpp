#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "saig/eval.hpp"
#include "saig/rl.hpp"

namespace saig {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // bad flags or config values
inline constexpr int kExitIo = 2;     // missing or unwritable files
inline constexpr int kExitData = 3;   // malformed data or payloads

// Optional values loaded from a --config JSON file. Flags given explicitly on
// the command line take precedence; unknown keys are rejected.
struct ConfigFile {
    std::optional<std::uint64_t> seed;
    std::optional<int> episodes;
    std::optional<double> gamma;
    std::optional<double> lr_actor;
    std::optional<double> lr_critic;
    std::optional<double> lambda_len;
    std::optional<int> horizon;
    std::optional<double> p_drop_heading;
    std::optional<double> p_drop_other;
    std::optional<double> p_clutter;
    std::optional<double> p_value_swap;
    std::optional<int> budget;
    std::optional<std::string> mode;       // "original" | "modified"
    std::optional<std::string> reference;  // "desk" | "paper"
};

// Throws std::invalid_argument on parse errors, unknown keys or bad values
// (usage exit code); std::runtime_error when the file cannot be read.
ConfigFile parse_config_file(const std::string& path);

// Runs fn, mapping the library exception taxonomy onto exit codes; prints the
// message to stderr. Used by every subcommand and by main() itself.
int run_guarded(const std::function<int()>& fn);

int cmd_gen_data(int n_train, int n_test, std::uint64_t seed, const std::string& out_path);

struct TrainCliOptions {
    std::string data_path;
    std::string out_policy;
    std::string out_log;  // empty -> "<out_policy>.log.csv"
    TrainingConfig config;
};
int cmd_train(const TrainCliOptions& opt);

struct EvalCliOptions {
    std::string data_path;
    std::string policy_path;
    std::string out_csv;
    EvalOptions eval;
    std::vector<int> k_list{1, 5};
};
int cmd_eval(const EvalCliOptions& opt);

struct SweepCliOptions {
    std::string data_path;
    std::string policy_path;
    std::string out_csv;
    EvalOptions eval;  // mode is forced to modified
    std::vector<int> budgets{23, 139, 371, 2810};
};
int cmd_sweep(const SweepCliOptions& opt);

// Hex dump plus decoded field summary, or the parse error with its offset.
int cmd_inspect(const std::string& payload_path);

}  // namespace saig
