#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "saig/codec.hpp"
#include "saig/rng.hpp"
#include "saig/scene.hpp"

namespace saig {

// Prompt-editing MDP. States are prompts; actions are single edits; the reward
// is the change in text-only reconstruction quality minus a length penalty.
// Actor: masked linear softmax over a fixed 96-entry action table. Critic:
// linear state value, trained by semi-gradient TD(0).

inline constexpr int kFeatureDim = 33;
inline constexpr int kActionSpace = 96;

struct EditAction {
    enum class Kind : std::uint8_t { Stop, Add, Delete, Modify };

    Kind kind = Kind::Stop;
    std::uint8_t attribute = 0;  // Add: real attribute 0..4
    std::uint8_t position = 0;   // Delete/Modify: phrase position 0..7
    std::uint8_t value = 0;      // Add/Modify: attribute value

    bool operator==(const EditAction&) const = default;
};

// Canonical action table:
//   0        Stop
//   1..23    Add(attribute, value), attributes packed at offsets {0,5,13,17,20}
//   24..31   Delete(position)
//   32..95   Modify(position, value), index 32 + position*8 + value
int action_index(const EditAction& action);
EditAction action_from_index(int idx);

// State features (33): for each real attribute, one absence flag followed by a
// value one-hot (blocks of 6,9,5,4,4); then clutter_count/4, length/8, and
// three zero-padded slots reserved for extensions.
using FeatureVector = std::array<double, kFeatureDim>;
FeatureVector featurize(const Prompt& prompt);

// Legal edits of a prompt, in action-table order (Stop first). Add is legal
// iff the attribute is absent and the prompt is shorter than 8; Delete for
// every position; Modify for real-attribute positions and any differing value.
// `allowed` restricts edits to the listed attributes (Stop stays legal).
std::vector<EditAction> legal_actions(const Prompt& prompt);
std::vector<EditAction> legal_actions(const Prompt& prompt,
                                      const std::optional<std::vector<int>>& allowed);

Prompt apply_action(const Prompt& prompt, const EditAction& action);

struct PolicyParams {
    std::array<std::array<double, kFeatureDim>, kActionSpace> theta{};
    std::array<double, kActionSpace> bias{};
};

struct CriticParams {
    std::array<double, kFeatureDim> phi{};
    double bias = 0.0;
};

// Softmax over the legal actions only; probabilities align with
// legal_actions(prompt, allowed) element-for-element.
std::vector<double> policy_probs(const PolicyParams& params, const Prompt& prompt,
                                 const std::optional<std::vector<int>>& allowed = std::nullopt);

double value(const CriticParams& params, const Prompt& prompt);

// r = quality(decode(next), original) - quality(decode(prev), original)
//     - lambda_len * max(0, |next| - |prev|)
double reward(const Prompt& prev, const Prompt& next, const Raster& original, double lambda_len);

// A = r + gamma * v_next - v_cur, with v_next = 0 at terminal states.
double advantage(double r, double v_next, double v_cur, double gamma);

// One policy-gradient step on the masked softmax: for every legal action a
// with probability p_a, theta[a] += lr * adv * (1{a==action} - p_a) * x.
PolicyParams actor_step(const PolicyParams& params, const Prompt& prompt,
                        const EditAction& action, double adv, double lr,
                        const std::optional<std::vector<int>>& allowed = std::nullopt);

// Semi-gradient TD(0): phi += lr * (td_target - V(prompt)) * x, with the
// target computed from the pre-update critic.
CriticParams critic_step(const CriticParams& params, const Prompt& prompt, double td_target,
                         double lr);

struct TrainingConfig {
    double gamma = 0.9;
    double lr_actor = 0.05;
    double lr_critic = 0.1;
    double lambda_len = 0.01;
    int horizon = 6;
    int episodes = 2000;
    std::uint64_t seed = 0;
    NoiseConfig noise;
    // When set, the MDP is restricted to these attributes (plus Stop); used by
    // the small-MDP tests.
    std::optional<std::vector<int>> allowed_attributes;
};

struct TrajectoryStep {
    Prompt state;
    EditAction action;
    double reward = 0.0;
    Prompt next;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    std::vector<double> returns;  // discounted reward-to-go per step
};

struct EpisodeResult {
    Trajectory trajectory;
    PolicyParams policy;
    CriticParams critic;
};

// Runs one episode from apply_noise(encode_clean(render(scene))), updating the
// actor and critic online after every step. Stop terminates with reward 0 and
// is recorded like any other step.
EpisodeResult run_episode(const SceneSpec& scene, const PolicyParams& policy,
                          const CriticParams& critic, const TrainingConfig& cfg, Rng& rng);

struct TrainLogRow {
    int episode = 0;
    double mean_reward = 0.0;
    double mean_quality = 0.0;
};

struct TrainResult {
    PolicyParams policy;
    CriticParams critic;
    std::vector<TrainLogRow> log;
};

// Cycles the training scenes in seeded-shuffled order (reshuffled each pass)
// for cfg.episodes episodes.
TrainResult train(const std::vector<SceneSpec>& scenes, const TrainingConfig& cfg);

// Greedy argmax rollout (first maximum wins) until Stop or the horizon.
Prompt optimize(const Prompt& prompt, const PolicyParams& params, int horizon,
                const std::optional<std::vector<int>>& allowed = std::nullopt);

// Policy snapshot, JSON:
//   {"version":1,"feature_dim":33,"action_space":96,
//    "theta":[[...]],"theta_bias":[...],"phi":[...],"phi_bias":...,
//    "config":{...hyper-parameters...}}
void write_policy_json(const PolicyParams& policy, const CriticParams& critic,
                       const TrainingConfig& cfg, const std::string& path);

struct LoadedPolicy {
    PolicyParams policy;
    CriticParams critic;
    TrainingConfig config;
};

LoadedPolicy read_policy_json(const std::string& path);

void write_train_log_csv(const std::vector<TrainLogRow>& log, const std::string& path);

}  // namespace saig
