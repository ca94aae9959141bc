#include "saig/rl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "saig/metrics.hpp"

namespace saig {

namespace {

// Start of each attribute's Add block inside indices 1..23 (cumulative
// cardinalities 5, 8, 4, 3 of the preceding attributes).
constexpr std::array<int, 5> kAddOffset{0, 5, 13, 17, 20};
constexpr int kAddCount = 23;
constexpr int kDeleteBase = 1 + kAddCount;  // 24
constexpr int kModifyBase = kDeleteBase + kMaxPromptLen;  // 32

// Feature offset of each real attribute's (absence flag + value one-hot) block.
constexpr std::array<int, 5> kFeatureOffset{0, 6, 15, 20, 24};

bool attr_allowed(int attribute, const std::optional<std::vector<int>>& allowed) {
    if (!allowed) return true;
    return std::find(allowed->begin(), allowed->end(), attribute) != allowed->end();
}

}  // namespace

int action_index(const EditAction& action) {
    switch (action.kind) {
        case EditAction::Kind::Stop:
            return 0;
        case EditAction::Kind::Add:
            if (action.attribute >= kAttrClutter ||
                action.value >= kAttrCardinality[action.attribute])
                throw std::invalid_argument("action_index: bad Add action");
            return 1 + kAddOffset[action.attribute] + action.value;
        case EditAction::Kind::Delete:
            if (action.position >= kMaxPromptLen)
                throw std::invalid_argument("action_index: bad Delete action");
            return kDeleteBase + action.position;
        case EditAction::Kind::Modify:
            if (action.position >= kMaxPromptLen || action.value >= kColors)
                throw std::invalid_argument("action_index: bad Modify action");
            return kModifyBase + action.position * kColors + action.value;
    }
    throw std::invalid_argument("action_index: bad action kind");
}

EditAction action_from_index(int idx) {
    if (idx < 0 || idx >= kActionSpace) throw std::out_of_range("action index out of range");
    EditAction a;
    if (idx == 0) return a;
    if (idx < kDeleteBase) {
        a.kind = EditAction::Kind::Add;
        const int off = idx - 1;
        int attribute = 4;
        while (off < kAddOffset[attribute]) --attribute;
        a.attribute = static_cast<std::uint8_t>(attribute);
        a.value = static_cast<std::uint8_t>(off - kAddOffset[attribute]);
        return a;
    }
    if (idx < kModifyBase) {
        a.kind = EditAction::Kind::Delete;
        a.position = static_cast<std::uint8_t>(idx - kDeleteBase);
        return a;
    }
    a.kind = EditAction::Kind::Modify;
    a.position = static_cast<std::uint8_t>((idx - kModifyBase) / kColors);
    a.value = static_cast<std::uint8_t>((idx - kModifyBase) % kColors);
    return a;
}

FeatureVector featurize(const Prompt& prompt) {
    if (!prompt_valid(prompt)) throw std::invalid_argument("featurize: invalid prompt");
    FeatureVector x{};
    std::array<int, 5> present_value;
    present_value.fill(-1);
    int clutter = 0;
    for (const Phrase& p : prompt) {
        if (p.attribute == kAttrClutter)
            ++clutter;
        else
            present_value[p.attribute] = p.value;
    }
    for (int a = 0; a < 5; ++a) {
        if (present_value[a] < 0)
            x[kFeatureOffset[a]] = 1.0;
        else
            x[kFeatureOffset[a] + 1 + present_value[a]] = 1.0;
    }
    x[28] = clutter / 4.0;
    x[29] = prompt.size() / 8.0;
    // x[30..32] stay zero: reserved extension slots.
    return x;
}

std::vector<EditAction> legal_actions(const Prompt& prompt) {
    return legal_actions(prompt, std::nullopt);
}

std::vector<EditAction> legal_actions(const Prompt& prompt,
                                      const std::optional<std::vector<int>>& allowed) {
    if (!prompt_valid(prompt)) throw std::invalid_argument("legal_actions: invalid prompt");
    std::array<bool, 5> present{};
    for (const Phrase& p : prompt)
        if (p.attribute < kAttrClutter) present[p.attribute] = true;

    std::vector<EditAction> out;
    out.push_back({});  // Stop

    if (prompt.size() < static_cast<std::size_t>(kMaxPromptLen)) {
        for (std::uint8_t a = 0; a < kAttrClutter; ++a) {
            if (present[a] || !attr_allowed(a, allowed)) continue;
            for (std::uint8_t v = 0; v < kAttrCardinality[a]; ++v)
                out.push_back({EditAction::Kind::Add, a, 0, v});
        }
    }
    for (std::size_t pos = 0; pos < prompt.size(); ++pos)
        if (attr_allowed(prompt[pos].attribute, allowed))
            out.push_back({EditAction::Kind::Delete, 0, static_cast<std::uint8_t>(pos), 0});
    for (std::size_t pos = 0; pos < prompt.size(); ++pos) {
        const Phrase& p = prompt[pos];
        if (p.attribute >= kAttrClutter || !attr_allowed(p.attribute, allowed)) continue;
        for (std::uint8_t v = 0; v < kAttrCardinality[p.attribute]; ++v)
            if (v != p.value)
                out.push_back({EditAction::Kind::Modify, 0, static_cast<std::uint8_t>(pos), v});
    }
    return out;
}

Prompt apply_action(const Prompt& prompt, const EditAction& action) {
    if (!prompt_valid(prompt)) throw std::invalid_argument("apply_action: invalid prompt");
    Prompt out = prompt;
    switch (action.kind) {
        case EditAction::Kind::Stop:
            return out;
        case EditAction::Kind::Add: {
            if (action.attribute >= kAttrClutter ||
                action.value >= kAttrCardinality[action.attribute])
                throw std::invalid_argument("apply_action: bad Add");
            if (out.size() >= static_cast<std::size_t>(kMaxPromptLen))
                throw std::invalid_argument("apply_action: prompt already full");
            for (const Phrase& p : out)
                if (p.attribute == action.attribute)
                    throw std::invalid_argument("apply_action: attribute already present");
            auto it = std::find_if(out.begin(), out.end(), [&](const Phrase& p) {
                return p.attribute > action.attribute;
            });
            out.insert(it, {action.attribute, action.value});
            return out;
        }
        case EditAction::Kind::Delete:
            if (action.position >= out.size())
                throw std::invalid_argument("apply_action: Delete position out of range");
            out.erase(out.begin() + action.position);
            return out;
        case EditAction::Kind::Modify: {
            if (action.position >= out.size())
                throw std::invalid_argument("apply_action: Modify position out of range");
            Phrase& p = out[action.position];
            if (p.attribute >= kAttrClutter)
                throw std::invalid_argument("apply_action: cannot modify a clutter phrase");
            if (action.value >= kAttrCardinality[p.attribute] || action.value == p.value)
                throw std::invalid_argument("apply_action: bad Modify value");
            p.value = action.value;
            return out;
        }
    }
    throw std::invalid_argument("apply_action: bad action kind");
}

std::vector<double> policy_probs(const PolicyParams& params, const Prompt& prompt,
                                 const std::optional<std::vector<int>>& allowed) {
    const std::vector<EditAction> legal = legal_actions(prompt, allowed);
    const FeatureVector x = featurize(prompt);
    std::vector<double> logits(legal.size());
    for (std::size_t i = 0; i < legal.size(); ++i) {
        const int row = action_index(legal[i]);
        double z = params.bias[row];
        for (int d = 0; d < kFeatureDim; ++d) z += params.theta[row][d] * x[d];
        logits[i] = z;
    }
    const double zmax = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double& z : logits) {
        z = std::exp(z - zmax);
        sum += z;
    }
    for (double& z : logits) z /= sum;
    return logits;
}

double value(const CriticParams& params, const Prompt& prompt) {
    const FeatureVector x = featurize(prompt);
    double v = params.bias;
    for (int d = 0; d < kFeatureDim; ++d) v += params.phi[d] * x[d];
    return v;
}

double reward(const Prompt& prev, const Prompt& next, const Raster& original, double lambda_len) {
    const double q_next = quality(decode(next, {}), original);
    const double q_prev = quality(decode(prev, {}), original);
    const double growth =
        std::max(0, static_cast<int>(next.size()) - static_cast<int>(prev.size()));
    return q_next - q_prev - lambda_len * growth;
}

double advantage(double r, double v_next, double v_cur, double gamma) {
    return r + gamma * v_next - v_cur;
}

PolicyParams actor_step(const PolicyParams& params, const Prompt& prompt,
                        const EditAction& action, double adv, double lr,
                        const std::optional<std::vector<int>>& allowed) {
    const std::vector<EditAction> legal = legal_actions(prompt, allowed);
    const std::vector<double> probs = policy_probs(params, prompt, allowed);
    const FeatureVector x = featurize(prompt);
    if (std::find(legal.begin(), legal.end(), action) == legal.end())
        throw std::invalid_argument("actor_step: action not legal in this state");

    PolicyParams out = params;
    for (std::size_t i = 0; i < legal.size(); ++i) {
        const double g = (legal[i] == action ? 1.0 : 0.0) - probs[i];
        const double step = lr * adv * g;
        const int row = action_index(legal[i]);
        for (int d = 0; d < kFeatureDim; ++d) out.theta[row][d] += step * x[d];
        out.bias[row] += step;
    }
    return out;
}

CriticParams critic_step(const CriticParams& params, const Prompt& prompt, double td_target,
                         double lr) {
    const FeatureVector x = featurize(prompt);
    const double delta = td_target - value(params, prompt);
    CriticParams out = params;
    for (int d = 0; d < kFeatureDim; ++d) out.phi[d] += lr * delta * x[d];
    out.bias += lr * delta;
    return out;
}

EpisodeResult run_episode(const SceneSpec& scene, const PolicyParams& policy,
                          const CriticParams& critic, const TrainingConfig& cfg, Rng& rng) {
    EpisodeResult res{{}, policy, critic};
    const Raster original = render(scene);
    Prompt state = apply_noise(encoded_scene_prompt(scene), cfg.noise, rng);

    for (int t = 0; t < cfg.horizon; ++t) {
        const std::vector<EditAction> legal = legal_actions(state, cfg.allowed_attributes);
        const std::vector<double> probs = policy_probs(res.policy, state, cfg.allowed_attributes);

        // Inverse-CDF draw; the final slot absorbs any rounding slack.
        const double u = rng.next_unit();
        std::size_t pick = legal.size() - 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) {
                pick = i;
                break;
            }
        }
        const EditAction action = legal[pick];

        // Stop terminates the episode; no edit happened, so no update is made.
        // The step is still recorded (reward 0) so trajectories always end at
        // Stop or the horizon.
        if (action.kind == EditAction::Kind::Stop) {
            res.trajectory.steps.push_back({state, action, 0.0, state});
            break;
        }

        const Prompt next = apply_action(state, action);
        const double r = reward(state, next, original, cfg.lambda_len);
        const bool terminal = t + 1 == cfg.horizon;

        const double v_cur = value(res.critic, state);
        const double v_next = terminal ? 0.0 : value(res.critic, next);
        const double adv = advantage(r, v_next, v_cur, cfg.gamma);
        const double td_target = r + cfg.gamma * v_next;  // frozen pre-update target

        res.policy = actor_step(res.policy, state, action, adv, cfg.lr_actor,
                                cfg.allowed_attributes);
        res.critic = critic_step(res.critic, state, td_target, cfg.lr_critic);

        res.trajectory.steps.push_back({state, action, r, next});
        state = next;
    }

    auto& steps = res.trajectory.steps;
    res.trajectory.returns.resize(steps.size());
    double acc = 0.0;
    for (std::size_t i = steps.size(); i-- > 0;) {
        acc = steps[i].reward + cfg.gamma * acc;
        res.trajectory.returns[i] = acc;
    }
    return res;
}

TrainResult train(const std::vector<SceneSpec>& scenes, const TrainingConfig& cfg) {
    if (scenes.empty()) throw std::invalid_argument("train: no training scenes");
    Rng rng(cfg.seed);
    TrainResult res;
    res.log.reserve(cfg.episodes);

    std::vector<int> order(scenes.size());
    std::iota(order.begin(), order.end(), 0);
    std::size_t pos = order.size();  // reshuffled at the top of every pass

    for (int ep = 0; ep < cfg.episodes; ++ep) {
        if (pos == order.size()) {
            rng.shuffle(order);
            pos = 0;
        }
        const SceneSpec& scene = scenes[static_cast<std::size_t>(order[pos++])];
        EpisodeResult er = run_episode(scene, res.policy, res.critic, cfg, rng);
        res.policy = er.policy;
        res.critic = er.critic;

        const Raster original = render(scene);
        double sum_r = 0.0, sum_q = 0.0;
        for (const TrajectoryStep& st : er.trajectory.steps) {
            sum_r += st.reward;
            sum_q += quality(decode(st.next, {}), original);
        }
        const double n = std::max<std::size_t>(er.trajectory.steps.size(), 1);
        res.log.push_back({ep, sum_r / n, sum_q / n});
    }
    return res;
}

Prompt optimize(const Prompt& prompt, const PolicyParams& params, int horizon,
                const std::optional<std::vector<int>>& allowed) {
    Prompt state = prompt;
    for (int t = 0; t < horizon; ++t) {
        const std::vector<EditAction> legal = legal_actions(state, allowed);
        const std::vector<double> probs = policy_probs(params, state, allowed);
        std::size_t best = 0;
        for (std::size_t i = 1; i < probs.size(); ++i)
            if (probs[i] > probs[best]) best = i;  // first maximum wins
        if (legal[best].kind == EditAction::Kind::Stop) break;
        state = apply_action(state, legal[best]);
    }
    return state;
}

namespace {

void require_key_set(const nlohmann::json& j, const std::vector<std::string>& keys,
                     const char* what) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw DataFormatError(std::string(what) + ": unknown key \"" + key + "\"");
    }
}

}  // namespace

void write_policy_json(const PolicyParams& policy, const CriticParams& critic,
                       const TrainingConfig& cfg, const std::string& path) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["feature_dim"] = kFeatureDim;
    j["action_space"] = kActionSpace;
    j["theta"] = policy.theta;
    j["theta_bias"] = policy.bias;
    j["phi"] = critic.phi;
    j["phi_bias"] = critic.bias;
    nlohmann::ordered_json c;
    c["gamma"] = cfg.gamma;
    c["lr_actor"] = cfg.lr_actor;
    c["lr_critic"] = cfg.lr_critic;
    c["lambda_len"] = cfg.lambda_len;
    c["horizon"] = cfg.horizon;
    c["episodes"] = cfg.episodes;
    c["seed"] = cfg.seed;
    c["p_drop_heading"] = cfg.noise.p_drop_heading;
    c["p_drop_other"] = cfg.noise.p_drop_other;
    c["p_clutter"] = cfg.noise.p_clutter;
    c["p_value_swap"] = cfg.noise.p_value_swap;
    if (cfg.allowed_attributes) c["allowed_attributes"] = *cfg.allowed_attributes;
    j["config"] = std::move(c);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

LoadedPolicy read_policy_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open policy: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw DataFormatError("policy file: not a JSON object");

    require_key_set(j, {"version", "feature_dim", "action_space", "theta", "theta_bias", "phi",
                        "phi_bias", "config"},
                    "policy file");
    try {
        if (j.at("version").get<int>() != 1)
            throw DataFormatError("policy file: unsupported version");
        if (j.at("feature_dim").get<int>() != kFeatureDim)
            throw DataFormatError("policy file: feature_dim mismatch");
        if (j.at("action_space").get<int>() != kActionSpace)
            throw DataFormatError("policy file: action_space mismatch");

        LoadedPolicy lp;
        const auto& theta = j.at("theta");
        if (!theta.is_array() || theta.size() != static_cast<std::size_t>(kActionSpace))
            throw DataFormatError("policy file: theta must be a 96-row array");
        for (int r = 0; r < kActionSpace; ++r) {
            const auto& row = theta.at(r);
            if (!row.is_array() || row.size() != static_cast<std::size_t>(kFeatureDim))
                throw DataFormatError("policy file: theta rows must have 33 columns");
            for (int d = 0; d < kFeatureDim; ++d) lp.policy.theta[r][d] = row.at(d).get<double>();
        }
        const auto& tb = j.at("theta_bias");
        if (!tb.is_array() || tb.size() != static_cast<std::size_t>(kActionSpace))
            throw DataFormatError("policy file: theta_bias must have 96 entries");
        for (int r = 0; r < kActionSpace; ++r) lp.policy.bias[r] = tb.at(r).get<double>();
        const auto& phi = j.at("phi");
        if (!phi.is_array() || phi.size() != static_cast<std::size_t>(kFeatureDim))
            throw DataFormatError("policy file: phi must have 33 entries");
        for (int d = 0; d < kFeatureDim; ++d) lp.critic.phi[d] = phi.at(d).get<double>();
        lp.critic.bias = j.at("phi_bias").get<double>();

        const auto& c = j.at("config");
        if (!c.is_object()) throw DataFormatError("policy file: config must be an object");
        require_key_set(c,
                        {"gamma", "lr_actor", "lr_critic", "lambda_len", "horizon", "episodes",
                         "seed", "p_drop_heading", "p_drop_other", "p_clutter", "p_value_swap",
                         "allowed_attributes"},
                        "policy config");
        TrainingConfig& cfg = lp.config;
        if (c.contains("gamma")) cfg.gamma = c.at("gamma").get<double>();
        if (c.contains("lr_actor")) cfg.lr_actor = c.at("lr_actor").get<double>();
        if (c.contains("lr_critic")) cfg.lr_critic = c.at("lr_critic").get<double>();
        if (c.contains("lambda_len")) cfg.lambda_len = c.at("lambda_len").get<double>();
        if (c.contains("horizon")) cfg.horizon = c.at("horizon").get<int>();
        if (c.contains("episodes")) cfg.episodes = c.at("episodes").get<int>();
        if (c.contains("seed")) cfg.seed = c.at("seed").get<std::uint64_t>();
        if (c.contains("p_drop_heading"))
            cfg.noise.p_drop_heading = c.at("p_drop_heading").get<double>();
        if (c.contains("p_drop_other")) cfg.noise.p_drop_other = c.at("p_drop_other").get<double>();
        if (c.contains("p_clutter")) cfg.noise.p_clutter = c.at("p_clutter").get<double>();
        if (c.contains("p_value_swap")) cfg.noise.p_value_swap = c.at("p_value_swap").get<double>();
        if (c.contains("allowed_attributes"))
            cfg.allowed_attributes = c.at("allowed_attributes").get<std::vector<int>>();
        return lp;
    } catch (const nlohmann::json::exception& e) {
        throw DataFormatError(std::string("policy file: ") + e.what());
    }
}

void write_train_log_csv(const std::vector<TrainLogRow>& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "episode,mean_reward,mean_quality\n";
    char buf[96];
    for (const TrainLogRow& row : log) {
        std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f\n", row.episode, row.mean_reward,
                      row.mean_quality);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace saig
