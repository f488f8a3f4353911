#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "llp/agent.hpp"
#include "llp/errors.hpp"
#include "llp/models.hpp"
#include "llp/rng.hpp"

namespace llp {

/// A model plus the free/bounded toggle. Free worlds apply the interior law
/// on the whole grid; bounded worlds use the per-region laws and keep states
/// in the nonnegative quadrant.
class World {
  public:
    World() = default;
    World(ModelSpec model, bool free);

    const ModelSpec& model() const { return model_; }
    bool free() const { return free_; }

    /// Law at a state; regions are resolved once at construction, so this is
    /// a table lookup.
    const JumpLaw& law_at(QueueState x, Action a) const;

  private:
    ModelSpec model_;
    bool free_ = false;
    std::array<JumpLaw, 8> laws_;  // [region][action]
};

struct StepRecord {
    std::int64_t n = 0;
    QueueState state;
    Action action = Action::Red;
    QueueState next;
    double cost = 0.0;
    bool first_visit = false;
};

struct Trajectory {
    QueueState x0;
    std::vector<StepRecord> steps;
    std::uint64_t seed = 0;
    AgentSpec agent;
    World world;

    std::int64_t horizon() const { return std::int64_t(steps.size()); }
    QueueState final_state() const { return steps.empty() ? x0 : steps.back().next; }
    QueueState state_at(std::int64_t n) const { return n == 0 ? x0 : steps[n - 1].next; }
};

constexpr std::size_t kDefaultEnvCap = 10'000'000;

/// Stored-value update for one realized step; non-learning agents leave the
/// environment untouched.
void update_env(const AgentSpec& agent, Environment& env, const StepRecord& rec);

/// One step of the process: draws the action from the environment at the
/// current state, then the jump, then applies the update. Consumes exactly
/// two uniforms. first_visit is set when the state was absent from the
/// environment table before this step.
StepRecord llp_step(const World& world, const AgentSpec& agent, QueueState state,
                    Environment& env, std::int64_t n, Xoshiro256pp& rng);

/// Runs every step through `on_step(const StepRecord&)`; used by the
/// ensemble drivers to avoid materializing trajectories. Throws
/// resource_limit_error when the environment table exceeds env_cap.
template <typename F>
void run_stream(const World& world, const AgentSpec& agent, QueueState x0, std::int64_t horizon,
                std::uint64_t seed, F&& on_step, std::size_t env_cap = kDefaultEnvCap);

/// Deterministic in (world, agent, x0, horizon, seed); a fresh environment
/// at the agent's initial value is created per run.
Trajectory run_trajectory(const World& world, const AgentSpec& agent, QueueState x0,
                          std::int64_t horizon, std::uint64_t seed,
                          std::size_t env_cap = kDefaultEnvCap);

// --- implementation ---

template <typename F>
void run_stream(const World& world, const AgentSpec& agent, QueueState x0, std::int64_t horizon,
                std::uint64_t seed, F&& on_step, std::size_t env_cap) {
    if (horizon < 0) throw domain_error("run: horizon must be nonnegative");
    if (!world.free() && !in_nonneg_quadrant(x0)) {
        throw domain_error("run: initial state outside the nonnegative quadrant");
    }
    Xoshiro256pp rng(seed);
    Environment env(agent.default_env_value());
    QueueState x = x0;
    for (std::int64_t n = 0; n < horizon; ++n) {
        StepRecord rec = llp_step(world, agent, x, env, n, rng);
        if (env.size() > env_cap) {
            throw resource_limit_error("environment table exceeded its cap");
        }
        x = rec.next;
        on_step(rec);
    }
}

}  // namespace llp
