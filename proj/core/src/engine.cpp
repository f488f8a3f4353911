#include "llp/engine.hpp"

#include <algorithm>

#include "llp/errors.hpp"

namespace llp {

World::World(ModelSpec model, bool free) : model_(std::move(model)), free_(free) {
    for (int r = 0; r < 4; ++r) {
        for (int a = 0; a < 2; ++a) {
            const Region region = free_ ? Region::Interior : Region(r);
            laws_[r * 2 + a] = model_.law_for(region, Action(a));
        }
    }
}

const JumpLaw& World::law_at(QueueState x, Action a) const {
    if (free_) return laws_[int(Region::Interior) * 2 + int(a)];
    if (!in_nonneg_quadrant(x)) {
        throw domain_error("law_at: state outside the nonnegative quadrant");
    }
    return laws_[int(region_of(x)) * 2 + int(a)];
}

void update_env(const AgentSpec& agent, Environment& env, const StepRecord& rec) {
    const auto* ql = std::get_if<QLearningSpec>(&agent.v);
    if (ql == nullptr) return;  // fixed-action and coin agents store nothing

    // Read the successor's pair first: looking up must not insert it.
    const auto next_vals = env.values_at(rec.next);
    const double next_min = std::min(next_vals.first, next_vals.second);
    const double target = rec.cost + ql->discount * next_min;

    Environment::Entry& e = env.entry(rec.state);
    const int a = int(rec.action);
    double delta;
    switch (ql->step.kind) {
        case StepSchedule::Kind::Constant:
            delta = ql->step.delta;
            break;
        case StepSchedule::Kind::Harmonic:
            delta = 1.0 / double(rec.n + 1);
            break;
        case StepSchedule::Kind::HarmonicPerVisit:
            delta = 1.0 / double(e.updates[a] + 1);
            break;
    }
    e.value[a] = (1.0 - delta) * e.value[a] + delta * target;
    e.updates[a] += 1;
}

StepRecord llp_step(const World& world, const AgentSpec& agent, QueueState state,
                    Environment& env, std::int64_t n, Xoshiro256pp& rng) {
    StepRecord rec;
    rec.n = n;
    rec.state = state;
    rec.first_visit = !env.contains(state);

    const double u_action = rng.u01();
    rec.action = decide(agent, env.values_at(state), u_action);

    const JumpLaw& law = world.law_at(state, rec.action);
    const double u_jump = rng.u01();
    rec.next = state + law.sample(u_jump);
    rec.cost = transition_cost(agent.recorded_cost(), state, rec.next);

    update_env(agent, env, rec);
    return rec;
}

Trajectory run_trajectory(const World& world, const AgentSpec& agent, QueueState x0,
                          std::int64_t horizon, std::uint64_t seed, std::size_t env_cap) {
    Trajectory traj;
    traj.x0 = x0;
    traj.seed = seed;
    traj.agent = agent;
    traj.world = world;
    traj.steps.reserve(std::size_t(horizon));
    run_stream(world, agent, x0, horizon, seed,
               [&](const StepRecord& rec) { traj.steps.push_back(rec); }, env_cap);
    return traj;
}

}  // namespace llp
