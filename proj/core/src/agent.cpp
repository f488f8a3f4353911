#include "llp/agent.hpp"

#include <cmath>

#include "llp/errors.hpp"

namespace llp {

void QLearningSpec::validate() const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw config_error("agent.epsilon: must be within [0,1]");
    }
    if (!(discount > 0.0 && discount <= 1.0)) {
        throw config_error("agent.discount: must be within (0,1]");
    }
    if (step.kind == StepSchedule::Kind::Constant && !(step.delta >= 0.0 && step.delta <= 1.0)) {
        throw config_error("agent.step.delta: must be within [0,1]");
    }
    if (!std::isfinite(q0_init)) throw config_error("agent.q0_init: must be finite");
}

void CoinSpec::validate() const {
    if (!(q >= 0.0 && q <= 1.0)) throw config_error("agent.q: must be within [0,1]");
}

AgentSpec AgentSpec::q_learning(QLearningSpec s) {
    s.validate();
    return {s};
}

AgentSpec AgentSpec::coin(double q) {
    CoinSpec c{q};
    c.validate();
    return {c};
}

double red_probability(const AgentSpec& agent, std::pair<double, double> env_at_state) {
    if (const auto* ql = std::get_if<QLearningSpec>(&agent.v)) {
        const double vr = env_at_state.first;
        const double vg = env_at_state.second;
        // Greedy set by exact comparison; an exact tie includes both actions.
        bool red_greedy, tie;
        if (ql->greedy == GreedyRule::ArgMin) {
            tie = (vr == vg);
            red_greedy = (vr < vg);
        } else {
            tie = (vr == vg);
            red_greedy = (vr > vg);
        }
        if (tie) return (1.0 - ql->epsilon) / 2.0 + ql->epsilon / 2.0;  // = 1/2
        return red_greedy ? (1.0 - ql->epsilon) + ql->epsilon / 2.0 : ql->epsilon / 2.0;
    }
    if (const auto* fx = std::get_if<FixedActionSpec>(&agent.v)) {
        return fx->action == Action::Red ? 1.0 : 0.0;
    }
    return std::get<CoinSpec>(agent.v).q;
}

Action decide(const AgentSpec& agent, std::pair<double, double> env_at_state, double u) {
    return u < red_probability(agent, env_at_state) ? Action::Red : Action::Green;
}

double transition_cost(CostKind kind, QueueState x, QueueState y) {
    switch (kind) {
        case CostKind::LocalDelta:
            return double((y.x1 - x.x1) + (y.x2 - x.x2));
        case CostKind::QueueTotal:
            return double(x.x1 + x.x2);
    }
    return 0.0;
}

}  // namespace llp
