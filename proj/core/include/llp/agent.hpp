#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <variant>

#include "llp/vec.hpp"

namespace llp {

enum class CostKind : std::uint8_t {
    LocalDelta,   // (y1-x1) + (y2-x2): depends on the transition only
    QueueTotal,   // x1+x2: total jobs at the current state
};

enum class GreedyRule : std::uint8_t {
    ArgMin,            // cost-to-go semantics, the default
    ArgMaxAsWritten,   // literal decision-rule variant
};

struct StepSchedule {
    enum class Kind : std::uint8_t {
        Constant,          // delta_n = delta
        Harmonic,          // delta_n = 1/(n+1) on the global step counter
        HarmonicPerVisit,  // delta = 1/(count+1) per (state, action) update count
    };
    Kind kind = Kind::Constant;
    double delta = 0.1;  // Constant only

    static StepSchedule constant(double d) { return {Kind::Constant, d}; }
    static StepSchedule harmonic() { return {Kind::Harmonic, 0.0}; }
    static StepSchedule harmonic_per_visit() { return {Kind::HarmonicPerVisit, 0.0}; }
};

struct QLearningSpec {
    double epsilon = 0.1;
    double discount = 0.1;  // the gamma of the stored-value update
    StepSchedule step = StepSchedule::constant(0.2);
    CostKind cost = CostKind::LocalDelta;
    double q0_init = 0.0;
    GreedyRule greedy = GreedyRule::ArgMin;

    void validate() const;
};

struct FixedActionSpec {
    Action action = Action::Green;
};

struct CoinSpec {
    double q = 0.5;  // probability of Red at every step

    void validate() const;
};

struct AgentSpec {
    std::variant<QLearningSpec, FixedActionSpec, CoinSpec> v;

    static AgentSpec q_learning(QLearningSpec s);
    static AgentSpec fixed(Action a) { return {FixedActionSpec{a}}; }
    static AgentSpec coin(double q);

    bool is_q_learning() const { return std::holds_alternative<QLearningSpec>(v); }
    bool is_fixed() const { return std::holds_alternative<FixedActionSpec>(v); }
    bool is_coin() const { return std::holds_alternative<CoinSpec>(v); }
    const QLearningSpec& as_q_learning() const { return std::get<QLearningSpec>(v); }
    const FixedActionSpec& as_fixed() const { return std::get<FixedActionSpec>(v); }
    const CoinSpec& as_coin() const { return std::get<CoinSpec>(v); }

    /// Cost recorded in step records: the learner's configured kind, or the
    /// transition-local cost for agents that do not learn.
    CostKind recorded_cost() const {
        return is_q_learning() ? as_q_learning().cost : CostKind::LocalDelta;
    }

    double default_env_value() const {
        return is_q_learning() ? as_q_learning().q0_init : 0.0;
    }
};

/// Per-state stored values, one pair per visited state. States never visited
/// carry exactly the state-invariant default.
class Environment {
  public:
    struct Entry {
        double value[2];       // indexed by Action
        std::uint32_t updates[2];  // per-action update counts (per-visit schedule)
    };

    explicit Environment(double default_value = 0.0) : default_(default_value) {}

    double default_value() const { return default_; }
    bool contains(QueueState x) const { return table_.find(x) != table_.end(); }
    std::size_t size() const { return table_.size(); }

    /// Stored pair at x, without inserting.
    std::pair<double, double> values_at(QueueState x) const {
        auto it = table_.find(x);
        if (it == table_.end()) return {default_, default_};
        return {it->second.value[0], it->second.value[1]};
    }

    /// Entry for x, inserted at the default on first touch.
    Entry& entry(QueueState x) {
        auto [it, inserted] = table_.emplace(x, Entry{{default_, default_}, {0, 0}});
        (void)inserted;
        return it->second;
    }

    const std::unordered_map<QueueState, Entry, QueueStateHash>& table() const { return table_; }

  private:
    double default_;
    std::unordered_map<QueueState, Entry, QueueStateHash> table_;
};

/// Action draw from the stored pair at the current state. One uniform per
/// decision; deterministic given u.
Action decide(const AgentSpec& agent, std::pair<double, double> env_at_state, double u);

/// Probability that `decide` picks Red for this stored pair.
double red_probability(const AgentSpec& agent, std::pair<double, double> env_at_state);

double transition_cost(CostKind kind, QueueState x, QueueState y);

}  // namespace llp
