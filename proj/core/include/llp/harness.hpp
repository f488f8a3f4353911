#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "llp/engine.hpp"
#include "llp/renewal.hpp"

namespace llp {

struct ExperimentConfig {
    World world;
    AgentSpec agent;
    QueueState x0{0, 0};
    std::int64_t horizon = 10'000;
    int n_trajectories = 1;
    std::uint64_t master_seed = 0;
    std::vector<std::string> metrics;  // "final_state", "alpha", "success_time"
    std::size_t env_cap = kDefaultEnvCap;
    int threads = 0;                   // 0 = hardware, always capped by LLP_THREADS
    ConeSpec cone;                     // success-time metric
    std::int64_t success_margin = -1;  // -1 = horizon/10

    void validate() const;
};

/// Pointwise statistics of the coordinate-sum series plus the requested
/// per-trajectory summaries. Aggregation is in exact integer arithmetic, so
/// the result is identical under any thread count.
struct EnsembleResult {
    std::vector<double> mean_l1;  // length horizon+1
    std::vector<double> se_l1;
    std::vector<QueueState> final_states;
    std::vector<double> alphas;
    std::vector<std::int64_t> success_times;  // -1 where no success time exists
};

struct CostCurve {
    std::vector<double> gamma_grid;  // ascending
    std::vector<double> mean, se;              // configured agent
    std::vector<double> green_mean, green_se;  // fixed-green reference
    std::vector<double> truncation_bias_bound;
};

struct GreenReference {
    double estimate = 0.0;
    std::optional<double> se;  // batch means, 20 batches; absent when too short
};

struct LyapunovRegionInfo {
    std::string name;
    double drift_along_v = 0.0;  // <d, v> of the region's green law
    double slope = 0.0;          // linear coefficient of the one-step change
    double quad = 0.0;           // constant term sum <xi,v>^2 p(xi)
    bool bounded = false;        // origin: no growth constraint
};

struct LyapunovReport {
    bool feasible = false;
    double c = 0.0;
    double bound = 0.0;
    double interior_f_drift = 0.0;
    std::vector<LyapunovRegionInfo> regions;
    std::vector<QueueState> witnesses;  // refutation states, largest violations first
};

struct TransienceReport {
    double fraction = 0.0;
    double se = 0.0;
    std::vector<char> escaped;  // per-trajectory flags
};

int resolve_threads(int requested);

EnsembleResult run_ensemble(const ExperimentConfig& config);

/// Finite-horizon partial sum of discounted transition costs, recomputed
/// from the states under the requested cost kind.
double discounted_cost(const Trajectory& traj, double gamma, CostKind kind);

/// Discounted-cost means over the ensemble for each grid point, with a
/// fixed-green reference ensemble run on derived seeds. Costs are evaluated
/// under eval_cost.
CostCurve cost_curve(const ExperimentConfig& config, std::vector<double> gamma_grid,
                     CostKind eval_cost = CostKind::LocalDelta);

/// Long-run mean coordinate sum of the fixed-green process, first half of
/// each trajectory discarded as burn-in. The agent in `config` is ignored.
GreenReference green_reference(const ExperimentConfig& config);

/// Exact one-step drift certificate for V(x) = <x,v>^2 under the green
/// action. The expected change of V is affine in F(x) = <x,v> within each
/// region, so feasibility of E(dV) <= -c F + B over the whole quadrant
/// reduces to the per-region linear coefficients; the grid pins down B and
/// supplies refutation witnesses.
LyapunovReport lyapunov_probe(const ModelSpec& model, Vec2R v, std::int64_t grid_max);

/// Streaming equivalent of transience_probe over a fresh ensemble: fraction
/// of trajectories never entering {x : x1+x2 <= radius} after burn_in.
TransienceReport transience_report(const ExperimentConfig& config, std::int64_t radius,
                                   std::int64_t burn_in);

/// The standard learner parameterization used across the experiments
/// (epsilon 0.1, update discount 0.1, zero initial values); the two toggles
/// select the step schedule and the cost kind.
AgentSpec qlearning_setting(bool constant_step, bool local_cost);

/// Settings 1-4 = (constant, local), (constant, total), (harmonic, local),
/// (harmonic, total).
AgentSpec qlearning_setting_by_index(int index);

}  // namespace llp
