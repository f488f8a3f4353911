#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "llp/conditions.hpp"
#include "llp/harness.hpp"
#include "llp/renewal.hpp"

namespace llp {

/// Everything a run can be configured with; sections unused by a subcommand
/// may be omitted from the file. Parsing is strict: unknown keys, type
/// mismatches and out-of-range values are config_errors naming the key.
struct RunConfig {
    std::optional<ModelSpec> model;
    bool free = false;
    std::optional<AgentSpec> agent;
    QueueState x0{0, 0};
    std::int64_t horizon = 10'000;
    int n_trajectories = 1;
    std::uint64_t master_seed = 0;
    std::vector<std::string> metrics = {"l1_series"};
    std::vector<double> gamma_grid;
    std::size_t env_cap = kDefaultEnvCap;
    int threads = 0;

    struct Check {
        std::string strategy = "default";  // fixed_axis1|fixed_diagonal|maximize|custom|default
        Vec2R custom_l{1.0, 0.0};
    } check;

    struct Renewal {
        std::string trajectory;  // path of a stored trajectory CSV
        Vec2R l{1.0, 0.0};
        std::int64_t margin = -1;  // -1 = horizon/10 of the loaded trajectory
        bool restrict_quadrant = true;
    } renewal;

    struct Probe {
        std::int64_t radius = 0;
        std::int64_t burn_in = 0;
    } probe;

    DirectionChoice direction_choice() const;  // resolves "default" by model kind
    ExperimentConfig experiment() const;       // requires model and agent
};

ModelSpec parse_model_json(const std::string& text);
std::string model_to_json_string(const ModelSpec& model, int indent = -1);

RunConfig parse_run_config_json(const std::string& text);
std::string run_config_to_json_string(const RunConfig& config, int indent = -1);

/// Applies `path.to.key=value` overrides onto the JSON text; values parse as
/// JSON scalars where possible, else as strings. The result still goes
/// through strict parsing.
std::string apply_overrides(const std::string& text,
                            const std::vector<std::string>& overrides);

/// FNV-1a over the canonical (sorted-key) dump; stable across platforms.
std::string config_hash(const RunConfig& config);

// --- trajectory and report files ---

std::string trajectory_to_csv(const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Reads states/actions/costs back; world and agent are restored from the
/// JSON sidecar (same stem, .json) when present, otherwise left default and
/// the trajectory supports analysis operations only.
Trajectory read_trajectory_csv(const std::string& path);

std::string trajectory_header_json(const Trajectory& traj, int indent = 2);

std::string ensemble_to_csv(const EnsembleResult& result);
std::string ensemble_summaries_to_csv(const EnsembleResult& result);
std::string curve_to_csv(const CostCurve& curve);
std::string cycles_to_csv(const CycleStats& stats);

std::string condition_report_to_json(const ConditionReport& report,
                                     const std::optional<LemmaReport>& lemma, int indent = 2);
std::string renewal_report_to_json(const RecordTimes& records, const CycleStats* stats,
                                   const DriftEstimate& drift,
                                   const std::pair<double, double>* alpha, int indent = 2);
std::string probe_report_to_json(const TransienceReport& report, std::int64_t radius,
                                 std::int64_t burn_in, int indent = 2);
std::string lyapunov_report_to_json(const LyapunovReport& report, int indent = 2);

/// Manifest naming the effective config, its hash, the seed and the files a
/// run produced; every figure is regenerable from it.
std::string manifest_json(const std::string& subcommand, const RunConfig& config,
                          const std::vector<std::string>& outputs, int indent = 2);

}  // namespace llp
