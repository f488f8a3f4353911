#pragma once

#include <optional>
#include <span>
#include <vector>

#include "llp/engine.hpp"
#include "llp/vec.hpp"

namespace llp {

/// Inner products of the visited states against a unit direction, initial
/// state included (length = horizon + 1).
struct ProjectedPath {
    std::vector<double> values;
    Vec2R l;
};

/// Times certified as records that the projection never undercuts within the
/// remaining horizon. Certification near the horizon is censored: indices
/// beyond `censor_bound` are never certified, and an index with no remaining
/// future (only the last one can be) is certified only under margin 0 and
/// listed in `vacuous`.
struct RecordTimes {
    std::vector<std::int64_t> certified;
    std::int64_t censor_bound = 0;
    std::vector<std::int64_t> vacuous;
};

struct TailFit {
    double slope = 0.0;
    double r2 = 0.0;
};

struct CycleStats {
    std::vector<std::int64_t> gaps;
    std::vector<double> scopes;          // summed jump norms within each cycle
    std::vector<Vec2R> displacements;    // state change over each cycle
    std::optional<TailFit> tail_fit;     // log-survival fit of the gaps
};

struct ConeSpec {
    Vec2R l{1.0, 0.0};
    bool restrict_quadrant = true;  // intersect the half-plane with the quadrant
};

struct DriftEstimate {
    Vec2R point;
    std::optional<Vec2R> ci_half;  // per-cycle 95% half-widths, >= 30 cycles
    std::int64_t n_used = 0;
};

/// Throws domain_error unless l is unit within 1e-12.
ProjectedPath project(const Trajectory& traj, Vec2R l);

ProjectedPath project_states(std::span<const QueueState> states, Vec2R l);

/// Certifies n iff (a) S_n strictly exceeds every earlier value, (b) every
/// remaining future value stays strictly above S_n, and (c) n is at most
/// horizon - margin. Clause (b) checks the whole stored future, the
/// finite-horizon surrogate for the never-undercut event.
RecordTimes record_times(const ProjectedPath& path, std::int64_t margin);

/// First censored index n whose state has both coordinates positive, whose
/// coordinate sum is a strict running record, and whose remaining increments
/// X_{n+i} - X_n all stay in the cone (<z,l> > 0, and z componentwise
/// nonnegative when the quadrant restriction is on).
std::optional<std::int64_t> success_time(const Trajectory& traj, const ConeSpec& cone,
                                         std::int64_t margin);

/// Empirical red frequency and its binomial standard error.
std::pair<double, double> estimate_alpha(const Trajectory& traj);

/// (X_H - X_0)/H, plus a per-cycle confidence interval when at least 30
/// certified cycles are available.
DriftEstimate estimate_drift(const Trajectory& traj, const RecordTimes* records = nullptr);

/// Gap/scope/displacement lists between consecutive certified record times;
/// throws insufficient_data_error with fewer than two records.
CycleStats cycle_stats(const Trajectory& traj, const RecordTimes& records);

/// Fraction of trajectories whose state never enters {x : x1+x2 <= radius}
/// strictly after burn_in, with its standard error.
std::pair<double, double> transience_probe(std::span<const Trajectory> trajs,
                                           std::int64_t radius, std::int64_t burn_in);

}  // namespace llp
