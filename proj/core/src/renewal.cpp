#include "llp/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "llp/errors.hpp"

namespace llp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit(Vec2R l) {
    if (std::fabs(norm(l) - 1.0) > 1e-12) {
        throw domain_error("direction must be a unit vector (within 1e-12)");
    }
}

std::vector<QueueState> states_of(const Trajectory& traj) {
    std::vector<QueueState> states;
    states.reserve(traj.steps.size() + 1);
    states.push_back(traj.x0);
    for (const auto& s : traj.steps) states.push_back(s.next);
    return states;
}

}  // namespace

ProjectedPath project_states(std::span<const QueueState> states, Vec2R l) {
    require_unit(l);
    ProjectedPath path;
    path.l = l;
    path.values.reserve(states.size());
    for (const auto& x : states) path.values.push_back(dot(to_vec(x), l));
    return path;
}

ProjectedPath project(const Trajectory& traj, Vec2R l) {
    const auto states = states_of(traj);
    return project_states(states, l);
}

RecordTimes record_times(const ProjectedPath& path, std::int64_t margin) {
    if (margin < 0) throw domain_error("record_times: margin must be nonnegative");
    const auto& s = path.values;
    const std::int64_t last = std::int64_t(s.size()) - 1;

    RecordTimes out;
    out.censor_bound = last - margin;
    if (last < 0 || out.censor_bound < 0) return out;

    // suffix_min[n] = min over k > n of S_k; +inf past the end.
    std::vector<double> suffix_min(s.size() + 1, kInf);
    for (std::int64_t n = last; n >= 0; --n) {
        suffix_min[n] = std::min(s[n], suffix_min[n + 1]);
    }

    double running_max = -kInf;
    for (std::int64_t n = 0; n <= out.censor_bound; ++n) {
        const bool is_record = s[n] > running_max;
        running_max = std::max(running_max, s[n]);
        if (!is_record) continue;
        if (n == last) {
            // No future left to test; only margin 0 reaches here.
            out.certified.push_back(n);
            out.vacuous.push_back(n);
        } else if (suffix_min[n + 1] > s[n]) {
            out.certified.push_back(n);
        }
    }
    return out;
}

std::optional<std::int64_t> success_time(const Trajectory& traj, const ConeSpec& cone,
                                         std::int64_t margin) {
    if (margin < 0) throw domain_error("success_time: margin must be nonnegative");
    require_unit(cone.l);
    const auto states = states_of(traj);
    const std::int64_t last = std::int64_t(states.size()) - 1;
    const std::int64_t bound = last - margin;
    if (bound < 0) return std::nullopt;

    // Confinement of all increments past n reduces to suffix minima: the
    // projection must stay strictly above S_n, and each coordinate must never
    // fall below its value at n.
    std::vector<double> proj(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) proj[i] = dot(to_vec(states[i]), cone.l);
    std::vector<double> suf_proj(states.size() + 1, kInf);
    std::vector<std::int64_t> suf_x1(states.size() + 1, std::numeric_limits<std::int64_t>::max());
    std::vector<std::int64_t> suf_x2(states.size() + 1, std::numeric_limits<std::int64_t>::max());
    for (std::int64_t n = last; n >= 0; --n) {
        suf_proj[n] = std::min(proj[n], suf_proj[n + 1]);
        suf_x1[n] = std::min(states[n].x1, suf_x1[n + 1]);
        suf_x2[n] = std::min(states[n].x2, suf_x2[n + 1]);
    }

    std::int64_t running_sum_max = std::numeric_limits<std::int64_t>::min();
    for (std::int64_t n = 0; n <= bound; ++n) {
        const QueueState x = states[n];
        const std::int64_t sum = coord_sum(x);
        const bool positive = x.x1 > 0 && x.x2 > 0;
        const bool sum_record = sum > running_sum_max;
        running_sum_max = std::max(running_sum_max, sum);
        if (!positive || !sum_record) continue;
        if (n == last) return n;  // empty future, margin 0 only
        bool confined = suf_proj[n + 1] > proj[n];
        if (confined && cone.restrict_quadrant) {
            confined = suf_x1[n + 1] >= x.x1 && suf_x2[n + 1] >= x.x2;
        }
        if (confined) return n;
    }
    return std::nullopt;
}

std::pair<double, double> estimate_alpha(const Trajectory& traj) {
    if (traj.steps.empty()) throw domain_error("estimate_alpha: empty trajectory");
    std::int64_t reds = 0;
    for (const auto& s : traj.steps) reds += (s.action == Action::Red) ? 1 : 0;
    const double n = double(traj.steps.size());
    const double alpha = double(reds) / n;
    return {alpha, std::sqrt(alpha * (1.0 - alpha) / n)};
}

DriftEstimate estimate_drift(const Trajectory& traj, const RecordTimes* records) {
    if (traj.steps.empty()) throw domain_error("estimate_drift: empty trajectory");
    const double h = double(traj.steps.size());
    const QueueState xh = traj.final_state();
    DriftEstimate est;
    est.point = {double(xh.x1 - traj.x0.x1) / h, double(xh.x2 - traj.x0.x2) / h};
    est.n_used = traj.horizon();

    if (records == nullptr || records->certified.size() < 31) return est;

    // Regenerative CI from the i.i.d. cycles: the ratio estimator
    // mean(displacement)/mean(gap), with variance from the centered
    // residuals d_k - L*g_k.
    const auto& t = records->certified;
    const std::size_t n_cycles = t.size() - 1;
    double sum_gap = 0.0;
    Vec2R sum_disp{0, 0};
    std::vector<Vec2R> disp(n_cycles);
    std::vector<double> gap(n_cycles);
    for (std::size_t k = 0; k < n_cycles; ++k) {
        const QueueState a = traj.state_at(t[k]);
        const QueueState b = traj.state_at(t[k + 1]);
        disp[k] = {double(b.x1 - a.x1), double(b.x2 - a.x2)};
        gap[k] = double(t[k + 1] - t[k]);
        sum_gap += gap[k];
        sum_disp = sum_disp + disp[k];
    }
    const double mean_gap = sum_gap / double(n_cycles);
    const Vec2R ratio{sum_disp.x1 / sum_gap, sum_disp.x2 / sum_gap};
    double var1 = 0.0, var2 = 0.0;
    for (std::size_t k = 0; k < n_cycles; ++k) {
        const double r1 = disp[k].x1 - ratio.x1 * gap[k];
        const double r2 = disp[k].x2 - ratio.x2 * gap[k];
        var1 += r1 * r1;
        var2 += r2 * r2;
    }
    var1 /= double(n_cycles - 1);
    var2 /= double(n_cycles - 1);
    const double scale = 1.96 / (mean_gap * std::sqrt(double(n_cycles)));
    est.ci_half = Vec2R{scale * std::sqrt(var1), scale * std::sqrt(var2)};
    return est;
}

CycleStats cycle_stats(const Trajectory& traj, const RecordTimes& records) {
    if (records.certified.size() < 2) {
        throw insufficient_data_error("cycle_stats: fewer than two certified record times");
    }
    const auto& t = records.certified;
    CycleStats out;
    const std::size_t n_cycles = t.size() - 1;
    out.gaps.reserve(n_cycles);
    out.scopes.reserve(n_cycles);
    out.displacements.reserve(n_cycles);
    for (std::size_t k = 0; k < n_cycles; ++k) {
        out.gaps.push_back(t[k + 1] - t[k]);
        double scope = 0.0;
        for (std::int64_t i = t[k]; i < t[k + 1]; ++i) {
            const QueueState a = traj.state_at(i);
            const QueueState b = traj.state_at(i + 1);
            scope += norm(JumpStep{int(b.x1 - a.x1), int(b.x2 - a.x2)});
        }
        out.scopes.push_back(scope);
        const QueueState a = traj.state_at(t[k]);
        const QueueState b = traj.state_at(t[k + 1]);
        out.displacements.push_back({double(b.x1 - a.x1), double(b.x2 - a.x2)});
    }

    // Survival of the gap distribution on levels with at least 5 exceedances.
    std::vector<std::int64_t> sorted = out.gaps;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> xs, ys;
    const double n = double(sorted.size());
    for (std::int64_t level = 0;; ++level) {
        const auto exceed = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), level);
        if (exceed < 5) break;
        xs.push_back(double(level));
        ys.push_back(std::log(double(exceed) / n));
    }
    if (xs.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        const double m = double(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
            syy += ys[i] * ys[i];
        }
        const double den = m * sxx - sx * sx;
        if (den > 0.0) {
            const double slope = (m * sxy - sx * sy) / den;
            const double sst = syy - sy * sy / m;
            const double intercept = (sy - slope * sx) / m;
            double sse = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double r = ys[i] - (intercept + slope * xs[i]);
                sse += r * r;
            }
            const double r2 = sst > 0.0 ? 1.0 - sse / sst : 1.0;
            out.tail_fit = TailFit{slope, r2};
        }
    }
    return out;
}

std::pair<double, double> transience_probe(std::span<const Trajectory> trajs,
                                           std::int64_t radius, std::int64_t burn_in) {
    if (trajs.empty()) throw domain_error("transience_probe: no trajectories");
    std::int64_t escaped = 0;
    for (const auto& traj : trajs) {
        if (burn_in >= traj.horizon()) {
            throw domain_error("transience_probe: burn_in must be below the horizon");
        }
        bool entered = false;
        for (std::int64_t n = burn_in + 1; n <= traj.horizon(); ++n) {
            if (coord_sum(traj.state_at(n)) <= radius) {
                entered = true;
                break;
            }
        }
        if (!entered) ++escaped;
    }
    const double n = double(trajs.size());
    const double frac = double(escaped) / n;
    return {frac, std::sqrt(frac * (1.0 - frac) / n)};
}

}  // namespace llp
