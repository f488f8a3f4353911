#include "llp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "llp/errors.hpp"

namespace llp {

namespace {

bool has_metric(const ExperimentConfig& c, const char* name) {
    return std::find(c.metrics.begin(), c.metrics.end(), name) != c.metrics.end();
}

// Runs `work(trajectory_index)` across the resolved thread count. Work items
// are pulled off a shared counter; everything workers write is indexed by
// trajectory, so scheduling cannot change the result.
void parallel_for_trajectories(int n, int threads, const std::function<void(int)>& work) {
    if (threads <= 1 || n <= 1) {
        for (int j = 0; j < n; ++j) work(j);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto runner = [&] {
        for (;;) {
            const int j = next.fetch_add(1);
            if (j >= n) return;
            try {
                work(j);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = std::min(threads, n);
    pool.reserve(std::size_t(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(runner);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double sample_sd(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= double(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / double(xs.size() - 1));
}

const char* region_name(Region r) {
    switch (r) {
        case Region::Interior: return "interior";
        case Region::XEdge: return "xedge";
        case Region::YEdge: return "yedge";
        case Region::Origin: return "origin";
    }
    return "?";
}

}  // namespace

void ExperimentConfig::validate() const {
    if (horizon < 0) throw config_error("horizon: must be nonnegative");
    if (n_trajectories < 1) throw config_error("n_trajectories: must be at least 1");
}

int resolve_threads(int requested) {
    int threads = requested > 0 ? requested : int(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (const char* cap_str = std::getenv("LLP_THREADS")) {
        const int cap = std::atoi(cap_str);
        if (cap >= 1) threads = std::min(threads, cap);
    }
    return threads;
}

EnsembleResult run_ensemble(const ExperimentConfig& config) {
    config.validate();
    const int n = config.n_trajectories;
    const std::int64_t h = config.horizon;
    const bool want_final = has_metric(config, "final_state");
    const bool want_alpha = has_metric(config, "alpha");
    const bool want_success = has_metric(config, "success_time");
    const std::int64_t margin =
        config.success_margin >= 0 ? config.success_margin : h / 10;

    // Coordinate sums are integers, so pointwise first and second moments
    // accumulate exactly; merge order cannot matter.
    std::vector<std::int64_t> sum(std::size_t(h) + 1, 0);
    std::vector<std::int64_t> sum_sq(std::size_t(h) + 1, 0);
    std::mutex merge_mu;

    EnsembleResult out;
    if (want_final) out.final_states.resize(std::size_t(n));
    if (want_alpha) out.alphas.resize(std::size_t(n));
    if (want_success) out.success_times.assign(std::size_t(n), -1);

    auto work = [&](int j) {
        std::vector<std::int64_t> local(std::size_t(h) + 1);
        std::vector<QueueState> path;
        if (want_success) {
            path.reserve(std::size_t(h) + 1);
            path.push_back(config.x0);
        }
        local[0] = coord_sum(config.x0);
        std::int64_t reds = 0;
        QueueState last = config.x0;
        run_stream(config.world, config.agent, config.x0, h,
                   trajectory_seed(config.master_seed, std::uint64_t(j)),
                   [&](const StepRecord& rec) {
                       local[std::size_t(rec.n) + 1] = coord_sum(rec.next);
                       if (rec.action == Action::Red) ++reds;
                       last = rec.next;
                       if (want_success) path.push_back(rec.next);
                   },
                   config.env_cap);
        if (want_final) out.final_states[std::size_t(j)] = last;
        if (want_alpha) out.alphas[std::size_t(j)] = h > 0 ? double(reds) / double(h) : 0.0;
        if (want_success) {
            // success_time is defined on trajectories; rebuild a minimal one.
            Trajectory traj;
            traj.x0 = config.x0;
            traj.steps.resize(std::size_t(h));
            for (std::int64_t i = 0; i < h; ++i) {
                traj.steps[std::size_t(i)].n = i;
                traj.steps[std::size_t(i)].state = path[std::size_t(i)];
                traj.steps[std::size_t(i)].next = path[std::size_t(i) + 1];
            }
            const auto t = success_time(traj, config.cone, margin);
            out.success_times[std::size_t(j)] = t ? *t : -1;
        }
        std::lock_guard<std::mutex> lock(merge_mu);
        for (std::size_t i = 0; i < local.size(); ++i) {
            sum[i] += local[i];
            sum_sq[i] += local[i] * local[i];
        }
    };
    parallel_for_trajectories(n, resolve_threads(config.threads), work);

    out.mean_l1.resize(std::size_t(h) + 1);
    out.se_l1.resize(std::size_t(h) + 1);
    for (std::size_t i = 0; i <= std::size_t(h); ++i) {
        const double mean = double(sum[i]) / double(n);
        out.mean_l1[i] = mean;
        if (n > 1) {
            const double var =
                (double(sum_sq[i]) - double(n) * mean * mean) / double(n - 1);
            out.se_l1[i] = std::sqrt(std::max(var, 0.0) / double(n));
        } else {
            out.se_l1[i] = 0.0;
        }
    }
    return out;
}

double discounted_cost(const Trajectory& traj, double gamma, CostKind kind) {
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw domain_error("discounted_cost: gamma must be within (0,1]");
    }
    double total = 0.0;
    double weight = 1.0;
    for (const auto& rec : traj.steps) {
        total += weight * transition_cost(kind, rec.state, rec.next);
        weight *= gamma;
    }
    return total;
}

CostCurve cost_curve(const ExperimentConfig& config, std::vector<double> gamma_grid,
                     CostKind eval_cost) {
    config.validate();
    for (double g : gamma_grid) {
        if (!(g > 0.0 && g < 1.0)) {
            throw config_error("gamma_grid: entries must be within (0,1)");
        }
    }
    std::sort(gamma_grid.begin(), gamma_grid.end());

    CostCurve curve;
    curve.gamma_grid = gamma_grid;
    const std::size_t n_gamma = gamma_grid.size();
    if (n_gamma == 0) return curve;

    const int n = config.n_trajectories;
    const std::int64_t h = config.horizon;
    const int threads = resolve_threads(config.threads);

    // One ensemble per agent; every grid point is evaluated on the same
    // trajectories with its own running discount weight.
    auto run_agent = [&](const AgentSpec& agent, std::uint64_t seed_base,
                         std::vector<std::vector<double>>& values, double& max_abs_cost) {
        values.assign(n_gamma, std::vector<double>(std::size_t(n), 0.0));
        std::vector<double> per_traj_max(std::size_t(n), 0.0);
        auto work = [&](int j) {
            std::vector<double> total(n_gamma, 0.0), weight(n_gamma, 1.0);
            double local_max = 0.0;
            run_stream(config.world, agent, config.x0, h,
                       trajectory_seed(config.master_seed, seed_base + std::uint64_t(j)),
                       [&](const StepRecord& rec) {
                           const double c = transition_cost(eval_cost, rec.state, rec.next);
                           local_max = std::max(local_max, std::fabs(c));
                           for (std::size_t k = 0; k < n_gamma; ++k) {
                               total[k] += weight[k] * c;
                               weight[k] *= gamma_grid[k];
                           }
                       },
                       config.env_cap);
            for (std::size_t k = 0; k < n_gamma; ++k) values[k][std::size_t(j)] = total[k];
            per_traj_max[std::size_t(j)] = local_max;
        };
        parallel_for_trajectories(n, threads, work);
        max_abs_cost = *std::max_element(per_traj_max.begin(), per_traj_max.end());
    };

    std::vector<std::vector<double>> agent_vals, green_vals;
    double agent_max = 0.0, green_max = 0.0;
    run_agent(config.agent, 0, agent_vals, agent_max);
    // Reference ensemble on the derived seed block [n, 2n).
    run_agent(AgentSpec::fixed(Action::Green), std::uint64_t(n), green_vals, green_max);

    for (std::size_t k = 0; k < n_gamma; ++k) {
        double mean = 0.0, gmean = 0.0;
        for (int j = 0; j < n; ++j) {
            mean += agent_vals[k][std::size_t(j)];
            gmean += green_vals[k][std::size_t(j)];
        }
        mean /= double(n);
        gmean /= double(n);
        curve.mean.push_back(mean);
        curve.green_mean.push_back(gmean);
        curve.se.push_back(sample_sd(agent_vals[k]) / std::sqrt(double(n)));
        curve.green_se.push_back(sample_sd(green_vals[k]) / std::sqrt(double(n)));
        curve.truncation_bias_bound.push_back(std::pow(gamma_grid[k], double(h)) * double(h) *
                                              std::max(agent_max, green_max));
    }
    return curve;
}

GreenReference green_reference(const ExperimentConfig& config) {
    config.validate();
    const std::int64_t h = config.horizon;
    const int n = config.n_trajectories;
    const std::int64_t start = h / 2 + 1;  // first retained index
    const std::int64_t retained = h - start + 1;
    if (retained < 1) return GreenReference{double(coord_sum(config.x0)), std::nullopt};

    constexpr int kBatches = 20;
    const AgentSpec green = AgentSpec::fixed(Action::Green);

    std::vector<std::int64_t> batch_sum(kBatches, 0);
    std::vector<std::int64_t> batch_count(kBatches, 0);
    std::mutex merge_mu;
    auto work = [&](int j) {
        std::vector<std::int64_t> local_sum(kBatches, 0);
        std::vector<std::int64_t> local_count(kBatches, 0);
        run_stream(config.world, green, config.x0, h,
                   trajectory_seed(config.master_seed, std::uint64_t(j)),
                   [&](const StepRecord& rec) {
                       const std::int64_t idx = rec.n + 1;  // index of rec.next
                       if (idx < start) return;
                       const std::int64_t b =
                           std::min<std::int64_t>(kBatches - 1, (idx - start) * kBatches / retained);
                       local_sum[std::size_t(b)] += coord_sum(rec.next);
                       local_count[std::size_t(b)] += 1;
                   },
                   config.env_cap);
        std::lock_guard<std::mutex> lock(merge_mu);
        for (int b = 0; b < kBatches; ++b) {
            batch_sum[std::size_t(b)] += local_sum[std::size_t(b)];
            batch_count[std::size_t(b)] += local_count[std::size_t(b)];
        }
    };
    parallel_for_trajectories(n, resolve_threads(config.threads), work);

    std::int64_t total = 0, count = 0;
    for (int b = 0; b < kBatches; ++b) {
        total += batch_sum[std::size_t(b)];
        count += batch_count[std::size_t(b)];
    }
    GreenReference ref;
    ref.estimate = double(total) / double(count);
    if (retained >= kBatches) {
        std::vector<double> means(kBatches);
        for (int b = 0; b < kBatches; ++b) {
            means[std::size_t(b)] =
                double(batch_sum[std::size_t(b)]) / double(batch_count[std::size_t(b)]);
        }
        ref.se = sample_sd(means) / std::sqrt(double(kBatches));
    }
    return ref;
}

LyapunovReport lyapunov_probe(const ModelSpec& model, Vec2R v, std::int64_t grid_max) {
    if (!(v.x1 >= 0.0 && v.x2 >= 0.0) || (v.x1 == 0.0 && v.x2 == 0.0) || !is_finite(v)) {
        throw domain_error("lyapunov_probe: v must be a nonzero nonnegative vector");
    }
    LyapunovReport report;

    const Region regions[4] = {Region::Interior, Region::XEdge, Region::YEdge, Region::Origin};
    double c_max = std::numeric_limits<double>::infinity();
    for (Region r : regions) {
        const JumpLaw law = model.law_for(r, Action::Green);
        LyapunovRegionInfo info;
        info.name = region_name(r);
        info.bounded = (r == Region::Origin);
        info.drift_along_v = dot(law.drift(), v);
        info.slope = 2.0 * info.drift_along_v;
        for (const auto& e : law.entries()) {
            const double proj = e.step.dx1 * v.x1 + e.step.dx2 * v.x2;
            info.quad += proj * proj * e.prob;
        }
        if (r == Region::Interior) report.interior_f_drift = info.drift_along_v;
        if (!info.bounded) c_max = std::min(c_max, -info.slope);
        report.regions.push_back(info);
    }

    // E(V(X1)) - V(x) = slope_region * F(x) + quad_region, exactly.
    auto lhs_at = [&](QueueState x) {
        const auto& info = report.regions[std::size_t(region_of(x))];
        const double f = x.x1 * v.x1 + x.x2 * v.x2;
        return info.slope * f + info.quad;
    };

    report.feasible = c_max > 0.0;
    if (report.feasible) {
        report.c = c_max;
        double bound = -std::numeric_limits<double>::infinity();
        for (std::int64_t x1 = 0; x1 <= grid_max; ++x1) {
            for (std::int64_t x2 = 0; x2 <= grid_max; ++x2) {
                const QueueState x{x1, x2};
                const double f = x1 * v.x1 + x2 * v.x2;
                bound = std::max(bound, lhs_at(x) + report.c * f);
            }
        }
        report.bound = bound;
        return report;
    }

    // Refuted: the regions whose slope is nonnegative violate any c > 0 for
    // large F; surface the strongest grid violators.
    std::vector<std::pair<double, QueueState>> violators;
    for (std::int64_t x1 = 0; x1 <= grid_max; ++x1) {
        for (std::int64_t x2 = 0; x2 <= grid_max; ++x2) {
            const QueueState x{x1, x2};
            const auto& info = report.regions[std::size_t(region_of(x))];
            if (info.bounded || info.slope < 0.0) continue;
            violators.push_back({lhs_at(x), x});
        }
    }
    std::sort(violators.begin(), violators.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; i < violators.size() && i < 8; ++i) {
        report.witnesses.push_back(violators[i].second);
    }
    return report;
}

TransienceReport transience_report(const ExperimentConfig& config, std::int64_t radius,
                                   std::int64_t burn_in) {
    config.validate();
    if (burn_in >= config.horizon) {
        throw domain_error("transience_report: burn_in must be below the horizon");
    }
    const int n = config.n_trajectories;
    TransienceReport report;
    report.escaped.assign(std::size_t(n), 1);
    auto work = [&](int j) {
        bool entered = false;
        run_stream(config.world, config.agent, config.x0, config.horizon,
                   trajectory_seed(config.master_seed, std::uint64_t(j)),
                   [&](const StepRecord& rec) {
                       if (!entered && rec.n >= burn_in && coord_sum(rec.next) <= radius) {
                           entered = true;
                       }
                   },
                   config.env_cap);
        report.escaped[std::size_t(j)] = entered ? 0 : 1;
    };
    parallel_for_trajectories(n, resolve_threads(config.threads), work);

    std::int64_t escaped = 0;
    for (char f : report.escaped) escaped += f;
    report.fraction = double(escaped) / double(n);
    report.se = std::sqrt(report.fraction * (1.0 - report.fraction) / double(n));
    return report;
}

AgentSpec qlearning_setting(bool constant_step, bool local_cost) {
    QLearningSpec s;
    s.epsilon = 0.1;
    s.discount = 0.1;
    s.step = constant_step ? StepSchedule::constant(0.2) : StepSchedule::harmonic();
    s.cost = local_cost ? CostKind::LocalDelta : CostKind::QueueTotal;
    s.q0_init = 0.0;
    s.greedy = GreedyRule::ArgMin;
    return AgentSpec::q_learning(s);
}

AgentSpec qlearning_setting_by_index(int index) {
    switch (index) {
        case 1: return qlearning_setting(true, true);
        case 2: return qlearning_setting(true, false);
        case 3: return qlearning_setting(false, true);
        case 4: return qlearning_setting(false, false);
    }
    throw config_error("setting index must be within 1..4");
}

}  // namespace llp
