// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Every quantitative target is pinned from closed forms or
// fixed statistical tolerances; nothing is calibrated at runtime.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "llp/conditions.hpp"
#include "llp/engine.hpp"
#include "llp/harness.hpp"
#include "llp/renewal.hpp"
#include "llp/rng.hpp"

using namespace llp;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    g_notes.push_back(buf);
}

void criterion(int id, const char* title, bool pass) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, title);
    if (!pass) {
        ++g_failures;
        for (const auto& n : g_notes) std::printf("         %s\n", n.c_str());
    }
    g_notes.clear();
}

bool close(double a, double b, double tol, const char* what) {
    if (std::fabs(a - b) <= tol) return true;
    note("%s: got %.12f, want %.12f (tol %.3g)", what, a, b, tol);
    return false;
}

bool check(bool ok, const char* what) {
    if (!ok) note("%s", what);
    return ok;
}

LoadBalancingParams lb_standard() { return {1.5, 0.1, 0.35, 10.8, 0.45, 0.8}; }

ModelSpec lb_model() { return ModelSpec::load_balancing(lb_standard()); }

// Closed forms for the standard parameter set.
constexpr double kLambda = 1.5, kMu1 = 0.1, kMu2 = 0.35, kPr = 0.45, kPg = 0.8;
const double kDenom = kLambda + kMu1 + kMu2;
const double kRho = (kLambda * kPr - kMu1) / kDenom;
const double kAlpha0 = (kMu2 - kLambda * (1.0 - kPg)) / (kLambda * (kPg - kPr));
const double kQ0 = kAlpha0 / kRho;
const Vec2R kDriftRed{(kLambda * kPr - kMu1) / kDenom, (kLambda * (1.0 - kPr) - kMu2) / kDenom};
const Vec2R kDriftGreen{(kLambda * kPg - kMu1) / kDenom, (kLambda * (1.0 - kPg) - kMu2) / kDenom};
const double kSumDrift = (kLambda - kMu1 - kMu2) / kDenom;  // 0.538462

ExperimentConfig make_config(bool free, AgentSpec agent, std::int64_t horizon, int n,
                             std::uint64_t seed) {
    ExperimentConfig c;
    c.world = World(lb_model(), free);
    c.agent = std::move(agent);
    c.x0 = {0, 0};
    c.horizon = horizon;
    c.n_trajectories = n;
    c.master_seed = seed;
    return c;
}

std::pair<Vec2R, Vec2R> pooled_drift(const EnsembleResult& r, std::int64_t horizon) {
    const double n = double(r.final_states.size());
    Vec2R mean{0, 0};
    for (const auto& x : r.final_states) {
        mean.x1 += double(x.x1) / double(horizon);
        mean.x2 += double(x.x2) / double(horizon);
    }
    mean = (1.0 / n) * mean;
    Vec2R var{0, 0};
    for (const auto& x : r.final_states) {
        const double d1 = double(x.x1) / double(horizon) - mean.x1;
        const double d2 = double(x.x2) / double(horizon) - mean.x2;
        var.x1 += d1 * d1;
        var.x2 += d2 * d2;
    }
    const Vec2R se{std::sqrt(var.x1 / (n - 1.0) / n), std::sqrt(var.x2 / (n - 1.0) / n)};
    return {mean, se};
}

double lag1_autocorr(const std::vector<double>& z) {
    const std::size_t n = z.size();
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= double(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        den += (z[i] - mean) * (z[i] - mean);
        if (i + 1 < n) num += (z[i] - mean) * (z[i + 1] - mean);
    }
    return num / den;
}

// --- criteria ---

void criterion1() {
    bool ok = true;
    const auto report = model1_check(lb_model(), DirectionChoice::fixed_axis1());
    ok &= check(report.all_pass(), "all three drift conditions must hold");
    ok &= check(report.q_window.has_value(), "transience window must be reported");
    if (report.q_window) {
        ok &= close(report.q_window->q0, kQ0, 1e-9, "q0");
        ok &= close(report.q_window->q1, 1.0, 1e-9, "q1");
        ok &= close(report.q_window->q0, 0.322981, 5e-7, "q0 (quoted)");
    }
    const auto lemma = lemma_lb_check(lb_standard());
    ok &= check(lemma.all_pass, "all six closed-form inequalities must pass");
    for (const auto& c : lemma.checks) {
        if (c.label == "mu_tilde_gt_threshold") {
            const double threshold_cf =
                kLambda * ((kMu1 + kMu2) * kPg - kMu1) / (kMu2 - kLambda * (1.0 - kPg));
            ok &= close(c.rhs, threshold_cf, 1e-9, "mu_tilde threshold");
            ok &= close(c.rhs, 7.8, 1e-9, "mu_tilde threshold (quoted)");
        }
        if (c.label == "mu2_lt_mix_bound") {
            const double bound_cf =
                (kLambda * kPr - kMu1) * (kPg - kPr) / kDenom + kLambda * (1.0 - kPg);
            ok &= close(c.rhs, bound_cf, 1e-9, "mu2 bound");
            ok &= close(c.rhs, 0.403205, 5e-7, "mu2 bound (quoted)");
        }
    }
    criterion(1, "condition certification on the standard load-balancing parameters", ok);
}

void criterion2() {
    bool ok = true;
    // Witness: the published inequalities hold, the direct gap check fails.
    const auto witness = lemma_sa_check({1.0, 1.2, 7.0});
    ok &= check(witness.all_pass, "inequality set must pass at (1, 1.2, 7)");
    const double rho_12 = (2.0 - 1.2) / ((2.0 + 1.2) * std::sqrt(2.0));
    for (const auto& c : witness.checks) {
        if (c.label == "direct_parameter5") {
            ok &= check(!c.pass, "direct gap check must fail at (1, 1.2, 7)");
            ok &= close(c.lhs, 1.0 - 1.0 / 1.2, 1e-9, "1 - alpha1");
            ok &= close(c.rhs, rho_12 - 0.2 / 1.2, 1e-9, "rho - alpha0");
        }
    }

    const auto good = lemma_sa_check({1.0, 1.05, 22.0});
    ok &= check(good.all_pass, "inequality set must pass at (1, 1.05, 22)");
    for (const auto& c : good.checks) {
        if (c.label == "direct_parameter5") {
            ok &= check(c.pass, "direct gap check must pass at (1, 1.05, 22)");
        }
    }
    const auto report = model1_check(ModelSpec::server_allocation({1.0, 1.05, 22.0}),
                                     DirectionChoice::fixed_diagonal());
    ok &= check(report.q_window.has_value(), "window must exist at (1, 1.05, 22)");
    if (report.q_window) {
        const double rho = (2.0 - 1.05) / ((2.0 + 1.05) * std::sqrt(2.0));
        const double a0 = 0.05 / 1.05, a1 = 1.0 / 1.05;
        ok &= close(report.q_window->q0, a0 / rho, 1e-9, "q0");
        ok &= close(report.q_window->q1, (a1 + rho - 1.0) / rho, 1e-9, "q1");
    }
    criterion(2, "inequality-set discrepancy witness on server allocation", ok);
}

void criterion3() {
    bool ok = true;
    struct Case {
        AgentSpec agent;
        Vec2R target;
        const char* name;
    };
    const Case cases[] = {
        {AgentSpec::coin(0.3), 0.3 * kDriftRed + 0.7 * kDriftGreen, "coin(0.3)"},
        {AgentSpec::fixed(Action::Red), kDriftRed, "fixed red"},
        {AgentSpec::fixed(Action::Green), kDriftGreen, "fixed green"},
    };
    for (const auto& [agent, target, name] : cases) {
        ExperimentConfig c = make_config(true, agent, 20'000, 500, 1103);
        c.metrics = {"final_state"};
        const auto result = run_ensemble(c);
        const auto [mean, se] = pooled_drift(result, c.horizon);
        if (std::fabs(mean.x1 - target.x1) > 3.0 * se.x1 ||
            std::fabs(mean.x2 - target.x2) > 3.0 * se.x2) {
            note("%s: pooled drift (%.6f, %.6f), want (%.6f, %.6f), se (%.6f, %.6f)", name,
                 mean.x1, mean.x2, target.x1, target.x2, se.x1, se.x2);
            ok = false;
        }
    }
    criterion(3, "limiting drift of free-world agents matches the mixture law", ok);
}

void criterion4() {
    ExperimentConfig c = make_config(true, qlearning_setting(true, true), 10'000, 200, 1104);
    c.metrics = {"alpha"};
    const auto result = run_ensemble(c);
    double mean = 0.0;
    for (double a : result.alphas) mean += a;
    mean /= double(result.alphas.size());
    double ss = 0.0;
    for (double a : result.alphas) ss += (a - mean) * (a - mean);
    const double se = std::sqrt(ss / double(result.alphas.size() - 1) /
                                double(result.alphas.size()));
    const auto [lo, hi] = alpha_bounds(0.5, kRho);
    bool ok = true;
    if (!(mean >= lo - 4.0 * se && mean <= hi + 4.0 * se)) {
        note("pooled alpha %.6f outside [%.6f - 4*%.6f, %.6f + 4*%.6f]", mean, lo, se, hi, se);
        ok = false;
    }
    ok &= close(lo, 0.147436, 5e-7, "lower bound (quoted)");
    ok &= close(hi, 0.852564, 5e-7, "upper bound (quoted)");
    criterion(4, "red-frequency envelope for the learner on the free world", ok);
}

// Shared by criteria 5 and 6: the four settings at N=500, H=10^4.
struct SettingRun {
    EnsembleResult ensemble;
    TransienceReport probe;
};

SettingRun run_setting(int index, bool with_probe) {
    ExperimentConfig c =
        make_config(false, qlearning_setting_by_index(index), 10'000, 500, 1105 + index);
    c.metrics = {"final_state"};
    SettingRun run;
    run.ensemble = run_ensemble(c);
    if (with_probe) run.probe = transience_report(c, 0, 100);
    return run;
}

void criteria5and6() {
    std::vector<SettingRun> runs;
    for (int idx = 1; idx <= 4; ++idx) runs.push_back(run_setting(idx, idx == 1));

    bool ok5 = true;
    if (runs[0].probe.fraction < 0.30) {
        note("never-returning fraction %.4f below 0.30", runs[0].probe.fraction);
        ok5 = false;
    }
    int slow = 0;
    for (const auto& x : runs[0].ensemble.final_states) {
        if (double(coord_sum(x)) < 0.25 * 10'000.0) ++slow;
    }
    const double slow_frac = double(slow) / double(runs[0].ensemble.final_states.size());
    if (slow_frac > 0.05) {
        note("fraction with |X_H| < H/4 is %.4f, above 0.05", slow_frac);
        ok5 = false;
    }
    criterion(5, "learner trajectories escape on the bounded world", ok5);

    bool ok6 = true;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& mean = runs[i].ensemble.mean_l1;
        const double growth = (mean[10'000] - mean[5'000]) / 5000.0;
        if (std::fabs(growth - kSumDrift) > 0.03) {
            note("setting %zu growth %.6f outside %.6f +- 0.03", i + 1, growth, kSumDrift);
            ok6 = false;
        }
    }
    for (std::size_t i = 0; i < runs.size(); ++i) {
        for (std::size_t j = i + 1; j < runs.size(); ++j) {
            const double mi = runs[i].ensemble.mean_l1.back();
            const double mj = runs[j].ensemble.mean_l1.back();
            const double si = runs[i].ensemble.se_l1.back();
            const double sj = runs[j].ensemble.se_l1.back();
            const double pooled = std::sqrt(si * si + sj * sj);
            if (std::fabs(mi - mj) > 3.0 * pooled) {
                note("settings %zu vs %zu: final means %.2f vs %.2f differ by > 3*%.2f", i + 1,
                     j + 1, mi, mj, pooled);
                ok6 = false;
            }
        }
    }
    criterion(6, "interior growth rate matches the closed form across all four settings", ok6);
}

void criterion7() {
    ExperimentConfig c = make_config(false, qlearning_setting(true, true), 10'000, 100, 1107);
    const auto curve = cost_curve(c, {0.9, 0.95, 0.99});
    bool ok = true;

    double lo = 1e300, hi = -1e300;
    for (std::size_t k = 0; k < curve.gamma_grid.size(); ++k) {
        const double scaled = (1.0 - curve.gamma_grid[k]) * curve.mean[k];
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
    }
    if (!(hi <= 2.0 * lo && lo > 0.0)) {
        note("(1-gamma)*J ranges [%.4f, %.4f], beyond factor 2", lo, hi);
        ok = false;
    }

    const double j99 = curve.mean.back();
    const double green90 = curve.green_mean.front();
    if (!(j99 >= 5.0 * green90)) {
        note("J(0.99) = %.3f not >= 5 * green J(0.9) = 5 * %.3f", j99, green90);
        ok = false;
    }

    double glo = 1e300, ghi = -1e300;
    for (double g : curve.green_mean) {
        glo = std::min(glo, g);
        ghi = std::max(ghi, g);
    }
    if (!(glo > 0.0 && ghi <= 2.0 * glo)) {
        note("green J ranges [%.4f, %.4f], beyond factor 2", glo, ghi);
        ok = false;
    }
    criterion(7, "discounted cost blows up for the learner and stays bounded for green", ok);
}

void criterion8() {
    ExperimentConfig c = make_config(false, AgentSpec::fixed(Action::Green), 10'000, 200, 1108);
    const auto result = run_ensemble(c);
    auto window_mean = [&](std::size_t from, std::size_t to) {
        double total = 0.0;
        for (std::size_t i = from; i < to; ++i) total += result.mean_l1[i];
        return total / double(to - from);
    };
    const double q3 = window_mean(5'000, 7'500);
    const double q4 = window_mean(7'500, 10'001);
    bool ok = true;
    if (!(q4 >= 0.8 * q3 && q4 <= 1.2 * q3)) {
        note("last-quarter mean %.4f outside +-20%% of third-quarter mean %.4f", q4, q3);
        ok = false;
    }
    const auto probe = lyapunov_probe(lb_model(), {0.04, 1.0}, 50);
    ok &= check(probe.feasible && probe.c > 0.0, "drift certificate must be feasible");
    criterion(8, "green policy is stable and carries a drift certificate", ok);
}

void criterion9() {
    const World world(lb_model(), true);
    const auto traj = run_trajectory(world, AgentSpec::coin(0.5), {0, 0}, 100'000, 1109);
    const auto path = project(traj, {1.0, 0.0});
    const auto records = record_times(path, traj.horizon() / 10);

    bool ok = true;
    if (records.certified.size() < 100) {
        note("only %zu certified record times", records.certified.size());
        ok = false;
    }
    const auto stats = cycle_stats(traj, records);
    if (!stats.tail_fit || stats.tail_fit->slope >= 0.0 || stats.tail_fit->r2 < 0.9) {
        note("gap tail fit slope %.4f r2 %.4f", stats.tail_fit ? stats.tail_fit->slope : 0.0,
             stats.tail_fit ? stats.tail_fit->r2 : 0.0);
        ok = false;
    }
    std::vector<double> d1, d2;
    for (const auto& d : stats.displacements) {
        d1.push_back(d.x1);
        d2.push_back(d.x2);
    }
    const double r1 = lag1_autocorr(d1);
    const double r2 = lag1_autocorr(d2);
    if (std::fabs(r1) > 0.1 || std::fabs(r2) > 0.1) {
        note("cycle displacement lag-1 autocorrelation (%.4f, %.4f)", r1, r2);
        ok = false;
    }
    criterion(9, "record times partition a long run into light-tailed i.i.d. cycles", ok);
}

void criterion10() {
    bool ok = true;
    Xoshiro256pp rng(1110);
    auto u = [&] { return rng.u01(); };

    // (a) law normalization, nonnegativity and boundary compliance.
    {
        int cases = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const ModelSpec model =
                trial % 2 == 0
                    ? ModelSpec::load_balancing({0.1 + 4.0 * u(), 0.02 + 2.0 * u(),
                                                 0.02 + 2.0 * u(), 0.05 + 9.0 * u(), u(), u()})
                    : ModelSpec::server_allocation(
                          {0.1 + 4.0 * u(), 0.02 + 2.0 * u(), 0.05 + 9.0 * u()});
            const QueueState x{std::int64_t(u() * 3), std::int64_t(u() * 3)};
            const auto law = jump_law(model, x, u() < 0.5 ? Action::Red : Action::Green);
            double total = 0.0;
            for (const auto& e : law.entries()) {
                total += e.prob;
                if (e.prob < 0.0 || !in_nonneg_quadrant(x + e.step)) {
                    note("law violates support constraints at trial %d", trial);
                    ok = false;
                }
            }
            if (std::fabs(total - 1.0) > 1e-12) {
                note("law normalization off by %.3g", std::fabs(total - 1.0));
                ok = false;
            }
            ++cases;
        }
        ok &= check(cases >= 1000, "normalization fuzz must cover 1000 cases");
    }

    // (b) free-process translation invariance, exact, for increment-local
    // agents (a state-dependent cost is not translation invariant).
    {
        const World world(lb_model(), true);
        for (int trial = 0; trial < 1000; ++trial) {
            AgentSpec agent = AgentSpec::coin(u());
            if (trial % 3 == 1) agent = AgentSpec::fixed(u() < 0.5 ? Action::Red : Action::Green);
            if (trial % 3 == 2) agent = qlearning_setting(true, true);
            const QueueState x0{std::int64_t(u() * 40) - 20, std::int64_t(u() * 40) - 20};
            const std::uint64_t seed = trajectory_seed(2200, std::uint64_t(trial));
            const auto moved = run_trajectory(world, agent, x0, 150, seed);
            const auto base = run_trajectory(world, agent, {0, 0}, 150, seed);
            for (std::size_t i = 0; i < 150; ++i) {
                if (moved.steps[i].next.x1 != base.steps[i].next.x1 + x0.x1 ||
                    moved.steps[i].next.x2 != base.steps[i].next.x2 + x0.x2 ||
                    moved.steps[i].action != base.steps[i].action ||
                    moved.steps[i].cost != base.steps[i].cost) {
                    note("translation breaks at trial %d step %zu", trial, i);
                    ok = false;
                    break;
                }
            }
        }
    }

    // (c) environment locality.
    {
        const World world(lb_model(), false);
        for (int trial = 0; trial < 1000; ++trial) {
            QLearningSpec s;
            s.epsilon = u();
            s.discount = 0.05 + 0.9 * u();
            s.step = trial % 2 == 0 ? StepSchedule::constant(u()) : StepSchedule::harmonic();
            s.cost = trial % 4 < 2 ? CostKind::LocalDelta : CostKind::QueueTotal;
            s.q0_init = u() - 0.5;
            const AgentSpec agent = AgentSpec::q_learning(s);
            Environment env(agent.default_env_value());
            Xoshiro256pp step_rng(trajectory_seed(2300, std::uint64_t(trial)));
            QueueState x{0, 0};
            std::set<std::tuple<std::int64_t, std::int64_t, int>> updated;
            for (std::int64_t n = 0; n < 150; ++n) {
                const StepRecord rec = llp_step(world, agent, x, env, n, step_rng);
                updated.insert({rec.state.x1, rec.state.x2, int(rec.action)});
                x = rec.next;
            }
            for (const auto& [state, entry] : env.table()) {
                for (int a = 0; a < 2; ++a) {
                    if (entry.value[a] != env.default_value() &&
                        updated.count({state.x1, state.x2, a}) == 0) {
                        note("locality violated at trial %d", trial);
                        ok = false;
                    }
                }
            }
        }
    }

    // (d) telescoping of the local cost at gamma = 1.
    {
        const World world(lb_model(), false);
        for (int trial = 0; trial < 1000; ++trial) {
            AgentSpec agent = qlearning_setting(trial % 2 == 0, trial % 4 < 2);
            if (trial % 5 == 0) agent = AgentSpec::coin(u());
            const auto traj = run_trajectory(world, agent, {0, 0}, 200,
                                             trajectory_seed(2400, std::uint64_t(trial)));
            const double total = discounted_cost(traj, 1.0, CostKind::LocalDelta);
            if (total != double(coord_sum(traj.final_state()) - coord_sum(traj.x0))) {
                note("telescoping identity fails at trial %d", trial);
                ok = false;
            }
        }
    }

    // (e) record-time replay soundness against the definition.
    {
        for (int trial = 0; trial < 1000; ++trial) {
            ProjectedPath path;
            path.l = {1.0, 0.0};
            double s = 0.0;
            const int len = 3 + int(u() * 80);
            const double drift = 0.6 * u() - 0.15;
            for (int i = 0; i < len; ++i) {
                path.values.push_back(s);
                s += drift + (u() < 0.5 ? 1.0 : -1.0);
            }
            const std::int64_t margin = std::int64_t(u() * 6);
            const auto records = record_times(path, margin);
            const std::int64_t last = std::int64_t(path.values.size()) - 1;
            std::set<std::int64_t> certified(records.certified.begin(),
                                             records.certified.end());
            for (std::int64_t n = 0; n <= last; ++n) {
                bool record = true;
                for (std::int64_t k = 0; k < n; ++k) {
                    record &= path.values[std::size_t(n)] > path.values[std::size_t(k)];
                }
                bool future = true;
                for (std::int64_t k = n + 1; k <= last; ++k) {
                    future &= path.values[std::size_t(k)] > path.values[std::size_t(n)];
                }
                const bool vacuous = n == last;
                const bool expected = record && future && n <= last - margin &&
                                      (!vacuous || margin == 0);
                if (expected != (certified.count(n) == 1)) {
                    note("record replay mismatch at trial %d index %" PRId64, trial, n);
                    ok = false;
                }
            }
        }
    }

    // (f) determinism of ensembles under parallelism.
    {
        for (int trial = 0; trial < 1000; ++trial) {
            ExperimentConfig c = make_config(trial % 2 == 0, AgentSpec::coin(u()), 60, 6,
                                             trajectory_seed(2600, std::uint64_t(trial)));
            if (trial % 3 == 0) c.agent = qlearning_setting(true, true);
            c.metrics = {"alpha"};
            c.threads = 1;
            const auto serial = run_ensemble(c);
            c.threads = 4;
            const auto parallel = run_ensemble(c);
            if (serial.mean_l1 != parallel.mean_l1 || serial.se_l1 != parallel.se_l1 ||
                serial.alphas != parallel.alphas) {
                note("parallel ensemble diverges at trial %d", trial);
                ok = false;
            }
        }
    }
    criterion(10, "structural invariants hold over randomized fuzzing", ok);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criteria5and6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
