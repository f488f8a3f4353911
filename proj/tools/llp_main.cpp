// llp: condition certifier and simulation harness for two-queue learning
// processes.
//
//   llp check|simulate|ensemble|curve|renewal|probe --config <path>
//       [--seed N] [--out DIR] [--set key.path=value ...]
//
// Every run stages its outputs and moves them into place only on success, so
// a failed run leaves no partial files. A manifest with the effective config
// and its hash accompanies every artifact. Exit codes: 0 success (check:
// conditions hold), 2 check refuted, 1 usage/config/data error, 3 resource
// cap exceeded.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "llp/errors.hpp"
#include "llp/serialize.hpp"

namespace fs = std::filesystem;
using namespace llp;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "llp-out";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file")->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "override master_seed");
    cmd->add_option("--set", args.overrides, "config override key.path=value");
}

RunConfig load_config(const CommonArgs& args) {
    std::ifstream in(args.config_path);
    if (!in) throw config_error("cannot open config file: " + args.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    // Validate the file on its own first, then fold in overrides.
    (void)parse_run_config_json(text);
    if (!args.overrides.empty()) text = apply_overrides(text, args.overrides);
    RunConfig config = parse_run_config_json(text);
    if (args.seed) config.master_seed = *args.seed;
    return config;
}

// Staged output writer: files land in a temp dir and are renamed into place
// together once the run has fully succeeded.
class OutputStage {
  public:
    explicit OutputStage(const std::string& out_dir) : final_dir_(out_dir) {
        fs::create_directories(final_dir_);
        staging_ = final_dir_ / (".staging-" + std::to_string(::getpid()));
        fs::create_directories(staging_);
    }

    ~OutputStage() {
        std::error_code ec;
        fs::remove_all(staging_, ec);
    }

    void add(const std::string& name, const std::string& content) {
        std::ofstream out(staging_ / name, std::ios::binary);
        if (!out) throw config_error("cannot write: " + (staging_ / name).string());
        out << content;
        names_.push_back(name);
    }

    void commit() {
        for (const auto& name : names_) {
            fs::rename(staging_ / name, final_dir_ / name);
        }
        names_.clear();
    }

    const std::vector<std::string>& names() const { return names_; }

  private:
    fs::path final_dir_;
    fs::path staging_;
    std::vector<std::string> names_;
};

std::string seed_tag(const RunConfig& config) { return std::to_string(config.master_seed); }

void print_checks(const std::vector<LabeledCheck>& checks, const char* title) {
    std::printf("%s\n", title);
    for (const auto& c : checks) {
        std::printf("  %-34s %s  (lhs=%.9g rhs=%.9g margin=%.9g)\n", c.label.c_str(),
                    c.pass ? "PASS" : "FAIL", c.lhs, c.rhs, c.margin);
    }
}

int run_check(const CommonArgs& args) {
    RunConfig config = load_config(args);
    if (!config.model) throw config_error("model: required by `check`");

    const ConditionReport report = model1_check(*config.model, config.direction_choice());
    std::optional<LemmaReport> lemma;
    if (config.model->is_load_balancing()) {
        lemma = lemma_lb_check(config.model->as_load_balancing());
    } else if (config.model->is_server_allocation()) {
        lemma = lemma_sa_check(config.model->as_server_allocation());
    }

    std::printf("conditions: stability-vector %s, common-direction %s, window-gap %s\n",
                report.cond_parameter2 ? "yes" : "no", report.cond_parameter4 ? "yes" : "no",
                report.cond_parameter5 ? "yes" : "no");
    if (report.green_vector) {
        std::printf("green stability vector v = (%.6f, %.6f)\n", report.green_vector->x1,
                    report.green_vector->x2);
    }
    if (report.direction) {
        std::printf("direction l = (%.6f, %.6f), rho = %.6f\n", report.direction->l.x1,
                    report.direction->l.x2, report.direction->rho);
    }
    if (report.quadrant) {
        std::printf("quadrant interval (alpha0, alpha1) = (%.6f, %.6f)\n",
                    report.quadrant->alpha0, report.quadrant->alpha1);
    }
    if (report.q_window) {
        std::printf("transience window (q0, q1) = (%.6f, %.6f)\n", report.q_window->q0,
                    report.q_window->q1);
    }
    print_checks(report.checks, "condition checks:");
    if (lemma) print_checks(lemma->checks, "closed-form inequality set:");

    OutputStage stage(args.out_dir);
    const std::string report_name = "check-" + seed_tag(config) + ".json";
    stage.add(report_name, condition_report_to_json(report, lemma));
    stage.add("check-" + seed_tag(config) + ".manifest.json",
              manifest_json("check", config, {report_name}));
    stage.commit();
    return report.all_pass() ? 0 : 2;
}

int run_simulate(const CommonArgs& args) {
    RunConfig config = load_config(args);
    const ExperimentConfig exp = config.experiment();
    const Trajectory traj =
        run_trajectory(exp.world, exp.agent, exp.x0, exp.horizon,
                       trajectory_seed(exp.master_seed, 0), exp.env_cap);

    OutputStage stage(args.out_dir);
    const std::string csv_name = "simulate-" + seed_tag(config) + ".csv";
    const std::string hdr_name = "simulate-" + seed_tag(config) + ".json";
    stage.add(csv_name, trajectory_to_csv(traj));
    stage.add(hdr_name, trajectory_header_json(traj));
    stage.add("simulate-" + seed_tag(config) + ".manifest.json",
              manifest_json("simulate", config, {csv_name, hdr_name}));
    stage.commit();
    std::printf("wrote %s (%" PRId64 " steps)\n", csv_name.c_str(), traj.horizon());
    return 0;
}

int run_ensemble_cmd(const CommonArgs& args) {
    RunConfig config = load_config(args);
    const ExperimentConfig exp = config.experiment();
    const EnsembleResult result = run_ensemble(exp);

    OutputStage stage(args.out_dir);
    const std::string series_name = "ensemble-" + seed_tag(config) + ".csv";
    stage.add(series_name, ensemble_to_csv(result));
    std::vector<std::string> outputs = {series_name};
    if (!result.final_states.empty() || !result.alphas.empty() ||
        !result.success_times.empty()) {
        const std::string summary_name = "ensemble-summaries-" + seed_tag(config) + ".csv";
        stage.add(summary_name, ensemble_summaries_to_csv(result));
        outputs.push_back(summary_name);
    }
    stage.add("ensemble-" + seed_tag(config) + ".manifest.json",
              manifest_json("ensemble", config, outputs));
    stage.commit();
    std::printf("wrote %s (%d trajectories, horizon %" PRId64 ", final mean %.3f)\n",
                series_name.c_str(), exp.n_trajectories, exp.horizon,
                result.mean_l1.back());
    return 0;
}

int run_curve(const CommonArgs& args) {
    RunConfig config = load_config(args);
    if (config.gamma_grid.empty()) {
        throw config_error("gamma_grid: required by `curve`");
    }
    const ExperimentConfig exp = config.experiment();
    const CostCurve curve = cost_curve(exp, config.gamma_grid);

    OutputStage stage(args.out_dir);
    const std::string curve_name = "curve-" + seed_tag(config) + ".csv";
    stage.add(curve_name, curve_to_csv(curve));
    stage.add("curve-" + seed_tag(config) + ".manifest.json",
              manifest_json("curve", config, {curve_name}));
    stage.commit();
    std::printf("wrote %s (%zu grid points)\n", curve_name.c_str(), curve.gamma_grid.size());
    return 0;
}

int run_renewal(const CommonArgs& args) {
    RunConfig config = load_config(args);
    if (config.renewal.trajectory.empty()) {
        throw config_error("renewal.trajectory: required by `renewal`");
    }
    const Trajectory traj = read_trajectory_csv(config.renewal.trajectory);
    Vec2R l = config.renewal.l;
    const double n = norm(l);
    if (n == 0.0) throw config_error("renewal.l: must be nonzero");
    l = {l.x1 / n, l.x2 / n};
    const std::int64_t margin =
        config.renewal.margin >= 0 ? config.renewal.margin : traj.horizon() / 10;

    const ProjectedPath path = project(traj, l);
    const RecordTimes records = record_times(path, margin);
    const DriftEstimate drift = estimate_drift(traj, &records);
    std::optional<std::pair<double, double>> alpha;
    if (!traj.steps.empty()) alpha = estimate_alpha(traj);

    OutputStage stage(args.out_dir);
    std::vector<std::string> outputs;
    std::optional<CycleStats> stats;
    if (records.certified.size() >= 2) {
        stats = cycle_stats(traj, records);
        const std::string cycles_name = "renewal-cycles-" + seed_tag(config) + ".csv";
        stage.add(cycles_name, cycles_to_csv(*stats));
        outputs.push_back(cycles_name);
    }
    const std::string report_name = "renewal-" + seed_tag(config) + ".json";
    stage.add(report_name,
              renewal_report_to_json(records, stats ? &*stats : nullptr, drift,
                                     alpha ? &*alpha : nullptr));
    outputs.push_back(report_name);
    stage.add("renewal-" + seed_tag(config) + ".manifest.json",
              manifest_json("renewal", config, outputs));
    stage.commit();
    std::printf("certified %zu record times (censor bound %" PRId64 ")\n",
                records.certified.size(), records.censor_bound);
    return 0;
}

int run_probe(const CommonArgs& args) {
    RunConfig config = load_config(args);
    const ExperimentConfig exp = config.experiment();
    const TransienceReport report =
        transience_report(exp, config.probe.radius, config.probe.burn_in);

    OutputStage stage(args.out_dir);
    const std::string report_name = "probe-" + seed_tag(config) + ".json";
    stage.add(report_name,
              probe_report_to_json(report, config.probe.radius, config.probe.burn_in));
    stage.add("probe-" + seed_tag(config) + ".manifest.json",
              manifest_json("probe", config, {report_name}));
    stage.commit();
    std::printf("never-returning fraction = %.4f +- %.4f\n", report.fraction, report.se);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation laboratory for local learning processes on two-queue models"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* check = app.add_subcommand("check", "certify the drift conditions of a model");
    CLI::App* simulate = app.add_subcommand("simulate", "write one trajectory CSV");
    CLI::App* ensemble = app.add_subcommand("ensemble", "Monte Carlo ensemble of trajectories");
    CLI::App* curve = app.add_subcommand("curve", "discounted-cost sweep over gamma");
    CLI::App* renewal = app.add_subcommand("renewal", "record-time and cycle reports");
    CLI::App* probe = app.add_subcommand("probe", "transience probe over an ensemble");
    for (CLI::App* cmd : {check, simulate, ensemble, curve, renewal, probe}) {
        add_common(cmd, args);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(args);
        if (simulate->parsed()) return run_simulate(args);
        if (ensemble->parsed()) return run_ensemble_cmd(args);
        if (curve->parsed()) return run_curve(args);
        if (renewal->parsed()) return run_renewal(args);
        if (probe->parsed()) return run_probe(args);
    } catch (const resource_limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
