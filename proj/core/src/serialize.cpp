#include "llp/serialize.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "llp/errors.hpp"

namespace llp {

namespace {

using nlohmann::json;

// Strict object reader: every key must be consumed exactly once, leftovers
// are reported with their full path.
class Reader {
  public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw config_error(path_ + ": expected an object");
    }

    bool has(const char* key) const { return j_.contains(key); }

    const json& require(const char* key) {
        consumed_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) throw config_error(path_ + "." + key + ": missing required field");
        return *it;
    }

    const json* optional(const char* key) {
        consumed_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    double number(const char* key) { return as_number(require(key), key); }
    double number_or(const char* key, double fallback) {
        const json* v = optional(key);
        return v ? as_number(*v, key) : fallback;
    }
    std::int64_t integer(const char* key) { return as_integer(require(key), key); }
    std::int64_t integer_or(const char* key, std::int64_t fallback) {
        const json* v = optional(key);
        return v ? as_integer(*v, key) : fallback;
    }
    std::uint64_t uinteger_or(const char* key, std::uint64_t fallback) {
        const json* v = optional(key);
        if (!v) return fallback;
        if (!v->is_number_integer() && !v->is_number_unsigned()) {
            throw config_error(path_ + "." + key + ": expected an integer");
        }
        return v->get<std::uint64_t>();
    }
    std::string string(const char* key) { return as_string(require(key), key); }
    std::string string_or(const char* key, std::string fallback) {
        const json* v = optional(key);
        return v ? as_string(*v, key) : std::move(fallback);
    }
    bool boolean_or(const char* key, bool fallback) {
        const json* v = optional(key);
        if (!v) return fallback;
        if (!v->is_boolean()) throw config_error(path_ + "." + key + ": expected a boolean");
        return v->get<bool>();
    }

    std::string subpath(const char* key) const { return path_ + "." + key; }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (consumed_.find(it.key()) == consumed_.end()) {
                throw config_error(path_ + "." + it.key() + ": unknown key");
            }
        }
    }

  private:
    double as_number(const json& v, const char* key) const {
        if (!v.is_number()) throw config_error(path_ + "." + key + ": expected a number");
        return v.get<double>();
    }
    std::int64_t as_integer(const json& v, const char* key) const {
        if (!v.is_number_integer() && !v.is_number_unsigned()) {
            throw config_error(path_ + "." + key + ": expected an integer");
        }
        return v.get<std::int64_t>();
    }
    std::string as_string(const json& v, const char* key) const {
        if (!v.is_string()) throw config_error(path_ + "." + key + ": expected a string");
        return v.get<std::string>();
    }

    const json& j_;
    std::string path_;
    std::set<std::string> consumed_;
};

Vec2R parse_vec2(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw config_error(path + ": expected [number, number]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

QueueState parse_state(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer()) {
        throw config_error(path + ": expected [integer, integer]");
    }
    return {v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
}

JumpLaw parse_canonical_law(const json& v, const std::string& path, bool origin) {
    const std::size_t want = origin ? 2 : 4;
    if (!v.is_array() || v.size() != want) {
        throw config_error(path + ": expected an array of " + std::to_string(want) +
                           " probabilities in canonical step order");
    }
    std::vector<JumpEntry> entries;
    const JumpStep steps[4] = {kStepE1Plus, kStepE2Plus, kStepE1Minus, kStepE2Minus};
    for (std::size_t i = 0; i < want; ++i) {
        if (!v[i].is_number()) throw config_error(path + ": expected numbers");
        const double p = v[i].get<double>();
        if (p != 0.0) entries.push_back({steps[i], p});
    }
    try {
        return JumpLaw(std::move(entries));
    } catch (const config_error& e) {
        throw config_error(path + ": " + e.what());
    }
}

json law_to_canonical(const JumpLaw& law, bool origin) {
    json arr = json::array();
    const JumpStep steps[4] = {kStepE1Plus, kStepE2Plus, kStepE1Minus, kStepE2Minus};
    const std::size_t want = origin ? 2 : 4;
    for (std::size_t i = 0; i < want; ++i) arr.push_back(law.prob_of(steps[i]));
    return arr;
}

ModelSpec parse_model(const json& j, const std::string& path) {
    Reader r(j, path);
    const std::string kind = r.string("kind");
    if (kind == "load_balancing") {
        LoadBalancingParams p;
        p.lambda = r.number("lambda");
        p.mu1 = r.number("mu1");
        p.mu2 = r.number("mu2");
        p.mu_tilde = r.number("mu_tilde");
        p.p_r = r.number("p_r");
        p.p_g = r.number("p_g");
        r.finish();
        return ModelSpec::load_balancing(p);
    }
    if (kind == "server_allocation") {
        ServerAllocationParams p;
        p.lambda = r.number("lambda");
        p.mu = r.number("mu");
        p.mu_tilde = r.number("mu_tilde");
        r.finish();
        return ModelSpec::server_allocation(p);
    }
    if (kind == "custom") {
        CustomLaws laws;
        laws.interior_red = parse_canonical_law(r.require("interior_red"),
                                                r.subpath("interior_red"), false);
        laws.interior_green = parse_canonical_law(r.require("interior_green"),
                                                  r.subpath("interior_green"), false);
        laws.xedge_red = parse_canonical_law(r.require("xedge_red"), r.subpath("xedge_red"), false);
        laws.xedge_green =
            parse_canonical_law(r.require("xedge_green"), r.subpath("xedge_green"), false);
        laws.yedge_red = parse_canonical_law(r.require("yedge_red"), r.subpath("yedge_red"), false);
        laws.yedge_green =
            parse_canonical_law(r.require("yedge_green"), r.subpath("yedge_green"), false);
        laws.origin_red = parse_canonical_law(r.require("origin_red"), r.subpath("origin_red"), true);
        laws.origin_green =
            parse_canonical_law(r.require("origin_green"), r.subpath("origin_green"), true);
        r.finish();
        try {
            return ModelSpec::custom(std::move(laws));
        } catch (const config_error& e) {
            throw config_error(path + ": " + e.what());
        }
    }
    throw config_error(path + ".kind: unknown model kind '" + kind + "'");
}

json model_to_json(const ModelSpec& m) {
    json j;
    if (m.is_load_balancing()) {
        const auto& p = m.as_load_balancing();
        j["kind"] = "load_balancing";
        j["lambda"] = p.lambda;
        j["mu1"] = p.mu1;
        j["mu2"] = p.mu2;
        j["mu_tilde"] = p.mu_tilde;
        j["p_r"] = p.p_r;
        j["p_g"] = p.p_g;
    } else if (m.is_server_allocation()) {
        const auto& p = m.as_server_allocation();
        j["kind"] = "server_allocation";
        j["lambda"] = p.lambda;
        j["mu"] = p.mu;
        j["mu_tilde"] = p.mu_tilde;
    } else {
        const auto& c = m.as_custom();
        j["kind"] = "custom";
        j["interior_red"] = law_to_canonical(c.interior_red, false);
        j["interior_green"] = law_to_canonical(c.interior_green, false);
        j["xedge_red"] = law_to_canonical(c.xedge_red, false);
        j["xedge_green"] = law_to_canonical(c.xedge_green, false);
        j["yedge_red"] = law_to_canonical(c.yedge_red, false);
        j["yedge_green"] = law_to_canonical(c.yedge_green, false);
        j["origin_red"] = law_to_canonical(c.origin_red, true);
        j["origin_green"] = law_to_canonical(c.origin_green, true);
    }
    return j;
}

StepSchedule parse_step(const json& j, const std::string& path) {
    Reader r(j, path);
    const std::string kind = r.string("kind");
    StepSchedule s;
    if (kind == "constant") {
        s = StepSchedule::constant(r.number("delta"));
    } else if (kind == "harmonic") {
        s = StepSchedule::harmonic();
    } else if (kind == "harmonic_per_visit") {
        s = StepSchedule::harmonic_per_visit();
    } else {
        throw config_error(path + ".kind: unknown step kind '" + kind + "'");
    }
    r.finish();
    return s;
}

json step_to_json(const StepSchedule& s) {
    json j;
    switch (s.kind) {
        case StepSchedule::Kind::Constant:
            j["kind"] = "constant";
            j["delta"] = s.delta;
            break;
        case StepSchedule::Kind::Harmonic:
            j["kind"] = "harmonic";
            break;
        case StepSchedule::Kind::HarmonicPerVisit:
            j["kind"] = "harmonic_per_visit";
            break;
    }
    return j;
}

Action parse_action(const std::string& s, const std::string& path) {
    if (s == "red" || s == "r") return Action::Red;
    if (s == "green" || s == "g") return Action::Green;
    throw config_error(path + ": expected 'red' or 'green'");
}

AgentSpec parse_agent(const json& j, const std::string& path) {
    Reader r(j, path);
    const std::string kind = r.string("kind");
    if (kind == "q_learning") {
        QLearningSpec s;
        s.epsilon = r.number_or("epsilon", 0.1);
        s.discount = r.number_or("discount", 0.1);
        if (const json* step = r.optional("step")) s.step = parse_step(*step, r.subpath("step"));
        const std::string cost = r.string_or("cost", "local_delta");
        if (cost == "local_delta") {
            s.cost = CostKind::LocalDelta;
        } else if (cost == "queue_total") {
            s.cost = CostKind::QueueTotal;
        } else {
            throw config_error(path + ".cost: unknown cost kind '" + cost + "'");
        }
        s.q0_init = r.number_or("q0_init", 0.0);
        const std::string greedy = r.string_or("greedy", "argmin");
        if (greedy == "argmin") {
            s.greedy = GreedyRule::ArgMin;
        } else if (greedy == "argmax_as_written") {
            s.greedy = GreedyRule::ArgMaxAsWritten;
        } else {
            throw config_error(path + ".greedy: unknown greedy rule '" + greedy + "'");
        }
        r.finish();
        try {
            return AgentSpec::q_learning(s);
        } catch (const config_error& e) {
            throw config_error(path + ": " + e.what());
        }
    }
    if (kind == "fixed") {
        const Action a = parse_action(r.string("action"), r.subpath("action"));
        r.finish();
        return AgentSpec::fixed(a);
    }
    if (kind == "coin") {
        const double q = r.number("q");
        r.finish();
        try {
            return AgentSpec::coin(q);
        } catch (const config_error& e) {
            throw config_error(path + ": " + e.what());
        }
    }
    throw config_error(path + ".kind: unknown agent kind '" + kind + "'");
}

json agent_to_json(const AgentSpec& a) {
    json j;
    if (a.is_q_learning()) {
        const auto& s = a.as_q_learning();
        j["kind"] = "q_learning";
        j["epsilon"] = s.epsilon;
        j["discount"] = s.discount;
        j["step"] = step_to_json(s.step);
        j["cost"] = s.cost == CostKind::LocalDelta ? "local_delta" : "queue_total";
        j["q0_init"] = s.q0_init;
        j["greedy"] = s.greedy == GreedyRule::ArgMin ? "argmin" : "argmax_as_written";
    } else if (a.is_fixed()) {
        j["kind"] = "fixed";
        j["action"] = a.as_fixed().action == Action::Red ? "red" : "green";
    } else {
        j["kind"] = "coin";
        j["q"] = a.as_coin().q;
    }
    return j;
}

json run_config_to_json(const RunConfig& c) {
    json j;
    if (c.model) j["model"] = model_to_json(*c.model);
    j["free"] = c.free;
    if (c.agent) j["agent"] = agent_to_json(*c.agent);
    j["x0"] = json::array({c.x0.x1, c.x0.x2});
    j["horizon"] = c.horizon;
    j["n_trajectories"] = c.n_trajectories;
    j["master_seed"] = c.master_seed;
    j["metrics"] = c.metrics;
    if (!c.gamma_grid.empty()) j["gamma_grid"] = c.gamma_grid;
    j["env_cap"] = c.env_cap;
    j["threads"] = c.threads;
    json check;
    check["strategy"] = c.check.strategy;
    if (c.check.strategy == "custom") {
        check["l"] = json::array({c.check.custom_l.x1, c.check.custom_l.x2});
    }
    j["check"] = check;
    if (!c.renewal.trajectory.empty()) {
        json ren;
        ren["trajectory"] = c.renewal.trajectory;
        ren["l"] = json::array({c.renewal.l.x1, c.renewal.l.x2});
        ren["margin"] = c.renewal.margin;
        ren["restrict_quadrant"] = c.renewal.restrict_quadrant;
        j["renewal"] = ren;
    }
    json probe;
    probe["radius"] = c.probe.radius;
    probe["burn_in"] = c.probe.burn_in;
    j["probe"] = probe;
    return j;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

DirectionChoice RunConfig::direction_choice() const {
    if (check.strategy == "default") {
        if (!model) throw config_error("check.strategy: 'default' needs a model");
        return default_direction(*model);
    }
    if (check.strategy == "fixed_axis1") return DirectionChoice::fixed_axis1();
    if (check.strategy == "fixed_diagonal") return DirectionChoice::fixed_diagonal();
    if (check.strategy == "maximize") return DirectionChoice::maximize();
    if (check.strategy == "custom") return DirectionChoice::custom(check.custom_l);
    throw config_error("check.strategy: unknown strategy '" + check.strategy + "'");
}

ExperimentConfig RunConfig::experiment() const {
    if (!model) throw config_error("model: required for this subcommand");
    if (!agent) throw config_error("agent: required for this subcommand");
    ExperimentConfig e;
    e.world = World(*model, free);
    e.agent = *agent;
    e.x0 = x0;
    e.horizon = horizon;
    e.n_trajectories = n_trajectories;
    e.master_seed = master_seed;
    e.metrics = metrics;
    e.env_cap = env_cap;
    e.threads = threads;
    e.cone = ConeSpec{renewal.l, renewal.restrict_quadrant};
    const double n = norm(e.cone.l);
    if (n > 0.0 && std::fabs(n - 1.0) > 1e-12) {
        e.cone.l = {e.cone.l.x1 / n, e.cone.l.x2 / n};
    }
    e.success_margin = renewal.margin;
    e.validate();
    return e;
}

ModelSpec parse_model_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("model: invalid JSON: ") + e.what());
    }
    return parse_model(j, "model");
}

std::string model_to_json_string(const ModelSpec& model, int indent) {
    return model_to_json(model).dump(indent);
}

RunConfig parse_run_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    Reader r(j, "config");
    RunConfig c;
    if (const json* m = r.optional("model")) c.model = parse_model(*m, r.subpath("model"));
    c.free = r.boolean_or("free", false);
    if (const json* a = r.optional("agent")) c.agent = parse_agent(*a, r.subpath("agent"));
    if (const json* x = r.optional("x0")) c.x0 = parse_state(*x, r.subpath("x0"));
    c.horizon = r.integer_or("horizon", 10'000);
    if (c.horizon < 0) throw config_error("config.horizon: must be nonnegative");
    c.n_trajectories = int(r.integer_or("n_trajectories", 1));
    if (c.n_trajectories < 1) throw config_error("config.n_trajectories: must be at least 1");
    c.master_seed = r.uinteger_or("master_seed", 0);
    if (const json* m = r.optional("metrics")) {
        if (!m->is_array()) throw config_error("config.metrics: expected an array of strings");
        c.metrics.clear();
        for (const auto& v : *m) {
            if (!v.is_string()) throw config_error("config.metrics: expected an array of strings");
            c.metrics.push_back(v.get<std::string>());
        }
    }
    if (const json* g = r.optional("gamma_grid")) {
        if (!g->is_array()) throw config_error("config.gamma_grid: expected an array of numbers");
        for (const auto& v : *g) {
            if (!v.is_number()) throw config_error("config.gamma_grid: expected numbers");
            c.gamma_grid.push_back(v.get<double>());
        }
    }
    const std::int64_t cap = r.integer_or("env_cap", std::int64_t(kDefaultEnvCap));
    if (cap < 1) throw config_error("config.env_cap: must be positive");
    c.env_cap = std::size_t(cap);
    c.threads = int(r.integer_or("threads", 0));

    if (const json* ch = r.optional("check")) {
        Reader cr(*ch, "config.check");
        c.check.strategy = cr.string_or("strategy", "default");
        if (const json* l = cr.optional("l")) {
            c.check.custom_l = parse_vec2(*l, "config.check.l");
        }
        cr.finish();
        static const char* known[] = {"default", "fixed_axis1", "fixed_diagonal", "maximize",
                                      "custom"};
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                return c.check.strategy == k;
            }) == std::end(known)) {
            throw config_error("config.check.strategy: unknown strategy '" + c.check.strategy +
                               "'");
        }
    }
    if (const json* ren = r.optional("renewal")) {
        Reader rr(*ren, "config.renewal");
        c.renewal.trajectory = rr.string_or("trajectory", "");
        if (const json* l = rr.optional("l")) c.renewal.l = parse_vec2(*l, "config.renewal.l");
        c.renewal.margin = rr.integer_or("margin", -1);
        c.renewal.restrict_quadrant = rr.boolean_or("restrict_quadrant", true);
        rr.finish();
    }
    if (const json* pr = r.optional("probe")) {
        Reader pp(*pr, "config.probe");
        c.probe.radius = pp.integer_or("radius", 0);
        c.probe.burn_in = pp.integer_or("burn_in", 0);
        pp.finish();
    }
    r.finish();
    return c;
}

std::string run_config_to_json_string(const RunConfig& config, int indent) {
    return run_config_to_json(config).dump(indent);
}

std::string apply_overrides(const std::string& text,
                            const std::vector<std::string>& overrides) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw config_error("override '" + ov + "': expected key.path=value");
        }
        const std::string path = ov.substr(0, eq);
        const std::string value = ov.substr(eq + 1);
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::parse_error&) {
            parsed = value;  // bare strings are allowed unquoted
        }
        json* node = &j;
        std::size_t pos = 0;
        for (;;) {
            const auto dot = path.find('.', pos);
            const std::string key = path.substr(pos, dot - pos);
            if (key.empty()) throw config_error("override '" + ov + "': empty path segment");
            if (dot == std::string::npos) {
                (*node)[key] = parsed;
                break;
            }
            node = &(*node)[key];
            pos = dot + 1;
        }
    }
    return j.dump();
}

std::string config_hash(const RunConfig& config) {
    const std::string canonical = run_config_to_json(config).dump();
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001B3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::ostringstream out;
    out << "n,x1,x2,action,cost,first_visit\n";
    for (const auto& rec : traj.steps) {
        out << rec.n << ',' << rec.state.x1 << ',' << rec.state.x2 << ','
            << to_cstr(rec.action) << ',' << format_double(rec.cost) << ','
            << (rec.first_visit ? 1 : 0) << '\n';
    }
    const QueueState last = traj.final_state();
    out << traj.horizon() << ',' << last.x1 << ',' << last.x2 << ",,,\n";
    return out.str();
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << trajectory_to_csv(traj);
}

std::string trajectory_header_json(const Trajectory& traj, int indent) {
    json j;
    j["model"] = model_to_json(traj.world.model());
    j["free"] = traj.world.free();
    j["agent"] = agent_to_json(traj.agent);
    j["seed"] = traj.seed;
    j["x0"] = json::array({traj.x0.x1, traj.x0.x2});
    j["horizon"] = traj.horizon();
    return j.dump(indent);
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open trajectory file: " + path);
    Trajectory traj;
    std::string line;
    if (!std::getline(in, line)) throw config_error(path + ": empty trajectory file");

    struct Row {
        std::int64_t n;
        QueueState state;
        std::string action;
        double cost;
        bool first;
        bool has_action;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Row row{};
        std::istringstream ss(line);
        std::string field;
        auto next_field = [&](const char* what) {
            if (!std::getline(ss, field, ',')) {
                throw config_error(path + ": truncated row, missing " + what);
            }
            return field;
        };
        row.n = std::stoll(next_field("n"));
        row.state.x1 = std::stoll(next_field("x1"));
        row.state.x2 = std::stoll(next_field("x2"));
        row.has_action = bool(std::getline(ss, field, ',')) && !field.empty();
        if (row.has_action) {
            row.action = field;
            row.cost = std::stod(next_field("cost"));
            row.first = std::stoi(next_field("first_visit")) != 0;
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw config_error(path + ": no rows");
    traj.x0 = rows.front().state;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const Row& row = rows[i];
        if (!row.has_action) throw config_error(path + ": interior row missing action");
        StepRecord rec;
        rec.n = row.n;
        rec.state = row.state;
        rec.next = rows[i + 1].state;
        rec.action = row.action == "r" ? Action::Red : Action::Green;
        rec.cost = row.cost;
        rec.first_visit = row.first;
        traj.steps.push_back(rec);
    }

    // Restore world/agent/seed from the sidecar when available.
    const std::filesystem::path sidecar = std::filesystem::path(path).replace_extension(".json");
    if (std::filesystem::exists(sidecar)) {
        std::ifstream sin(sidecar);
        std::stringstream buf;
        buf << sin.rdbuf();
        json j = json::parse(buf.str(), nullptr, false);
        if (!j.is_discarded() && j.is_object()) {
            if (j.contains("model")) {
                traj.world = World(parse_model(j["model"], "model"),
                                   j.value("free", false));
            }
            if (j.contains("agent")) traj.agent = parse_agent(j["agent"], "agent");
            if (j.contains("seed")) traj.seed = j["seed"].get<std::uint64_t>();
        }
    }
    return traj;
}

std::string ensemble_to_csv(const EnsembleResult& result) {
    std::ostringstream out;
    out << "n,mean_l1,se_l1\n";
    for (std::size_t i = 0; i < result.mean_l1.size(); ++i) {
        out << i << ',' << format_double(result.mean_l1[i]) << ','
            << format_double(result.se_l1[i]) << '\n';
    }
    return out.str();
}

std::string ensemble_summaries_to_csv(const EnsembleResult& result) {
    std::ostringstream out;
    out << "trajectory";
    const bool fin = !result.final_states.empty();
    const bool alp = !result.alphas.empty();
    const bool suc = !result.success_times.empty();
    if (fin) out << ",final_x1,final_x2";
    if (alp) out << ",alpha";
    if (suc) out << ",success_time";
    out << '\n';
    const std::size_t n = std::max({result.final_states.size(), result.alphas.size(),
                                    result.success_times.size()});
    for (std::size_t j = 0; j < n; ++j) {
        out << j;
        if (fin) out << ',' << result.final_states[j].x1 << ',' << result.final_states[j].x2;
        if (alp) out << ',' << format_double(result.alphas[j]);
        if (suc) out << ',' << result.success_times[j];
        out << '\n';
    }
    return out.str();
}

std::string curve_to_csv(const CostCurve& curve) {
    std::ostringstream out;
    out << "gamma,mean,se,green_mean,green_se,truncation_bias_bound\n";
    for (std::size_t k = 0; k < curve.gamma_grid.size(); ++k) {
        out << format_double(curve.gamma_grid[k]) << ',' << format_double(curve.mean[k]) << ','
            << format_double(curve.se[k]) << ',' << format_double(curve.green_mean[k]) << ','
            << format_double(curve.green_se[k]) << ','
            << format_double(curve.truncation_bias_bound[k]) << '\n';
    }
    return out.str();
}

std::string cycles_to_csv(const CycleStats& stats) {
    std::ostringstream out;
    out << "cycle,gap,scope,disp_x1,disp_x2\n";
    for (std::size_t k = 0; k < stats.gaps.size(); ++k) {
        out << k << ',' << stats.gaps[k] << ',' << format_double(stats.scopes[k]) << ','
            << format_double(stats.displacements[k].x1) << ','
            << format_double(stats.displacements[k].x2) << '\n';
    }
    return out.str();
}

namespace {

json checks_to_json(const std::vector<LabeledCheck>& checks) {
    json arr = json::array();
    for (const auto& c : checks) {
        json item;
        item["label"] = c.label;
        item["pass"] = c.pass;
        item["lhs"] = c.lhs;
        item["rhs"] = c.rhs;
        item["margin"] = c.margin;
        arr.push_back(item);
    }
    return arr;
}

}  // namespace

std::string condition_report_to_json(const ConditionReport& report,
                                     const std::optional<LemmaReport>& lemma, int indent) {
    json j;
    j["cond_parameter2"] = report.cond_parameter2;
    j["cond_parameter4"] = report.cond_parameter4;
    j["cond_parameter5"] = report.cond_parameter5;
    j["green_vector"] = report.green_vector
                            ? json(json::array({report.green_vector->x1, report.green_vector->x2}))
                            : json(nullptr);
    if (report.direction) {
        json d;
        d["l"] = json::array({report.direction->l.x1, report.direction->l.x2});
        d["rho"] = report.direction->rho;
        j["direction"] = d;
    } else {
        j["direction"] = nullptr;
    }
    if (report.quadrant) {
        json q;
        q["alpha0"] = report.quadrant->alpha0;
        q["alpha1"] = report.quadrant->alpha1;
        j["quadrant"] = q;
    } else {
        j["quadrant"] = nullptr;
    }
    if (report.q_window) {
        json w;
        w["q0"] = report.q_window->q0;
        w["q1"] = report.q_window->q1;
        j["q_window"] = w;
    } else {
        j["q_window"] = nullptr;
    }
    j["checks"] = checks_to_json(report.checks);
    if (lemma) {
        json l;
        l["all_pass"] = lemma->all_pass;
        l["checks"] = checks_to_json(lemma->checks);
        j["lemma"] = l;
    }
    return j.dump(indent);
}

std::string renewal_report_to_json(const RecordTimes& records, const CycleStats* stats,
                                   const DriftEstimate& drift,
                                   const std::pair<double, double>* alpha, int indent) {
    json j;
    j["certified"] = records.certified;
    j["censor_bound"] = records.censor_bound;
    j["vacuous"] = records.vacuous;
    j["n_certified"] = records.certified.size();
    json d;
    d["point"] = json::array({drift.point.x1, drift.point.x2});
    d["n_used"] = drift.n_used;
    if (drift.ci_half) {
        d["ci_half"] = json::array({drift.ci_half->x1, drift.ci_half->x2});
    } else {
        d["ci_half"] = nullptr;
    }
    j["drift"] = d;
    if (alpha) {
        j["alpha"] = alpha->first;
        j["alpha_se"] = alpha->second;
    }
    if (stats) {
        j["n_cycles"] = stats->gaps.size();
        if (stats->tail_fit) {
            json f;
            f["slope"] = stats->tail_fit->slope;
            f["r2"] = stats->tail_fit->r2;
            j["gap_tail_fit"] = f;
        } else {
            j["gap_tail_fit"] = nullptr;
        }
    }
    return j.dump(indent);
}

std::string probe_report_to_json(const TransienceReport& report, std::int64_t radius,
                                 std::int64_t burn_in, int indent) {
    json j;
    j["radius"] = radius;
    j["burn_in"] = burn_in;
    j["fraction_never_returning"] = report.fraction;
    j["se"] = report.se;
    j["n_trajectories"] = report.escaped.size();
    return j.dump(indent);
}

std::string lyapunov_report_to_json(const LyapunovReport& report, int indent) {
    json j;
    j["feasible"] = report.feasible;
    if (report.feasible) {
        j["c"] = report.c;
        j["bound"] = report.bound;
    }
    j["interior_f_drift"] = report.interior_f_drift;
    json regions = json::array();
    for (const auto& r : report.regions) {
        json item;
        item["name"] = r.name;
        item["drift_along_v"] = r.drift_along_v;
        item["slope"] = r.slope;
        item["quad"] = r.quad;
        item["bounded"] = r.bounded;
        regions.push_back(item);
    }
    j["regions"] = regions;
    json witnesses = json::array();
    for (const auto& w : report.witnesses) witnesses.push_back(json::array({w.x1, w.x2}));
    j["witnesses"] = witnesses;
    return j.dump(indent);
}

std::string manifest_json(const std::string& subcommand, const RunConfig& config,
                          const std::vector<std::string>& outputs, int indent) {
    json j;
    j["subcommand"] = subcommand;
    j["config"] = run_config_to_json(config);
    j["config_hash"] = config_hash(config);
    j["master_seed"] = config.master_seed;
    j["outputs"] = outputs;
    return j.dump(indent);
}

}  // namespace llp
