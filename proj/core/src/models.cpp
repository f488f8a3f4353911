#include "llp/models.hpp"

#include <cmath>
#include <string>

#include "llp/errors.hpp"

namespace llp {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw config_error(msg);
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }
bool is_rate(double r) { return std::isfinite(r) && r > 0.0; }

// Builds a law from canonical-order probabilities, dropping exact zeros.
JumpLaw make_law(double p_e1, double p_e2, double p_me1, double p_me2) {
    std::vector<JumpEntry> entries;
    if (p_e1 != 0.0) entries.push_back({kStepE1Plus, p_e1});
    if (p_e2 != 0.0) entries.push_back({kStepE2Plus, p_e2});
    if (p_me1 != 0.0) entries.push_back({kStepE1Minus, p_me1});
    if (p_me2 != 0.0) entries.push_back({kStepE2Minus, p_me2});
    return JumpLaw(std::move(entries));
}

// Steps that would exit the quadrant from a given region.
void check_region_support(const JumpLaw& law, Region r, const char* name) {
    for (const auto& e : law.entries()) {
        const auto s = e.step;
        const bool unit = (s == kStepE1Plus || s == kStepE2Plus || s == kStepE1Minus ||
                           s == kStepE2Minus);
        if (!unit) throw config_error(std::string(name) + ": step outside {+-e1, +-e2}");
        if (e.prob == 0.0) continue;
        const bool exits = (r == Region::XEdge && s == kStepE2Minus) ||
                           (r == Region::YEdge && s == kStepE1Minus) ||
                           (r == Region::Origin && (s == kStepE1Minus || s == kStepE2Minus));
        if (exits) {
            throw config_error(std::string(name) + ": positive probability on a step that "
                               "exits the nonnegative quadrant from its region");
        }
    }
}

}  // namespace

Region region_of(QueueState x) {
    if (x.x1 > 0 && x.x2 > 0) return Region::Interior;
    if (x.x1 > 0) return Region::XEdge;
    if (x.x2 > 0) return Region::YEdge;
    return Region::Origin;
}

void LoadBalancingParams::validate() const {
    require(is_rate(lambda), "load_balancing.lambda: must be a positive rate");
    require(is_rate(mu1), "load_balancing.mu1: must be a positive rate");
    require(is_rate(mu2), "load_balancing.mu2: must be a positive rate");
    require(is_rate(mu_tilde), "load_balancing.mu_tilde: must be a positive rate");
    require(is_probability(p_r), "load_balancing.p_r: must be within [0,1]");
    require(is_probability(p_g), "load_balancing.p_g: must be within [0,1]");
}

void ServerAllocationParams::validate() const {
    require(is_rate(lambda), "server_allocation.lambda: must be a positive rate");
    require(is_rate(mu), "server_allocation.mu: must be a positive rate");
    require(is_rate(mu_tilde), "server_allocation.mu_tilde: must be a positive rate");
}

void CustomLaws::validate() const {
    check_region_support(interior_red, Region::Interior, "custom.interior_red");
    check_region_support(interior_green, Region::Interior, "custom.interior_green");
    check_region_support(xedge_red, Region::XEdge, "custom.xedge_red");
    check_region_support(xedge_green, Region::XEdge, "custom.xedge_green");
    check_region_support(yedge_red, Region::YEdge, "custom.yedge_red");
    check_region_support(yedge_green, Region::YEdge, "custom.yedge_green");
    check_region_support(origin_red, Region::Origin, "custom.origin_red");
    check_region_support(origin_green, Region::Origin, "custom.origin_green");
}

ModelSpec ModelSpec::load_balancing(LoadBalancingParams p) {
    p.validate();
    ModelSpec m;
    m.v_ = p;
    return m;
}

ModelSpec ModelSpec::server_allocation(ServerAllocationParams p) {
    p.validate();
    ModelSpec m;
    m.v_ = p;
    return m;
}

ModelSpec ModelSpec::custom(CustomLaws laws) {
    laws.validate();
    ModelSpec m;
    m.v_ = std::move(laws);
    return m;
}

JumpLaw ModelSpec::law_for(Region r, Action a) const {
    if (const auto* lb = std::get_if<LoadBalancingParams>(&v_)) {
        const double p_a = (a == Action::Red) ? lb->p_r : lb->p_g;
        switch (r) {
            case Region::Interior: {
                const double denom = lb->lambda + lb->mu1 + lb->mu2;
                return make_law(lb->lambda * p_a / denom, lb->lambda * (1.0 - p_a) / denom,
                                lb->mu1 / denom, lb->mu2 / denom);
            }
            case Region::XEdge: {
                const double denom = lb->lambda + lb->mu_tilde;
                return make_law(lb->lambda * p_a / denom, lb->lambda * (1.0 - p_a) / denom,
                                lb->mu_tilde / denom, 0.0);
            }
            case Region::YEdge: {
                const double denom = lb->lambda + lb->mu_tilde;
                return make_law(lb->lambda * p_a / denom, lb->lambda * (1.0 - p_a) / denom,
                                0.0, lb->mu_tilde / denom);
            }
            case Region::Origin:
                return make_law(p_a, 1.0 - p_a, 0.0, 0.0);
        }
    }
    if (const auto* sa = std::get_if<ServerAllocationParams>(&v_)) {
        switch (r) {
            case Region::Interior: {
                // Both streams arrive at rate lambda; the chosen queue is
                // served at rate mu.
                const double denom = 2.0 * sa->lambda + sa->mu;
                const double serve = sa->mu / denom;
                return make_law(sa->lambda / denom, sa->lambda / denom,
                                a == Action::Red ? serve : 0.0,
                                a == Action::Green ? serve : 0.0);
            }
            case Region::XEdge: {
                const double denom = 2.0 * sa->lambda + sa->mu_tilde;
                return make_law(sa->lambda / denom, sa->lambda / denom,
                                sa->mu_tilde / denom, 0.0);
            }
            case Region::YEdge: {
                const double denom = 2.0 * sa->lambda + sa->mu_tilde;
                return make_law(sa->lambda / denom, sa->lambda / denom,
                                0.0, sa->mu_tilde / denom);
            }
            case Region::Origin:
                // Two independent equal-rate arrival streams; the next
                // transition is an arrival to either queue with equal odds.
                return make_law(0.5, 0.5, 0.0, 0.0);
        }
    }
    const auto& c = std::get<CustomLaws>(v_);
    switch (r) {
        case Region::Interior: return a == Action::Red ? c.interior_red : c.interior_green;
        case Region::XEdge: return a == Action::Red ? c.xedge_red : c.xedge_green;
        case Region::YEdge: return a == Action::Red ? c.yedge_red : c.yedge_green;
        case Region::Origin: return a == Action::Red ? c.origin_red : c.origin_green;
    }
    throw domain_error("unreachable region");
}

JumpLaw jump_law(const ModelSpec& model, QueueState state, Action action) {
    if (!in_nonneg_quadrant(state)) {
        throw domain_error("jump_law: state outside the nonnegative quadrant");
    }
    return model.law_for(region_of(state), action);
}

JumpLaw free_jump_law(const ModelSpec& model, Action action) {
    return model.law_for(Region::Interior, action);
}

ModelDrifts model_drifts(const ModelSpec& model) {
    return ModelDrifts{
        model.law_for(Region::Interior, Action::Red).drift(),
        model.law_for(Region::Interior, Action::Green).drift(),
        model.law_for(Region::XEdge, Action::Red).drift(),
        model.law_for(Region::XEdge, Action::Green).drift(),
        model.law_for(Region::YEdge, Action::Red).drift(),
        model.law_for(Region::YEdge, Action::Green).drift(),
    };
}

}  // namespace llp
