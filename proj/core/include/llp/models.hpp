#pragma once

#include <variant>

#include "llp/jump_law.hpp"
#include "llp/vec.hpp"

namespace llp {

/// Partition of the nonnegative quadrant by which queues are busy.
enum class Region : std::uint8_t { Interior, XEdge, YEdge, Origin };

Region region_of(QueueState x);

/// Two-queue dispatcher: arrivals at rate lambda routed to queue 1 with
/// probability p_a (p_r or p_g by action); per-queue service rates mu1, mu2
/// while both queues are busy, mu_tilde for the lone busy queue.
struct LoadBalancingParams {
    double lambda = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double mu_tilde = 0.0;
    double p_r = 0.0;
    double p_g = 0.0;

    void validate() const;  // throws config_error naming the bad field
};

/// Single server over two arrival streams of equal rate lambda; the action
/// picks which busy queue is served (rate mu); a lone busy queue is served
/// at rate mu_tilde regardless of the action.
struct ServerAllocationParams {
    double lambda = 0.0;
    double mu = 0.0;
    double mu_tilde = 0.0;

    void validate() const;
};

/// User-supplied per-region laws. Interior laws double as the free-process
/// laws. Edge laws must not step off the quadrant from their region.
struct CustomLaws {
    JumpLaw interior_red, interior_green;
    JumpLaw xedge_red, xedge_green;
    JumpLaw yedge_red, yedge_green;
    JumpLaw origin_red, origin_green;

    void validate() const;
};

class ModelSpec {
  public:
    static ModelSpec load_balancing(LoadBalancingParams p);
    static ModelSpec server_allocation(ServerAllocationParams p);
    static ModelSpec custom(CustomLaws laws);

    bool is_load_balancing() const { return std::holds_alternative<LoadBalancingParams>(v_); }
    bool is_server_allocation() const { return std::holds_alternative<ServerAllocationParams>(v_); }
    bool is_custom() const { return std::holds_alternative<CustomLaws>(v_); }

    const LoadBalancingParams& as_load_balancing() const {
        return std::get<LoadBalancingParams>(v_);
    }
    const ServerAllocationParams& as_server_allocation() const {
        return std::get<ServerAllocationParams>(v_);
    }
    const CustomLaws& as_custom() const { return std::get<CustomLaws>(v_); }

    /// Law serving (region, action) regardless of the concrete state.
    JumpLaw law_for(Region r, Action a) const;

  private:
    std::variant<LoadBalancingParams, ServerAllocationParams, CustomLaws> v_;
};

/// Exact embedded-chain law at a state. Throws domain_error for states
/// outside the nonnegative quadrant.
JumpLaw jump_law(const ModelSpec& model, QueueState state, Action action);

/// Interior law regardless of state; what free-process worlds use on the
/// whole grid.
JumpLaw free_jump_law(const ModelSpec& model, Action action);

/// The six drifts the stability conditions consume.
struct ModelDrifts {
    Vec2R d_r, d_g;           // interior
    Vec2R d_r_edge1, d_g_edge1;  // x2 = 0 edge
    Vec2R d_r_edge2, d_g_edge2;  // x1 = 0 edge
};

ModelDrifts model_drifts(const ModelSpec& model);

}  // namespace llp
