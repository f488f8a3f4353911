#pragma once

#include <optional>
#include <string>
#include <vector>

#include "llp/models.hpp"
#include "llp/vec.hpp"

namespace llp {

/// Unit direction seen positively by both interior drifts, and the smaller
/// of the two inner products.
struct DirectionResult {
    Vec2R l;
    double rho = 0.0;
};

/// The open range of mixtures delta*d_r + (1-delta)*d_g staying in the
/// nonnegative quadrant, intersected with (0,1].
struct QuadrantInterval {
    double alpha0 = 0.0;
    double alpha1 = 0.0;
};

/// First-visit red probabilities certified transient: (alpha0/rho,
/// (alpha1+rho-1)/rho), clipped to (0,1].
struct QWindow {
    double q0 = 0.0;
    double q1 = 0.0;
};

/// One inequality verdict. margin > 0 iff the strict inequality holds, and
/// measures its slack; lhs/rhs expose the compared quantities so callers can
/// read thresholds.
struct LabeledCheck {
    std::string label;
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

struct ConditionReport {
    std::optional<Vec2R> green_vector;
    std::optional<DirectionResult> direction;
    std::optional<QuadrantInterval> quadrant;
    bool cond_parameter2 = false;
    bool cond_parameter4 = false;
    bool cond_parameter5 = false;
    std::optional<QWindow> q_window;
    std::vector<LabeledCheck> checks;

    bool all_pass() const { return cond_parameter2 && cond_parameter4 && cond_parameter5; }
};

struct LemmaReport {
    std::vector<LabeledCheck> checks;
    bool all_pass = false;
};

enum class DirectionStrategy : std::uint8_t { FixedAxis1, FixedDiagonal, Maximize, Custom };

struct DirectionChoice {
    DirectionStrategy strategy = DirectionStrategy::FixedAxis1;
    Vec2R custom_l{1.0, 0.0};  // used only by Custom; normalized internally

    static DirectionChoice fixed_axis1() { return {DirectionStrategy::FixedAxis1, {1.0, 0.0}}; }
    static DirectionChoice fixed_diagonal() {
        return {DirectionStrategy::FixedDiagonal, {1.0, 0.0}};
    }
    static DirectionChoice maximize() { return {DirectionStrategy::Maximize, {1.0, 0.0}}; }
    static DirectionChoice custom(Vec2R l) { return {DirectionStrategy::Custom, l}; }
};

/// Stabilizing direction for the green laws: some v in the closed positive
/// quadrant (nonzero) with strictly negative inner product against all three
/// green drifts, or nothing when the feasible cone is empty.
std::optional<Vec2R> green_stability_vector(Vec2R d_g, Vec2R d_g_prime, Vec2R d_g_dprime);

/// A unit l with min(<d_r,l>, <d_g,l>) > 0. Fixed strategies evaluate their
/// l and fail when the minimum is nonpositive; Maximize searches the unit
/// circle (4096-point grid plus golden-section refinement to 1e-10).
std::optional<DirectionResult> common_direction(Vec2R d_r, Vec2R d_g, DirectionChoice choice);

std::optional<QuadrantInterval> quadrant_interval(Vec2R d_r, Vec2R d_g);

/// Throws domain_error when rho <= 0.
std::optional<QWindow> q_interval(QuadrantInterval quadrant, double rho);

/// (q*rho, 1 - (1-q)*rho): the envelope on the long-run red frequency of any
/// agent whose first-visit red probability is q.
std::pair<double, double> alpha_bounds(double q, double rho);

ConditionReport model1_check(const ModelSpec& model, DirectionChoice choice);

LemmaReport lemma_lb_check(const LoadBalancingParams& params);

/// The published inequality set for the server-allocation example, plus the
/// direct window-gap check reported side by side; the two can disagree and
/// the direct verdict is the authoritative one.
LemmaReport lemma_sa_check(const ServerAllocationParams& params);

/// FixedAxis1 for load balancing, FixedDiagonal for server allocation,
/// Maximize for custom models.
DirectionChoice default_direction(const ModelSpec& model);

}  // namespace llp
