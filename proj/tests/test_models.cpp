#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "llp/errors.hpp"
#include "llp/models.hpp"
#include "llp/rng.hpp"

using namespace llp;

namespace {

// The standard load-balancing parameter set used across the experiments.
LoadBalancingParams lb_standard() { return {1.5, 0.1, 0.35, 10.8, 0.45, 0.8}; }

double prob(const JumpLaw& law, JumpStep s) { return law.prob_of(s); }

}  // namespace

TEST_CASE("load balancing interior law matches the closed form") {
    const auto model = ModelSpec::load_balancing(lb_standard());
    const auto law = jump_law(model, {3, 2}, Action::Red);
    const double denom = 1.5 + 0.1 + 0.35;
    CHECK(prob(law, kStepE1Plus) == doctest::Approx(1.5 * 0.45 / denom).epsilon(1e-12));
    CHECK(prob(law, kStepE2Plus) == doctest::Approx(1.5 * 0.55 / denom).epsilon(1e-12));
    CHECK(prob(law, kStepE1Minus) == doctest::Approx(0.1 / denom).epsilon(1e-12));
    CHECK(prob(law, kStepE2Minus) == doctest::Approx(0.35 / denom).epsilon(1e-12));
    CHECK(prob(law, kStepE1Plus) == doctest::Approx(0.346154).epsilon(1e-5));
}

TEST_CASE("load balancing origin law is the arrival split") {
    const auto model = ModelSpec::load_balancing(lb_standard());
    const auto law = jump_law(model, {0, 0}, Action::Green);
    CHECK(law.entries().size() == 2);
    CHECK(prob(law, kStepE1Plus) == doctest::Approx(0.8));
    CHECK(prob(law, kStepE2Plus) == doctest::Approx(0.2));
}

TEST_CASE("server allocation edge law serves the busy queue") {
    const auto model = ModelSpec::server_allocation({1.0, 1.2, 7.0});
    for (Action a : {Action::Red, Action::Green}) {
        const auto law = jump_law(model, {5, 0}, a);
        CHECK(prob(law, kStepE1Plus) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
        CHECK(prob(law, kStepE2Plus) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
        CHECK(prob(law, kStepE1Minus) == doctest::Approx(7.0 / 9.0).epsilon(1e-12));
        CHECK(prob(law, kStepE2Minus) == 0.0);
    }
}

TEST_CASE("drift closed forms") {
    const auto lb = ModelSpec::load_balancing(lb_standard());
    const Vec2R d_r = jump_law(lb, {1, 1}, Action::Red).drift();
    CHECK(d_r.x1 == doctest::Approx(0.575 / 1.95).epsilon(1e-12));
    CHECK(d_r.x2 == doctest::Approx(0.475 / 1.95).epsilon(1e-12));

    const JumpLaw uniform({{kStepE1Plus, 0.25},
                           {kStepE2Plus, 0.25},
                           {kStepE1Minus, 0.25},
                           {kStepE2Minus, 0.25}});
    CHECK(uniform.drift().x1 == doctest::Approx(0.0));
    CHECK(uniform.drift().x2 == doctest::Approx(0.0));

    const auto sa = ModelSpec::server_allocation({1.0, 1.2, 7.0});
    const Vec2R d_g = jump_law(sa, {2, 3}, Action::Green).drift();
    CHECK(d_g.x1 == doctest::Approx(0.3125).epsilon(1e-12));
    CHECK(d_g.x2 == doctest::Approx(-0.0625).epsilon(1e-12));
}

TEST_CASE("inverse-CDF sampling walks entries in canonical order") {
    const JumpLaw half({{kStepE1Plus, 0.5}, {kStepE1Minus, 0.5}});
    CHECK(half.sample(0.25) == kStepE1Plus);
    CHECK(half.sample(0.75) == kStepE1Minus);

    const auto lb = ModelSpec::load_balancing(lb_standard());
    const auto red = jump_law(lb, {3, 2}, Action::Red);
    CHECK(red.sample(0.40) == kStepE2Plus);  // CDF boundary at 0.346154
    CHECK(red.sample(0.0) == kStepE1Plus);
    CHECK(red.sample(1.0 - 1e-16) == kStepE2Minus);
}

TEST_CASE("free law is the interior law everywhere") {
    const auto lb = ModelSpec::load_balancing(lb_standard());
    const auto green = free_jump_law(lb, Action::Green);
    CHECK(prob(green, kStepE1Plus) == doctest::Approx(1.2 / 1.95).epsilon(1e-12));
    CHECK(prob(green, kStepE2Plus) == doctest::Approx(0.3 / 1.95).epsilon(1e-12));
    CHECK(prob(green, kStepE1Minus) == doctest::Approx(0.1 / 1.95).epsilon(1e-12));
    CHECK(prob(green, kStepE2Minus) == doctest::Approx(0.35 / 1.95).epsilon(1e-12));

    const auto sa = ModelSpec::server_allocation({1.0, 1.2, 7.0});
    const auto red = free_jump_law(sa, Action::Red);
    CHECK(prob(red, kStepE1Plus) == doctest::Approx(0.3125).epsilon(1e-12));
    CHECK(prob(red, kStepE2Plus) == doctest::Approx(0.3125).epsilon(1e-12));
    CHECK(prob(red, kStepE1Minus) == doctest::Approx(0.375).epsilon(1e-12));

    // Custom model with identical interior laws for both actions.
    CustomLaws laws;
    const JumpLaw interior({{kStepE1Plus, 0.4}, {kStepE2Plus, 0.3}, {kStepE1Minus, 0.3}});
    laws.interior_red = laws.interior_green = interior;
    laws.xedge_red = laws.xedge_green =
        JumpLaw({{kStepE1Plus, 0.5}, {kStepE2Plus, 0.2}, {kStepE1Minus, 0.3}});
    laws.yedge_red = laws.yedge_green =
        JumpLaw({{kStepE1Plus, 0.5}, {kStepE2Plus, 0.2}, {kStepE2Minus, 0.3}});
    laws.origin_red = laws.origin_green = JumpLaw({{kStepE1Plus, 0.5}, {kStepE2Plus, 0.5}});
    const auto custom = ModelSpec::custom(laws);
    const auto fr = free_jump_law(custom, Action::Red);
    const auto fg = free_jump_law(custom, Action::Green);
    REQUIRE(fr.entries().size() == fg.entries().size());
    for (std::size_t i = 0; i < fr.entries().size(); ++i) {
        CHECK(fr.entries()[i].step == fg.entries()[i].step);
        CHECK(fr.entries()[i].prob == fg.entries()[i].prob);
    }
}

TEST_CASE("parameter and domain errors") {
    CHECK_THROWS_AS(ModelSpec::load_balancing({-1.0, 0.1, 0.35, 10.8, 0.45, 0.8}), config_error);
    CHECK_THROWS_AS(ModelSpec::load_balancing({1.5, 0.1, 0.35, 10.8, 1.5, 0.8}), config_error);
    CHECK_THROWS_AS(ModelSpec::server_allocation({1.0, 0.0, 7.0}), config_error);
    const auto lb = ModelSpec::load_balancing(lb_standard());
    CHECK_THROWS_AS(jump_law(lb, {-1, 2}, Action::Red), domain_error);
}

TEST_CASE("laws normalize, stay nonnegative and respect their region") {
    Xoshiro256pp rng(12345);
    auto u = [&] { return rng.u01(); };
    for (int trial = 0; trial < 400; ++trial) {
        ModelSpec model = (trial % 2 == 0)
                              ? ModelSpec::load_balancing({0.1 + 5.0 * u(), 0.05 + 3.0 * u(),
                                                           0.05 + 3.0 * u(), 0.05 + 8.0 * u(),
                                                           u(), u()})
                              : ModelSpec::server_allocation(
                                    {0.1 + 5.0 * u(), 0.05 + 3.0 * u(), 0.05 + 8.0 * u()});
        const QueueState states[4] = {{3, 4}, {2, 0}, {0, 7}, {0, 0}};
        for (const auto& x : states) {
            for (Action a : {Action::Red, Action::Green}) {
                const auto law = jump_law(model, x, a);
                double total = 0.0;
                for (const auto& e : law.entries()) {
                    CHECK(e.prob >= 0.0);
                    total += e.prob;
                    const QueueState y = x + e.step;
                    CHECK(in_nonneg_quadrant(y));  // boundary compliance
                }
                CHECK(std::fabs(total - 1.0) <= 1e-12);
            }
        }
    }
}

TEST_CASE("interior coordinate-sum drift is action independent") {
    Xoshiro256pp rng(999);
    auto u = [&] { return rng.u01(); };
    for (int trial = 0; trial < 200; ++trial) {
        const LoadBalancingParams p{0.1 + 5.0 * u(), 0.05 + 3.0 * u(), 0.05 + 3.0 * u(),
                                    0.05 + 8.0 * u(), u(), u()};
        const auto model = ModelSpec::load_balancing(p);
        const double expected = (p.lambda - p.mu1 - p.mu2) / (p.lambda + p.mu1 + p.mu2);
        for (Action a : {Action::Red, Action::Green}) {
            const Vec2R d = free_jump_law(model, a).drift();
            CHECK(dot(d, {1.0, 1.0}) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    const auto std_model = ModelSpec::load_balancing(lb_standard());
    CHECK(dot(free_jump_law(std_model, Action::Red).drift(), {1.0, 1.0}) ==
          doctest::Approx(0.538462).epsilon(1e-5));

    const ServerAllocationParams sp{1.3, 1.7, 9.0};
    const auto sa = ModelSpec::server_allocation(sp);
    const double expected = (2.0 * sp.lambda - sp.mu) / (2.0 * sp.lambda + sp.mu);
    for (Action a : {Action::Red, Action::Green}) {
        CHECK(dot(free_jump_law(sa, a).drift(), {1.0, 1.0}) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("a million samples reproduce the law within 4 binomial errors") {
    const auto model = ModelSpec::load_balancing(lb_standard());
    const auto law = jump_law(model, {5, 5}, Action::Red);
    constexpr int kDraws = 1'000'000;
    Xoshiro256pp rng(777);
    std::vector<int> counts(law.entries().size(), 0);
    for (int i = 0; i < kDraws; ++i) {
        const JumpStep s = law.sample(rng.u01());
        for (std::size_t k = 0; k < law.entries().size(); ++k) {
            if (law.entries()[k].step == s) {
                ++counts[k];
                break;
            }
        }
    }
    for (std::size_t k = 0; k < law.entries().size(); ++k) {
        const double p = law.entries()[k].prob;
        const double se = std::sqrt(p * (1.0 - p) / kDraws);
        CHECK(std::fabs(double(counts[k]) / kDraws - p) <= 4.0 * se);
    }
}
