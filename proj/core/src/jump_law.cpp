#include "llp/jump_law.hpp"

#include <cmath>
#include <string>

#include "llp/errors.hpp"

namespace llp {

JumpLaw::JumpLaw(std::vector<JumpEntry> entries) : entries_(std::move(entries)) {
    double total = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!(e.prob >= 0.0 && e.prob <= 1.0) || !std::isfinite(e.prob)) {
            throw config_error("jump law entry " + std::to_string(i) +
                               ": probability outside [0,1]");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (entries_[j].step == e.step) {
                throw config_error("jump law: duplicate step at entry " + std::to_string(i));
            }
        }
        total += e.prob;
    }
    if (std::fabs(total - 1.0) > kNormalizationTol) {
        throw config_error("jump law: probabilities sum to " + std::to_string(total) +
                           ", not 1 within 1e-12");
    }
}

Vec2R JumpLaw::drift() const {
    Vec2R d{0.0, 0.0};
    for (const auto& e : entries_) {
        d.x1 += e.step.dx1 * e.prob;
        d.x2 += e.step.dx2 * e.prob;
    }
    return d;
}

JumpStep JumpLaw::sample(double u) const {
    double cum = 0.0;
    for (const auto& e : entries_) {
        cum += e.prob;
        if (u < cum) return e.step;
    }
    // u landed past the accumulated total (rounding at the very top of the
    // CDF): the last entry owns the remainder.
    return entries_.back().step;
}

double JumpLaw::prob_of(JumpStep s) const {
    for (const auto& e : entries_) {
        if (e.step == s) return e.prob;
    }
    return 0.0;
}

}  // namespace llp
