#pragma once

#include <vector>

#include "llp/vec.hpp"

namespace llp {

struct JumpEntry {
    JumpStep step;
    double prob = 0.0;
};

/// A finite probability distribution over lattice steps.
///
/// Entries keep their construction order; model-built laws always use the
/// canonical order (+e1, +e2, -e1, -e2) with zero-probability steps dropped,
/// so inverse-CDF sampling is reproducible.
class JumpLaw {
  public:
    JumpLaw() = default;

    /// Validates: probabilities in [0,1] summing to 1 within 1e-12, steps
    /// distinct. Throws config_error otherwise.
    explicit JumpLaw(std::vector<JumpEntry> entries);

    const std::vector<JumpEntry>& entries() const { return entries_; }

    /// Mean jump vector.
    Vec2R drift() const;

    /// Inverse-CDF sample over entries in stored order; deterministic in u.
    JumpStep sample(double u) const;

    /// Probability of one step (0 if absent).
    double prob_of(JumpStep s) const;

    static constexpr double kNormalizationTol = 1e-12;

  private:
    std::vector<JumpEntry> entries_;
};

inline Vec2R drift(const JumpLaw& law) { return law.drift(); }
inline JumpStep sample_step(const JumpLaw& law, double u) { return law.sample(u); }

}  // namespace llp
