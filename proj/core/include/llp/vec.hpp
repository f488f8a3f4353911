#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace llp {

/// A point of the real plane; used for drifts, directions and estimates.
struct Vec2R {
    double x1 = 0.0;
    double x2 = 0.0;

    friend Vec2R operator+(Vec2R a, Vec2R b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
    friend Vec2R operator-(Vec2R a, Vec2R b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
    friend Vec2R operator*(double s, Vec2R a) { return {s * a.x1, s * a.x2}; }
    friend bool operator==(Vec2R a, Vec2R b) { return a.x1 == b.x1 && a.x2 == b.x2; }
};

inline double dot(Vec2R a, Vec2R b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(Vec2R a) { return std::sqrt(a.x1 * a.x1 + a.x2 * a.x2); }
inline bool is_finite(Vec2R a) { return std::isfinite(a.x1) && std::isfinite(a.x2); }

/// One lattice step of the walk. Model-1 laws only ever use the four unit steps.
struct JumpStep {
    int dx1 = 0;
    int dx2 = 0;

    friend bool operator==(JumpStep a, JumpStep b) { return a.dx1 == b.dx1 && a.dx2 == b.dx2; }
};

inline double norm(JumpStep s) {
    return std::sqrt(double(s.dx1) * s.dx1 + double(s.dx2) * s.dx2);
}

constexpr JumpStep kStepE1Plus{1, 0};
constexpr JumpStep kStepE2Plus{0, 1};
constexpr JumpStep kStepE1Minus{-1, 0};
constexpr JumpStep kStepE2Minus{0, -1};

/// Two queue lengths. Nonnegative in bounded worlds; free-process worlds
/// lift the constraint and use the whole integer grid.
struct QueueState {
    std::int64_t x1 = 0;
    std::int64_t x2 = 0;

    friend QueueState operator+(QueueState x, JumpStep s) { return {x.x1 + s.dx1, x.x2 + s.dx2}; }
    friend bool operator==(QueueState a, QueueState b) { return a.x1 == b.x1 && a.x2 == b.x2; }
    friend bool operator!=(QueueState a, QueueState b) { return !(a == b); }
};

inline bool in_nonneg_quadrant(QueueState x) { return x.x1 >= 0 && x.x2 >= 0; }

/// Coordinate sum x1+x2; the |x| used for queue totals and growth series.
inline std::int64_t coord_sum(QueueState x) { return x.x1 + x.x2; }

inline Vec2R to_vec(QueueState x) { return {double(x.x1), double(x.x2)}; }

enum class Action : std::uint8_t { Red = 0, Green = 1 };

inline const char* to_cstr(Action a) { return a == Action::Red ? "r" : "g"; }

struct QueueStateHash {
    std::size_t operator()(const QueueState& x) const noexcept {
        // fmix64 of the two packed halves; states cluster near the axes so
        // cheap shifts alone would collide badly.
        std::uint64_t h = std::uint64_t(x.x1) * 0x9E3779B97F4A7C15ull;
        h ^= std::uint64_t(x.x2) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        h ^= h >> 33;
        h *= 0xFF51AFD7ED558CCDull;
        h ^= h >> 33;
        return std::size_t(h);
    }
};

}  // namespace llp
