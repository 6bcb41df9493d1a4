#pragma once

#include <chrono>
#include <compare>
#include <cstdint>

namespace cgprof {

/// Durations are integer nanoseconds everywhere; seconds only appear when rendering.
using Nanos = std::int64_t;

inline constexpr Nanos kNanosPerSecond = 1'000'000'000;

/// A point on a TimeSource's axis, in nanoseconds since the source origin.
struct Timestamp {
    Nanos ns = 0;

    friend constexpr auto operator<=>(Timestamp, Timestamp) = default;
    friend constexpr Nanos operator-(Timestamp a, Timestamp b) { return a.ns - b.ns; }
    friend constexpr Timestamp operator+(Timestamp t, Nanos d) { return Timestamp{t.ns + d}; }
};

enum class ClockMode { Real, Virtual };

/// The single timestamp source of a profiling session.
///
/// Real mode reads std::chrono::steady_clock relative to the moment the source
/// was constructed. Virtual mode only moves when advance() is called, which
/// makes every run on it reproducible to the nanosecond.
class TimeSource {
public:
    static TimeSource real() { return TimeSource(ClockMode::Real); }
    static TimeSource virtual_clock() { return TimeSource(ClockMode::Virtual); }

    ClockMode mode() const noexcept { return mode_; }
    bool is_virtual() const noexcept { return mode_ == ClockMode::Virtual; }

    Timestamp now() const noexcept {
        if (mode_ == ClockMode::Virtual) {
            return current_;
        }
        auto elapsed = std::chrono::steady_clock::now() - origin_;
        return Timestamp{std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count()};
    }

    /// Moves a virtual clock forward by dt. Throws ClockError for real sources or dt < 0.
    Timestamp advance(Nanos dt);

    /// Consumes dt of time: advances a virtual clock, busy-spins a real one.
    void spend(Nanos dt);

private:
    explicit TimeSource(ClockMode mode)
        : mode_(mode), origin_(std::chrono::steady_clock::now()) {}

    ClockMode mode_;
    std::chrono::steady_clock::time_point origin_;
    Timestamp current_{};
};

}  // namespace cgprof
