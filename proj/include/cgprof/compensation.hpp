#pragma once

#include <span>
#include <vector>

#include "cgprof/timebase.hpp"

namespace cgprof {

/// Running total of profiler handler time observed during a session.
///
/// Every timestamp an engine consumes is first shifted back by the handler time
/// accrued so far, so measurable profiler cost never shows up in the profile.
class OverheadLedger {
public:
    Nanos cumulative() const noexcept { return cumulative_; }

    /// Throws AccountingError for dt < 0.
    void record_handler_cost(Nanos dt);

    /// raw - cumulative(). Throws AccountingError if that would be negative.
    Timestamp compensated_time(Timestamp raw) const;

    void reset() noexcept { cumulative_ = 0; }

private:
    Nanos cumulative_ = 0;
};

struct OverheadPoint {
    double ncalls = 0;
    double overhead_seconds = 0;
};

/// Least-squares line of overhead against number of calls.
struct BiasModel {
    double slope = 0;       // seconds per call
    double intercept = 0;   // seconds
    double r_squared = 0;
    std::vector<OverheadPoint> sample_points;
};

/// Ordinary least squares fit. Throws DegenerateFit with fewer than two distinct ncalls.
BiasModel calibrate(std::span<const OverheadPoint> points);

}  // namespace cgprof
