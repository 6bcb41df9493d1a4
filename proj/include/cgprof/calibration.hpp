#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgprof/compensation.hpp"
#include "cgprof/trace.hpp"
#include "cgprof/workload.hpp"

namespace cgprof {

struct OverheadSample {
    std::uint64_t ncalls = 0;
    /// Instrumented compensated program time minus the uninstrumented run:
    /// the per-call dispatch bias the handler cannot see.
    double overhead_seconds = 0;
    /// Handler time removed by compensation.
    double handler_seconds = 0;
    /// What an uncompensated profiler would report as overhead.
    double gross_seconds() const noexcept { return overhead_seconds + handler_seconds; }
};

struct MeasureOptions {
    ClockMode clock = ClockMode::Real;
    Nanos injected_handler_cost = 0;
    /// Real clock only: each side is run this many times and the minimum kept.
    int repeats = 3;
};

/// Paired uninstrumented/instrumented runs of a deterministic workload.
OverheadSample measure_overhead(const workload::Script& script, EngineMode mode,
                                const MeasureOptions& options = {});

struct CalibrationOptions {
    std::vector<std::uint64_t> call_counts{100, 1'000, 10'000, 100'000};
    Nanos work_per_call = 0;
    MeasureOptions measure;
};

struct CalibrationResult {
    EngineMode mode = EngineMode::Flat;
    std::vector<OverheadSample> samples;
    BiasModel bias;    // fit of overhead_seconds
    BiasModel gross;   // fit of gross_seconds
};

/// Runs the built-in tight loop at each call count and fits both overhead lines.
CalibrationResult run_calibration(EngineMode mode, const CalibrationOptions& options = {});

std::string render_calibration(const CalibrationResult& result);

}  // namespace cgprof
