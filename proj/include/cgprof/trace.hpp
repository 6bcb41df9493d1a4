#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cgprof/events.hpp"
#include "cgprof/profile.hpp"
#include "cgprof/profiler_base.hpp"
#include "cgprof/report.hpp"

namespace cgprof {

// Trace files are CSV, one event per line, no header, LF endings:
//
//   <timestamp_ns>,<call|return>,<name>,<script|builtin|toplevel>
//
// Timestamps are relative to the session start. A final "return" of #toplevel,
// when present, marks the session stop time.

/// Throws Error if the stream goes bad.
void write_trace(std::span<const ProfileEvent> events, std::ostream& sink);

/// Strict parser. Throws TraceError with the offending line number.
std::vector<ProfileEvent> read_trace(std::istream& source);

enum class EngineMode { Flat, Graph };

/// Feeds a trace through the chosen engine on a virtual clock slaved to the
/// trace timestamps. Nesting violations raise MalformedEventStream.
ProfileDocument replay(std::span<const ProfileEvent> events, EngineMode mode,
                       const ProfilerOptions& options = {});

/// Handler that captures every event of a session for write_trace.
class TraceRecorder {
public:
    TraceRecorder() = default;
    ~TraceRecorder();

    TraceRecorder(const TraceRecorder&) = delete;
    TraceRecorder& operator=(const TraceRecorder&) = delete;

    /// Throws SessionStateError if the registry already has a profiler.
    void start(HookRegistry& registry);

    /// Returns the session's events rebased to its start, plus the stop marker if needed.
    std::vector<ProfileEvent> stop();

private:
    HookRegistry* registry_ = nullptr;
    Timestamp origin_{};
    std::vector<ProfileEvent> events_;
};

}  // namespace cgprof
