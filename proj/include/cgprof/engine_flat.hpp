#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cgprof/profile.hpp"
#include "cgprof/profiler_base.hpp"

namespace cgprof {

/// One live activation on the profiler's time-stack.
struct TimeFrame {
    FunctionId fn;
    Timestamp entry_time{};
    /// Inclusive time of direct callees that have already returned.
    Nanos child_time = 0;
    /// False when another activation of the same function sits below this one.
    bool is_outermost = true;
};

struct CompletedFrame {
    FunctionId fn;
    Nanos total = 0;
    Nanos self = 0;
    bool is_outermost = true;
};

/// Time-stack plus per-function record table; the core both engines share.
///
/// The bottom frame is always #toplevel, opened by begin() and closed by close().
class FlatAccumulator {
public:
    void begin(Timestamp start);
    void call(const FunctionId& fn, Timestamp t);
    /// Pops the top frame, which must belong to `name`, and folds it into its record.
    CompletedFrame ret(std::string_view name, Timestamp t, bool truncated = false);
    /// Closes #toplevel. Every user frame must already be popped.
    void close(Timestamp stop);

    FlatProfile freeze(const SessionInfo& session) const;

    std::size_t depth() const noexcept { return frames_.size(); }
    const TimeFrame& top() const { return frames_.back(); }
    std::span<const TimeFrame> frames() const noexcept { return frames_; }

private:
    CompletedFrame pop(Timestamp t);
    void fold(const CompletedFrame& done, bool truncated);
    void advance_to(Timestamp t);

    std::vector<TimeFrame> frames_;
    std::unordered_map<std::string, int> active_;
    std::unordered_map<std::string, std::uint64_t> first_call_;
    std::uint64_t next_sequence_ = 0;
    Timestamp last_time_{};
    FlatProfile profile_;
};

/// Flat profiler: statistics keyed by function only.
class FlatProfiler : public ProfilerBase {
public:
    using ProfilerBase::ProfilerBase;
    ~FlatProfiler() override;

    /// Force-unwinds open frames (marking them truncated) and returns the frozen profile.
    FlatProfile stop();

    std::span<const TimeFrame> stack() const noexcept { return acc_.frames(); }

protected:
    void begin_session(Timestamp start) override;
    void process_call(const FunctionId& fn, Timestamp t) override;
    void process_return(const FunctionId& fn, Timestamp t) override;
    void end_session(Timestamp stop) override;

private:
    FlatAccumulator acc_;
};

/// 100 * self / program_total. Throws UndefinedPercentage when program_total <= 0.
double percent_time(Nanos self, Nanos program_total);

}  // namespace cgprof
