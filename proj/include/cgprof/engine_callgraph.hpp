#pragma once

#include <map>
#include <vector>

#include "cgprof/engine_flat.hpp"

namespace cgprof {

/// Call-graph profiler: the flat time-stack plus statistics per caller -> callee arc.
///
/// The arc of an activation is fixed when it is entered: its caller is the
/// function on top of the stack at that moment (#toplevel for outermost calls).
/// Recursive use of one arc counts every activation but adds inclusive time
/// only from the outermost activation on that arc.
class CallGraphProfiler : public ProfilerBase {
public:
    using ProfilerBase::ProfilerBase;
    ~CallGraphProfiler() override;

    CallGraphProfile stop();

    std::span<const TimeFrame> stack() const noexcept { return acc_.frames(); }

protected:
    void begin_session(Timestamp start) override;
    void process_call(const FunctionId& fn, Timestamp t) override;
    void process_return(const FunctionId& fn, Timestamp t) override;
    void end_session(Timestamp stop) override;

private:
    struct ArcFrame {
        ArcKey key;
        bool is_outermost = true;
    };

    void fold_arc(const CompletedFrame& done);

    FlatAccumulator acc_;
    std::vector<ArcFrame> arc_stack_;
    std::map<ArcKey, int> active_arcs_;
    std::map<ArcKey, ArcRecord> arcs_;
    std::map<ArcKey, std::uint64_t> arc_first_call_;
    std::uint64_t next_arc_sequence_ = 1;
};

}  // namespace cgprof
