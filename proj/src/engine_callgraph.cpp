#include "cgprof/engine_callgraph.hpp"

#include <utility>

namespace cgprof {

CallGraphProfiler::~CallGraphProfiler() = default;

CallGraphProfile CallGraphProfiler::stop() {
    const SessionInfo session = stop_session();
    return CallGraphProfile{arcs_, acc_.freeze(session)};
}

void CallGraphProfiler::begin_session(Timestamp start) {
    acc_.begin(start);
    arc_stack_.clear();
    active_arcs_.clear();
    arcs_.clear();
    arc_first_call_.clear();
    next_arc_sequence_ = 1;
}

void CallGraphProfiler::process_call(const FunctionId& fn, Timestamp t) {
    ArcKey key{acc_.top().fn.name, fn.name};
    acc_.call(fn, t);
    int& live = active_arcs_[key];
    if (arc_first_call_.try_emplace(key, next_arc_sequence_).second) {
        ++next_arc_sequence_;
    }
    arc_stack_.push_back(ArcFrame{std::move(key), live == 0});
    ++live;
}

void CallGraphProfiler::process_return(const FunctionId& fn, Timestamp t) {
    fold_arc(acc_.ret(fn.name, t));
}

void CallGraphProfiler::end_session(Timestamp stop) {
    while (acc_.depth() > 1) {
        const std::string name = acc_.top().fn.name;
        fold_arc(acc_.ret(name, stop, true));
    }
    acc_.close(stop);
}

void CallGraphProfiler::fold_arc(const CompletedFrame& done) {
    ArcFrame frame = std::move(arc_stack_.back());
    arc_stack_.pop_back();
    if (auto it = active_arcs_.find(frame.key); it != active_arcs_.end() && --it->second == 0) {
        active_arcs_.erase(it);
    }

    auto [it, inserted] = arcs_.try_emplace(frame.key);
    ArcRecord& arc = it->second;
    if (inserted) {
        arc.caller = frame.key.first;
        arc.callee = frame.key.second;
        arc.first_call = arc_first_call_.at(frame.key);
    }
    ++arc.ncalls;
    arc.self_time += done.self;
    if (frame.is_outermost) {
        arc.total_time += done.total;
    }
}

}  // namespace cgprof
