#include "cgprof/engine_flat.hpp"

#include <utility>

#include "cgprof/error.hpp"

namespace cgprof {

void FlatAccumulator::begin(Timestamp start) {
    frames_.clear();
    active_.clear();
    first_call_.clear();
    profile_ = FlatProfile{};
    last_time_ = start;
    next_sequence_ = 1;
    first_call_.emplace(std::string(kToplevelName), 0);
    frames_.push_back(TimeFrame{FunctionId::toplevel(), start, 0, true});
}

void FlatAccumulator::call(const FunctionId& fn, Timestamp t) {
    if (frames_.empty()) {
        throw MalformedEventStream("call event outside a profiling session");
    }
    if (fn.name.empty() || fn.is_toplevel()) {
        throw MalformedEventStream("call of reserved or empty function name '" + fn.name + "'");
    }
    advance_to(t);
    int& live = active_[fn.name];
    frames_.push_back(TimeFrame{fn, t, 0, live == 0});
    ++live;
    if (first_call_.try_emplace(fn.name, next_sequence_).second) {
        ++next_sequence_;
    }
}

CompletedFrame FlatAccumulator::ret(std::string_view name, Timestamp t, bool truncated) {
    if (frames_.size() <= 1) {
        throw MalformedEventStream("return from '" + std::string(name) + "' without a matching call");
    }
    if (frames_.back().fn.name != name) {
        throw MalformedEventStream("return from '" + std::string(name) + "' while '" +
                                   frames_.back().fn.name + "' is the innermost active call");
    }
    advance_to(t);
    CompletedFrame done = pop(t);
    if (auto it = active_.find(done.fn.name); it != active_.end() && --it->second == 0) {
        active_.erase(it);
    }
    fold(done, truncated);
    return done;
}

void FlatAccumulator::close(Timestamp stop) {
    if (frames_.size() != 1) {
        throw MalformedEventStream("session closed with open user frames");
    }
    advance_to(stop);
    fold(pop(stop), false);
}

FlatProfile FlatAccumulator::freeze(const SessionInfo& session) const {
    FlatProfile out = profile_;
    out.session = session;
    if (const CallRecord* top = out.find(kToplevelName)) {
        out.program_total = top->total_time;
    }
    return out;
}

void FlatAccumulator::advance_to(Timestamp t) {
    if (t < last_time_) {
        throw MalformedEventStream("event timestamps go backwards");
    }
    last_time_ = t;
}

CompletedFrame FlatAccumulator::pop(Timestamp t) {
    TimeFrame frame = std::move(frames_.back());
    frames_.pop_back();
    CompletedFrame done;
    done.total = t - frame.entry_time;
    done.self = done.total - frame.child_time;
    done.is_outermost = frame.is_outermost;
    done.fn = std::move(frame.fn);
    if (!frames_.empty()) {
        frames_.back().child_time += done.total;
    }
    return done;
}

void FlatAccumulator::fold(const CompletedFrame& done, bool truncated) {
    auto [it, inserted] = profile_.records.try_emplace(done.fn.name);
    CallRecord& rec = it->second;
    if (inserted) {
        rec.key = done.fn.name;
        rec.type = done.fn.type;
        rec.first_call = first_call_.at(done.fn.name);
    }
    ++rec.ncalls;
    rec.self_time += done.self;
    if (done.is_outermost) {
        rec.total_time += done.total;
    }
    rec.truncated = rec.truncated || truncated;
}

FlatProfiler::~FlatProfiler() = default;

FlatProfile FlatProfiler::stop() {
    const SessionInfo session = stop_session();
    return acc_.freeze(session);
}

void FlatProfiler::begin_session(Timestamp start) { acc_.begin(start); }

void FlatProfiler::process_call(const FunctionId& fn, Timestamp t) { acc_.call(fn, t); }

void FlatProfiler::process_return(const FunctionId& fn, Timestamp t) { acc_.ret(fn.name, t); }

void FlatProfiler::end_session(Timestamp stop) {
    // Frames still open were never returned from; close them at stop time.
    while (acc_.depth() > 1) {
        const std::string name = acc_.top().fn.name;
        acc_.ret(name, stop, true);
    }
    acc_.close(stop);
}

double percent_time(Nanos self, Nanos program_total) {
    if (program_total <= 0) {
        throw UndefinedPercentage("percentage of a zero-length program");
    }
    return 100.0 * static_cast<double>(self) / static_cast<double>(program_total);
}

}  // namespace cgprof
