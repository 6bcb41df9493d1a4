#include "cgprof/profiler_base.hpp"

#include <string>

#include "cgprof/error.hpp"

namespace cgprof {

ProfilerBase::~ProfilerBase() {
    if (registry_ != nullptr) {
        registry_->clear_profiler();
    }
}

void ProfilerBase::start(HookRegistry& registry) {
    if (running()) {
        throw SessionStateError("profiler already started");
    }
    if (!registry.set_profiler([this](const ProfileEvent& event) { dispatch(event); })) {
        throw SessionStateError("another profiler is already installed");
    }
    registry_ = &registry;
    ledger_.reset();
    start_ = engine_time(registry.time_source().now());
    begin_session(start_);
}

void ProfilerBase::on_call(const ProfileEvent& event) {
    require_running("on_call");
    process_call(event.fn, engine_time(event.raw_time));
}

void ProfilerBase::on_return(const ProfileEvent& event) {
    require_running("on_return");
    process_return(event.fn, engine_time(event.raw_time));
}

SessionInfo ProfilerBase::stop_session() {
    require_running("stop");
    const Timestamp raw = registry_->time_source().now();
    registry_->clear_profiler();
    registry_ = nullptr;
    const Timestamp stop = engine_time(raw);
    end_session(stop);
    return SessionInfo{start_, stop, ledger_.cumulative()};
}

void ProfilerBase::dispatch(const ProfileEvent& event) {
    if (event.kind == EventKind::Call) {
        on_call(event);
    } else {
        on_return(event);
    }
    TimeSource& source = registry_->time_source();
    source.spend(options_.injected_handler_cost);
    ledger_.record_handler_cost(source.now() - event.raw_time);
}

Timestamp ProfilerBase::engine_time(Timestamp raw) const {
    return options_.compensate ? ledger_.compensated_time(raw) : raw;
}

void ProfilerBase::require_running(const char* what) const {
    if (!running()) {
        throw SessionStateError(std::string(what) + "() on a profiler that is not running");
    }
}

}  // namespace cgprof
