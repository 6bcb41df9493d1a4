#include "cgprof/events.hpp"

#include <utility>

#include "cgprof/error.hpp"

namespace cgprof {

std::string_view to_string(FunctionType type) noexcept {
    switch (type) {
        case FunctionType::Script: return "script";
        case FunctionType::Builtin: return "builtin";
        case FunctionType::Toplevel: return "toplevel";
    }
    return "script";
}

std::string_view to_string(EventKind kind) noexcept {
    return kind == EventKind::Call ? "call" : "return";
}

std::optional<FunctionType> parse_function_type(std::string_view text) noexcept {
    if (text == "script") return FunctionType::Script;
    if (text == "builtin") return FunctionType::Builtin;
    if (text == "toplevel") return FunctionType::Toplevel;
    return std::nullopt;
}

std::optional<EventKind> parse_event_kind(std::string_view text) noexcept {
    if (text == "call") return EventKind::Call;
    if (text == "return") return EventKind::Return;
    return std::nullopt;
}

HookRegistry& HookRegistry::global() {
    static TimeSource source = TimeSource::real();
    static HookRegistry registry(source);
    return registry;
}

bool HookRegistry::set_profiler(ProfilerFunction handler) {
    if (handler_ || !handler) {
        return false;
    }
    handler_ = std::move(handler);
    return true;
}

bool HookRegistry::clear_profiler() noexcept {
    if (!handler_) {
        return false;
    }
    handler_ = nullptr;
    return true;
}

void HookRegistry::send_event(const FunctionId& fn, EventKind kind) {
    if (!handler_) {
        return;
    }
    if (dispatching_) {
        throw SessionStateError("send_event() re-entered from a profiler handler");
    }
    const Timestamp t = source_->now();
    dispatching_ = true;
    struct Reset {
        bool& flag;
        ~Reset() { flag = false; }
    } reset{dispatching_};
    // Copy so a handler may clear itself mid-dispatch.
    ProfilerFunction handler = handler_;
    handler(ProfileEvent{fn, kind, t});
}

}  // namespace cgprof
