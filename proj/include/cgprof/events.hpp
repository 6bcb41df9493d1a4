#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "cgprof/timebase.hpp"

namespace cgprof {

/// Name of the pseudo-function that stands for the program root.
inline constexpr std::string_view kToplevelName = "#toplevel";

enum class FunctionType { Script, Builtin, Toplevel };
enum class EventKind { Call, Return };

std::string_view to_string(FunctionType type) noexcept;
std::string_view to_string(EventKind kind) noexcept;
std::optional<FunctionType> parse_function_type(std::string_view text) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view text) noexcept;

/// Identity of a profiled function. The name is the record key; the type is
/// carried through to reports as metadata only.
struct FunctionId {
    std::string name;
    FunctionType type = FunctionType::Script;

    static FunctionId toplevel() { return {std::string(kToplevelName), FunctionType::Toplevel}; }
    bool is_toplevel() const noexcept { return name == kToplevelName; }

    friend bool operator==(const FunctionId&, const FunctionId&) = default;
};

struct ProfileEvent {
    FunctionId fn;
    EventKind kind = EventKind::Call;
    Timestamp raw_time{};

    friend bool operator==(const ProfileEvent&, const ProfileEvent&) = default;
};

using ProfilerFunction = std::function<void(const ProfileEvent&)>;

/// Event delivery point between an interpreter and at most one installed profiler.
///
/// The interpreter calls send_event() on every function entry and exit. When a
/// handler is installed it receives the event synchronously, stamped with the
/// registry's time source; otherwise the event is dropped.
class HookRegistry {
public:
    explicit HookRegistry(TimeSource& source) noexcept : source_(&source) {}

    HookRegistry(const HookRegistry&) = delete;
    HookRegistry& operator=(const HookRegistry&) = delete;

    /// Process-wide registry on a real monotonic clock.
    static HookRegistry& global();

    /// Installs handler. Returns false and keeps the current one if a handler is already set.
    bool set_profiler(ProfilerFunction handler);

    /// Removes the installed handler. Returns false if there was none.
    bool clear_profiler() noexcept;

    bool has_profiler() const noexcept { return static_cast<bool>(handler_); }

    /// Throws SessionStateError if called from inside a handler. Handler exceptions propagate.
    void send_event(const FunctionId& fn, EventKind kind);

    TimeSource& time_source() const noexcept { return *source_; }

private:
    TimeSource* source_;
    ProfilerFunction handler_;
    bool dispatching_ = false;
};

}  // namespace cgprof
