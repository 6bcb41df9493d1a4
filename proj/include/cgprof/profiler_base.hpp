#pragma once

#include "cgprof/compensation.hpp"
#include "cgprof/events.hpp"
#include "cgprof/profile.hpp"

namespace cgprof {

struct ProfilerOptions {
    /// Subtract measured handler time from every timestamp the engine sees.
    bool compensate = true;
    /// Extra time consumed inside every handler invocation (virtual clocks
    /// advance, real clocks spin). Used to model profiler cost in tests.
    Nanos injected_handler_cost = 0;
};

/// Shared lifecycle for profilers driven through a HookRegistry.
///
/// start() notes the session start and installs the event handler; the handler
/// translates raw timestamps through the overhead ledger, forwards the event to
/// the derived engine, then charges the time it spent to the ledger. Derived
/// classes finish a session through stop_session().
class ProfilerBase {
public:
    explicit ProfilerBase(ProfilerOptions options = {}) : options_(options) {}
    virtual ~ProfilerBase();

    ProfilerBase(const ProfilerBase&) = delete;
    ProfilerBase& operator=(const ProfilerBase&) = delete;

    /// Throws SessionStateError if running already or another profiler holds the registry.
    void start(HookRegistry& registry);

    bool running() const noexcept { return registry_ != nullptr; }
    const ProfilerOptions& options() const noexcept { return options_; }
    const OverheadLedger& ledger() const noexcept { return ledger_; }

    /// Feed a single event, bypassing the registry. The session must be running.
    void on_call(const ProfileEvent& event);
    void on_return(const ProfileEvent& event);

protected:
    /// Uninstalls the handler and lets the engine close every open frame at the
    /// (compensated) stop time. Throws SessionStateError if not running.
    SessionInfo stop_session();

    virtual void begin_session(Timestamp start) = 0;
    virtual void process_call(const FunctionId& fn, Timestamp t) = 0;
    virtual void process_return(const FunctionId& fn, Timestamp t) = 0;
    virtual void end_session(Timestamp stop) = 0;

private:
    void dispatch(const ProfileEvent& event);
    Timestamp engine_time(Timestamp raw) const;
    void require_running(const char* what) const;

    ProfilerOptions options_;
    OverheadLedger ledger_;
    HookRegistry* registry_ = nullptr;
    Timestamp start_{};
};

}  // namespace cgprof
