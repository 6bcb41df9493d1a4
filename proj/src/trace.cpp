#include "cgprof/trace.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include "cgprof/engine_callgraph.hpp"
#include "cgprof/engine_flat.hpp"
#include "cgprof/error.hpp"

namespace cgprof {
namespace {

bool is_stop_marker(const ProfileEvent& e) { return e.fn.is_toplevel() && e.kind == EventKind::Return; }

template <typename Profiler>
auto replay_with(std::span<const ProfileEvent> events, const ProfilerOptions& options) {
    TimeSource clock = TimeSource::virtual_clock();
    HookRegistry registry(clock);
    Profiler profiler(options);
    profiler.start(registry);

    // Injected handler cost moves the clock past the trace; keep events at their
    // trace time plus the cost charged so far.
    Nanos injected = 0;
    auto move_to = [&](Timestamp trace_time) {
        const Nanos target = trace_time.ns + injected;
        if (target < clock.now().ns) {
            throw MalformedEventStream("trace timestamps go backwards");
        }
        clock.advance(target - clock.now().ns);
    };

    for (std::size_t i = 0; i < events.size(); ++i) {
        const ProfileEvent& e = events[i];
        if (e.fn.is_toplevel()) {
            if (!is_stop_marker(e) || i + 1 != events.size()) {
                throw MalformedEventStream("#toplevel may only appear as the final stop marker");
            }
            move_to(e.raw_time);
            break;
        }
        move_to(e.raw_time);
        registry.send_event(e.fn, e.kind);
        injected += options.injected_handler_cost;
    }
    return profiler.stop();
}

}  // namespace

void write_trace(std::span<const ProfileEvent> events, std::ostream& sink) {
    for (const ProfileEvent& e : events) {
        if (e.fn.name.find_first_of(",\n\r") != std::string::npos) {
            throw Error("function name '" + e.fn.name + "' cannot be written to a trace");
        }
        sink << e.raw_time.ns << ',' << to_string(e.kind) << ',' << e.fn.name << ',' << to_string(e.fn.type)
             << '\n';
    }
    sink.flush();
    if (!sink) {
        throw Error("failed writing trace");
    }
}

std::vector<ProfileEvent> read_trace(std::istream& source) {
    std::vector<ProfileEvent> events;
    std::string line;
    std::size_t line_no = 0;
    bool stopped = false;
    while (std::getline(source, line)) {
        ++line_no;
        if (std::count(line.begin(), line.end(), ',') != 3) {
            throw TraceError(TraceError::Kind::Parse, line_no, "expected 4 comma-separated fields");
        }
        std::string_view fields[4];
        std::string_view rest(line);
        for (int i = 0; i < 3; ++i) {
            const std::size_t comma = rest.find(',');
            fields[i] = rest.substr(0, comma);
            rest.remove_prefix(comma + 1);
        }
        fields[3] = rest;

        Nanos t = 0;
        const auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), t);
        if (fields[0].empty() || ec != std::errc{} || ptr != fields[0].data() + fields[0].size() || t < 0) {
            throw TraceError(TraceError::Kind::Parse, line_no, "bad timestamp '" + std::string(fields[0]) + "'");
        }
        const auto kind = parse_event_kind(fields[1]);
        if (!kind) {
            throw TraceError(TraceError::Kind::Parse, line_no, "unknown event kind '" + std::string(fields[1]) + "'");
        }
        if (fields[2].empty()) {
            throw TraceError(TraceError::Kind::Parse, line_no, "empty function name");
        }
        const auto type = parse_function_type(fields[3]);
        if (!type) {
            throw TraceError(TraceError::Kind::Parse, line_no,
                             "unknown function type '" + std::string(fields[3]) + "'");
        }

        ProfileEvent e{FunctionId{std::string(fields[2]), *type}, *kind, Timestamp{t}};
        if (!events.empty() && t < events.back().raw_time.ns) {
            throw TraceError(TraceError::Kind::Order, line_no, "timestamp decreases");
        }
        if (stopped) {
            throw TraceError(TraceError::Kind::Structure, line_no, "event after the #toplevel stop marker");
        }
        const bool toplevel_name = e.fn.is_toplevel();
        if (toplevel_name != (e.fn.type == FunctionType::Toplevel) ||
            (toplevel_name && e.kind != EventKind::Return)) {
            throw TraceError(TraceError::Kind::Structure, line_no,
                             "#toplevel may only appear as 'return' with type 'toplevel'");
        }
        stopped = toplevel_name;
        events.push_back(std::move(e));
    }
    if (source.bad()) {
        throw Error("failed reading trace");
    }
    return events;
}

ProfileDocument replay(std::span<const ProfileEvent> events, EngineMode mode, const ProfilerOptions& options) {
    if (mode == EngineMode::Flat) {
        return replay_with<FlatProfiler>(events, options);
    }
    return replay_with<CallGraphProfiler>(events, options);
}

TraceRecorder::~TraceRecorder() {
    if (registry_ != nullptr) {
        registry_->clear_profiler();
    }
}

void TraceRecorder::start(HookRegistry& registry) {
    if (registry_ != nullptr) {
        throw SessionStateError("recorder already started");
    }
    if (!registry.set_profiler([this](const ProfileEvent& e) { events_.push_back(e); })) {
        throw SessionStateError("another profiler is already installed");
    }
    registry_ = &registry;
    events_.clear();
    origin_ = registry.time_source().now();
}

std::vector<ProfileEvent> TraceRecorder::stop() {
    if (registry_ == nullptr) {
        throw SessionStateError("recorder is not running");
    }
    const Timestamp stop = registry_->time_source().now();
    registry_->clear_profiler();
    registry_ = nullptr;

    std::vector<ProfileEvent> out = std::move(events_);
    events_.clear();
    for (ProfileEvent& e : out) {
        e.raw_time = Timestamp{e.raw_time - origin_};
    }
    const Timestamp end{stop - origin_};
    const Timestamp last = out.empty() ? Timestamp{} : out.back().raw_time;
    if (end != last) {
        out.push_back(ProfileEvent{FunctionId::toplevel(), EventKind::Return, end});
    }
    return out;
}

}  // namespace cgprof
