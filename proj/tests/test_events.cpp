#include <doctest.h>

#include <vector>

#include "cgprof/error.hpp"
#include "cgprof/events.hpp"

using namespace cgprof;

TEST_CASE("set_profiler installs at most one handler") {
    TimeSource src = TimeSource::virtual_clock();
    HookRegistry reg(src);
    int h1 = 0;
    int h2 = 0;
    CHECK(reg.set_profiler([&](const ProfileEvent&) { ++h1; }));
    CHECK_FALSE(reg.set_profiler([&](const ProfileEvent&) { ++h2; }));
    reg.send_event(FunctionId{"f"}, EventKind::Call);
    CHECK(h1 == 1);
    CHECK(h2 == 0);

    CHECK(reg.clear_profiler());
    CHECK_FALSE(reg.has_profiler());
    CHECK(reg.set_profiler([&](const ProfileEvent&) { ++h2; }));
    reg.send_event(FunctionId{"f"}, EventKind::Call);
    CHECK(h2 == 1);
}

TEST_CASE("clear_profiler reports whether a handler was installed") {
    TimeSource src = TimeSource::virtual_clock();
    HookRegistry reg(src);
    CHECK_FALSE(reg.clear_profiler());
    int hits = 0;
    reg.set_profiler([&](const ProfileEvent&) { ++hits; });
    CHECK(reg.clear_profiler());
    reg.send_event(FunctionId{"f"}, EventKind::Call);
    CHECK(hits == 0);
}

TEST_CASE("send_event stamps events with the registry clock") {
    TimeSource src = TimeSource::virtual_clock();
    HookRegistry reg(src);
    std::vector<ProfileEvent> seen;
    reg.send_event(FunctionId{"f"}, EventKind::Call);  // dropped: nobody listening
    reg.set_profiler([&](const ProfileEvent& e) { seen.push_back(e); });
    src.advance(7);
    reg.send_event(FunctionId{"f"}, EventKind::Call);
    src.advance(3);
    reg.send_event(FunctionId{"f"}, EventKind::Return);
    REQUIRE(seen.size() == 2);
    CHECK(seen[0] == ProfileEvent{FunctionId{"f"}, EventKind::Call, Timestamp{7}});
    CHECK(seen[1].kind == EventKind::Return);
    CHECK(seen[1].raw_time == Timestamp{10});
}

TEST_CASE("handlers may not re-enter dispatch") {
    TimeSource src = TimeSource::virtual_clock();
    HookRegistry reg(src);
    reg.set_profiler([&](const ProfileEvent& e) { reg.send_event(e.fn, e.kind); });
    CHECK_THROWS_AS(reg.send_event(FunctionId{"f"}, EventKind::Call), SessionStateError);
    // The guard is released after the failure.
    reg.clear_profiler();
    int hits = 0;
    reg.set_profiler([&](const ProfileEvent&) { ++hits; });
    reg.send_event(FunctionId{"f"}, EventKind::Call);
    CHECK(hits == 1);
}

TEST_CASE("handler exceptions propagate to the caller") {
    TimeSource src = TimeSource::virtual_clock();
    HookRegistry reg(src);
    reg.set_profiler([](const ProfileEvent&) { throw MalformedEventStream("bad"); });
    CHECK_THROWS_AS(reg.send_event(FunctionId{"f"}, EventKind::Return), MalformedEventStream);
}

TEST_CASE("global registry is a single instance") {
    CHECK(&HookRegistry::global() == &HookRegistry::global());
    CHECK(HookRegistry::global().time_source().mode() == ClockMode::Real);
}

TEST_CASE("enum text forms") {
    CHECK(to_string(EventKind::Call) == "call");
    CHECK(to_string(FunctionType::Builtin) == "builtin");
    CHECK(parse_function_type("toplevel") == FunctionType::Toplevel);
    CHECK_FALSE(parse_event_kind("enter").has_value());
    CHECK(FunctionId::toplevel().is_toplevel());
}
