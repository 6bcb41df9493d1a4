#include <doctest.h>

#include <random>

#include "cgprof/engine_callgraph.hpp"
#include "cgprof/error.hpp"
#include "cgprof/report.hpp"
#include "cgprof/trace.hpp"
#include "support.hpp"

using namespace cgprof;
using namespace cgprof::testing;

namespace {

CallGraphProfile graph_of(std::vector<ProfileEvent> events, Nanos stop) {
    events.push_back(stop_marker(stop));
    return std::get<CallGraphProfile>(replay(events, EngineMode::Graph));
}

FlatProfile flat_of(std::vector<ProfileEvent> events, Nanos stop) {
    events.push_back(stop_marker(stop));
    return std::get<FlatProfile>(replay(events, EngineMode::Flat));
}

}  // namespace

TEST_CASE("arc parent is the function on top of the stack at call time") {
    const CallGraphProfile g = graph_of({call("A", 0), call("B", 1), call("B", 2), ret("B", 3), ret("B", 4),
                                         ret("A", 5), call("A", 6), ret("A", 7)},
                                        8);
    REQUIRE(g.find("#toplevel", "A"));
    CHECK(g.find("#toplevel", "A")->ncalls == 2);
    REQUIRE(g.find("A", "B"));
    CHECK(g.find("A", "B")->ncalls == 1);
    REQUIRE(g.find("B", "B"));
    CHECK(g.find("B", "B")->ncalls == 1);
    CHECK(g.arcs.size() == 3);
}

TEST_CASE("per-arc totals") {
    // Values frozen from oracle_profile over this list (see test_oracle.cpp).
    const CallGraphProfile g =
        graph_of({call("A", 0), call("B", 10), ret("B", 30), call("B", 35), ret("B", 40), ret("A", 50)}, 50);
    const ArcRecord* ab = g.find("A", "B");
    const ArcRecord* ta = g.find("#toplevel", "A");
    REQUIRE(ab);
    REQUIRE(ta);
    CHECK(ab->ncalls == 2);
    CHECK(ab->total_time == 25);
    CHECK(ab->self_time == 25);
    CHECK(ta->ncalls == 1);
    CHECK(ta->total_time == 50);
    CHECK(ta->self_time == 25);
}

TEST_CASE("one function, two callers, two arcs") {
    const CallGraphProfile g =
        graph_of({call("A", 0), call("C", 1), ret("C", 2), ret("A", 3), call("B", 4), call("C", 5), ret("C", 7),
                  ret("B", 8)},
                 8);
    CHECK(g.find("A", "C")->total_time == 1);
    CHECK(g.find("B", "C")->total_time == 2);
    CHECK(g.rollup.find("C")->ncalls == 2);
    CHECK(g.rollup.find("C")->total_time == 3);
}

TEST_CASE("recursive arc adds inclusive time from its outermost activation only") {
    const CallGraphProfile g = graph_of({call("A", 0), call("A", 10), call("A", 20), ret("A", 25), ret("A", 30),
                                         ret("A", 40)},
                                        40);
    const ArcRecord* aa = g.find("A", "A");
    REQUIRE(aa);
    CHECK(aa->ncalls == 2);
    CHECK(aa->total_time == 20);
    CHECK(aa->self_time == 20);
    CHECK(g.find("#toplevel", "A")->total_time == 40);
}

TEST_CASE("empty session has no arcs") {
    const CallGraphProfile g = graph_of({}, 0);
    CHECK(g.arcs.empty());
    CHECK(g.rollup.records.size() == 1);
    CHECK(g.rollup.find("#toplevel"));
}

TEST_CASE("truncated session unwinds arcs too") {
    const CallGraphProfile g = graph_of({call("A", 0), call("B", 10)}, 30);
    CHECK(g.find("A", "B")->total_time == 20);
    CHECK(g.find("#toplevel", "A")->total_time == 30);
    CHECK(g.rollup.find("B")->truncated);
}

TEST_CASE("nesting violations surface as malformed streams") {
    CHECK_THROWS_AS(graph_of({call("A", 0), ret("B", 1)}, 1), MalformedEventStream);
}

TEST_CASE("random traces: arcs roll up to the flat profile") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
        TraceShape shape;
        shape.recursion = i % 2 == 0;
        shape.close_all = i % 5 != 0;
        const GeneratedTrace t = random_trace(rng, shape);
        const CallGraphProfile g = graph_of(t.events, t.stop);
        const FlatProfile f = flat_of(t.events, t.stop);
        CHECK(export_structured(g.rollup) == export_structured(f));

        std::map<std::string, OracleStats> into;
        for (const auto& [key, arc] : g.arcs) {
            CHECK(arc.ncalls >= 1);
            CHECK(arc.self_time >= 0);
            CHECK(arc.self_time <= arc.total_time);
            OracleStats& s = into[arc.callee];
            s.ncalls += arc.ncalls;
            s.total += arc.total_time;
            s.self += arc.self_time;
        }
        for (const auto& [name, rec] : f.records) {
            if (name == "#toplevel") {
                continue;
            }
            CHECK(into[name].ncalls == rec.ncalls);
            if (!t.recursive) {
                CHECK(into[name].total == rec.total_time);
                CHECK(into[name].self == rec.self_time);
            }
        }
    }
}
