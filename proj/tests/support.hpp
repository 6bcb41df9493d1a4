#pragma once

// Test-only helpers: an interval-arithmetic profile oracle that shares no code
// with the engines, and seeded generators for random traces and scripts.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgprof/events.hpp"
#include "cgprof/profile.hpp"
#include "cgprof/workload.hpp"

namespace cgprof::testing {

inline ProfileEvent call(const std::string& name, Nanos t) {
    return ProfileEvent{FunctionId{name, FunctionType::Script}, EventKind::Call, Timestamp{t}};
}

inline ProfileEvent ret(const std::string& name, Nanos t) {
    return ProfileEvent{FunctionId{name, FunctionType::Script}, EventKind::Return, Timestamp{t}};
}

inline ProfileEvent stop_marker(Nanos t) {
    return ProfileEvent{FunctionId::toplevel(), EventKind::Return, Timestamp{t}};
}

struct OracleStats {
    std::int64_t ncalls = 0;
    Nanos total = 0;
    Nanos self = 0;
    bool truncated = false;
};

struct OracleResult {
    std::map<std::string, OracleStats> functions;  // includes #toplevel
    std::map<std::pair<std::string, std::string>, OracleStats> arcs;
    Nanos program_total = 0;
};

/// Profile of a well-nested event list computed from activation intervals.
///
/// Every call opens an interval [call time, return time] at its nesting level;
/// calls still open at `stop` are closed there. Self time of an interval is its
/// length minus the lengths of the intervals one level down that start inside
/// it. Inclusive time counts an interval only if no enclosing interval belongs
/// to the same function (for arcs: to the same caller/callee pair).
inline OracleResult oracle_profile(const std::vector<ProfileEvent>& events, Nanos stop) {
    struct Interval {
        std::string name;
        Nanos begin = 0;
        Nanos end = -1;
        long parent = -1;  // -1 is #toplevel
        Nanos children = 0;
        bool truncated = false;
    };
    std::vector<Interval> intervals;
    std::vector<long> open_at_level{-1};  // level 0 is #toplevel
    for (const ProfileEvent& e : events) {
        if (e.kind == EventKind::Call) {
            Interval iv;
            iv.name = e.fn.name;
            iv.begin = e.raw_time.ns;
            iv.parent = open_at_level.back();
            intervals.push_back(iv);
            open_at_level.push_back(static_cast<long>(intervals.size() - 1));
        } else {
            if (open_at_level.size() < 2 || intervals[open_at_level.back()].name != e.fn.name) {
                throw std::logic_error("oracle given a badly nested trace");
            }
            intervals[open_at_level.back()].end = e.raw_time.ns;
            open_at_level.pop_back();
        }
    }
    for (Interval& iv : intervals) {
        if (iv.end < 0) {
            iv.end = stop;
            iv.truncated = true;
        }
    }

    const std::string top(kToplevelName);
    Nanos top_children = 0;
    for (const Interval& iv : intervals) {
        const Nanos span = iv.end - iv.begin;
        if (iv.parent < 0) {
            top_children += span;
        } else {
            intervals[iv.parent].children += span;
        }
    }

    auto name_of = [&](long idx) { return idx < 0 ? top : intervals[idx].name; };

    OracleResult out;
    out.program_total = stop;
    OracleStats& root = out.functions[top];
    root.ncalls = 1;
    root.total = stop;
    root.self = stop - top_children;

    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const Interval& iv = intervals[i];
        const Nanos span = iv.end - iv.begin;
        const Nanos self = span - iv.children;
        const std::string caller = name_of(iv.parent);

        bool outermost = true;
        bool arc_outermost = true;
        for (long a = iv.parent; a >= 0; a = intervals[a].parent) {
            if (intervals[a].name == iv.name) {
                outermost = false;
                if (name_of(intervals[a].parent) == caller) {
                    arc_outermost = false;
                }
            }
        }

        OracleStats& f = out.functions[iv.name];
        ++f.ncalls;
        f.self += self;
        f.total += outermost ? span : 0;
        f.truncated = f.truncated || iv.truncated;

        OracleStats& arc = out.arcs[{caller, iv.name}];
        ++arc.ncalls;
        arc.self += self;
        arc.total += arc_outermost ? span : 0;
    }
    return out;
}

struct TraceShape {
    int functions = 8;       // 1..64
    int max_depth = 8;       // 1..32
    int max_events = 200;    // upper bound on call+return events
    bool recursion = true;   // allow a function to be re-entered while active
    bool close_all = true;   // false leaves a random number of frames open
    Nanos max_gap = 1'000;   // gaps are 0 about a quarter of the time
};

struct GeneratedTrace {
    std::vector<ProfileEvent> events;
    Nanos stop = 0;
    bool recursive = false;  // true if some function actually re-entered itself
};

inline GeneratedTrace random_trace(std::mt19937_64& rng, const TraceShape& shape) {
    GeneratedTrace out;
    std::uniform_int_distribution<int> pick_fn(0, shape.functions - 1);
    std::uniform_int_distribution<Nanos> gap(1, std::max<Nanos>(1, shape.max_gap));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int target = std::uniform_int_distribution<int>(0, shape.max_events)(rng);

    Nanos t = 0;
    auto tick = [&] { t += coin(rng) < 0.25 ? 0 : gap(rng); };
    tick();

    std::vector<std::string> stack;
    auto pop = [&] {
        out.events.push_back(ret(stack.back(), t));
        stack.pop_back();
    };
    while (true) {
        const int remaining = target - static_cast<int>(out.events.size());
        const bool can_call = static_cast<int>(stack.size()) < shape.max_depth &&
                              remaining >= static_cast<int>(stack.size()) + 2;
        if (!can_call) {
            if (stack.empty() || (!shape.close_all && coin(rng) < 0.3)) {
                break;
            }
            pop();
        } else if (!stack.empty() && coin(rng) < 0.45) {
            pop();
        } else {
            const std::string name = "f" + std::to_string(pick_fn(rng));
            const bool active = std::find(stack.begin(), stack.end(), name) != stack.end();
            if (active && !shape.recursion) {
                pop();
            } else {
                out.recursive = out.recursive || active;
                out.events.push_back(call(name, t));
                stack.push_back(name);
            }
        }
        tick();
    }
    out.stop = t;
    return out;
}

/// Random acyclic script: functions only call later-defined ones.
inline workload::Script random_script(std::mt19937_64& rng, int max_defs = 6) {
    using namespace workload;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int ndefs = std::uniform_int_distribution<int>(1, max_defs)(rng);
    Script script;

    auto body_for = [&](int self_index, int depth, auto&& recurse) -> std::vector<Stmt> {
        std::vector<Stmt> body;
        const int n = std::uniform_int_distribution<int>(0, 4)(rng);
        for (int i = 0; i < n; ++i) {
            const double r = coin(rng);
            if (r < 0.4) {
                body.push_back(Stmt{Work{std::uniform_int_distribution<Nanos>(0, 500)(rng)}});
            } else if (r < 0.85 && self_index + 1 < ndefs) {
                const int callee = std::uniform_int_distribution<int>(self_index + 1, ndefs - 1)(rng);
                body.push_back(Stmt{Call{"g" + std::to_string(callee)}});
            } else if (depth < 2) {
                const auto count = std::uniform_int_distribution<std::uint64_t>(0, 3)(rng);
                body.push_back(Stmt{Repeat{count, recurse(self_index, depth + 1, recurse)}});
            }
        }
        return body;
    };
    for (int i = 0; i < ndefs; ++i) {
        script.defs.push_back(FuncDef{"g" + std::to_string(i), body_for(i, 0, body_for)});
    }
    script.body = body_for(-1, 0, body_for);
    return script;
}

/// Number of calls a script performs, by direct expansion (scripts must be acyclic).
inline std::uint64_t count_calls(const workload::Script& script) {
    using namespace workload;
    std::map<std::string, const FuncDef*> defs;
    for (const FuncDef& d : script.defs) {
        defs[d.name] = &d;
    }
    auto count = [&](const std::vector<Stmt>& body, auto&& self) -> std::uint64_t {
        std::uint64_t n = 0;
        for (const Stmt& s : body) {
            if (const auto* c = std::get_if<Call>(&s.node)) {
                n += 1 + self(defs.at(c->name)->body, self);
            } else if (const auto* r = std::get_if<Repeat>(&s.node)) {
                n += r->count * self(r->body, self);
            }
        }
        return n;
    };
    return count(script.body, count);
}

/// random_script, redrawn until it makes at most max_calls calls.
inline workload::Script random_bounded_script(std::mt19937_64& rng, std::uint64_t max_calls = 5'000) {
    for (;;) {
        workload::Script s = random_script(rng);
        if (count_calls(s) <= max_calls) {
            return s;
        }
    }
}

}  // namespace cgprof::testing
