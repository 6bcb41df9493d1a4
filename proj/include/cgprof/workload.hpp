#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cgprof/events.hpp"
#include "cgprof/timebase.hpp"

namespace cgprof::workload {

// A tiny call-and-work language:
//
//   program := def* stmt*
//   def     := "def" NAME "(" ")" "{" stmt* "}"
//   stmt    := "work" INT ";" | "call" NAME ";" | "repeat" INT "{" stmt* "}"
//
// "#" starts a comment that runs to the end of the line.

struct Work {
    Nanos duration = 0;
    friend bool operator==(const Work&, const Work&) = default;
};

struct Call {
    std::string name;
    friend bool operator==(const Call&, const Call&) = default;
};

struct Stmt;

struct Repeat {
    std::uint64_t count = 0;
    std::vector<Stmt> body;
    friend bool operator==(const Repeat&, const Repeat&) = default;
};

struct Stmt {
    std::variant<Work, Call, Repeat> node;
    friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct FuncDef {
    std::string name;
    std::vector<Stmt> body;
    friend bool operator==(const FuncDef&, const FuncDef&) = default;
};

struct Script {
    std::vector<FuncDef> defs;
    std::vector<Stmt> body;
    friend bool operator==(const Script&, const Script&) = default;
};

/// Throws ScriptError (syntax, undefined or duplicate function, reserved name).
Script parse(std::string_view source);

/// Pretty-prints a script back to source form accepted by parse().
std::string to_source(const Script& script);

struct RunOptions {
    std::size_t max_depth = 10'000;
};

struct RunStats {
    std::uint64_t calls = 0;
    std::size_t max_depth = 0;
};

/// Executes the toplevel body. Each call emits Call/Return through `registry`;
/// work consumes time on `source`. Throws WorkloadRuntimeError past max_depth.
RunStats run(const Script& script, TimeSource& source, HookRegistry& registry,
             const RunOptions& options = {});

/// "def f(){work W;} repeat N {call f;}" -- the loop used for overhead calibration.
Script tight_loop(std::uint64_t ncalls, Nanos work_per_call);

}  // namespace cgprof::workload
