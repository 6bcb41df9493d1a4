#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "cgprof/events.hpp"
#include "cgprof/timebase.hpp"

namespace cgprof {

/// Per-function statistics. total_time is inclusive (call to return, children
/// included); self_time is exclusive (total minus time in direct callees).
struct CallRecord {
    std::string key;
    FunctionType type = FunctionType::Script;
    std::int64_t ncalls = 0;
    Nanos total_time = 0;
    Nanos self_time = 0;
    bool truncated = false;
    /// Order in which the function was first entered during the session (#toplevel is 0).
    std::uint64_t first_call = 0;

    friend bool operator==(const CallRecord&, const CallRecord&) = default;
};

/// Statistics for one caller -> callee pair, summed over that pair's activations.
struct ArcRecord {
    std::string caller;
    std::string callee;
    std::int64_t ncalls = 0;
    Nanos total_time = 0;
    Nanos self_time = 0;
    std::uint64_t first_call = 0;

    friend bool operator==(const ArcRecord&, const ArcRecord&) = default;
};

struct SessionInfo {
    Timestamp start{};
    Timestamp stop{};
    /// Handler time subtracted from the measurements during the session.
    Nanos compensated_overhead = 0;

    friend bool operator==(const SessionInfo&, const SessionInfo&) = default;
};

struct FlatProfile {
    std::map<std::string, CallRecord, std::less<>> records;
    SessionInfo session;
    /// Inclusive time of #toplevel, equal to session.stop - session.start.
    Nanos program_total = 0;

    const CallRecord* find(std::string_view name) const {
        auto it = records.find(name);
        return it == records.end() ? nullptr : &it->second;
    }

    friend bool operator==(const FlatProfile&, const FlatProfile&) = default;
};

using ArcKey = std::pair<std::string, std::string>;

struct CallGraphProfile {
    std::map<ArcKey, ArcRecord> arcs;
    /// Per-function view of the same session; matches what the flat engine produces.
    FlatProfile rollup;

    const ArcRecord* find(std::string_view caller, std::string_view callee) const {
        auto it = arcs.find(ArcKey{std::string(caller), std::string(callee)});
        return it == arcs.end() ? nullptr : &it->second;
    }

    friend bool operator==(const CallGraphProfile&, const CallGraphProfile&) = default;
};

}  // namespace cgprof
