#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cgprof/profile.hpp"

namespace cgprof {

enum class SortKey { SelfSeconds, TotalMsPerCall, Calls, Name, FirstCall };
enum class SortDirection { Ascending, Descending };

struct SortOrder {
    SortKey key = SortKey::SelfSeconds;
    SortDirection direction = SortDirection::Descending;
};

/// One line of the flat table. Numeric fields are fixed-point hundredths,
/// rounded half-up from the exact nanosecond values.
struct FlatReportRow {
    std::int64_t pct_time = 0;            // percent * 100
    std::int64_t cumulative_seconds = 0;  // seconds * 100
    std::int64_t self_seconds = 0;        // seconds * 100
    std::int64_t calls = 0;
    std::int64_t self_ms_per_call = 0;    // ms * 100
    std::int64_t total_ms_per_call = 0;   // ms * 100
    std::string name;
    bool truncated = false;
};

/// round(numerator / denominator) with ties away from zero; denominator > 0, numerator >= 0.
std::int64_t round_half_up(__int128 numerator, __int128 denominator);

/// Formats a hundredths value as "<int>.<2 digits>".
std::string format_hundredths(std::int64_t hundredths);

/// Records in display order. cumulative_seconds is the running sum of exact
/// self time over the rows so far, rounded once.
std::vector<FlatReportRow> flat_rows(const FlatProfile& profile, SortOrder order);

/// Fixed-width table with one row per function, #toplevel included.
std::string render_flat(const FlatProfile& profile, SortOrder order = {});

/// Depth-first arc listing from #toplevel. An arc whose callee is already on
/// the current path is printed once with a cycle tag and not expanded.
std::string render_graph(const CallGraphProfile& profile, SortOrder order = {});

using ProfileDocument = std::variant<FlatProfile, CallGraphProfile>;

/// JSON export with every time as exact integer nanoseconds.
std::string export_structured(const FlatProfile& profile);
std::string export_structured(const CallGraphProfile& profile);
std::string export_structured(const ProfileDocument& profile);

/// Inverse of export_structured. Throws ImportError on malformed input.
ProfileDocument import_structured(std::string_view json_text);

}  // namespace cgprof
