#include "cgprof/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "cgprof/error.hpp"

namespace cgprof {
namespace {

constexpr Nanos kNanosPerCentisecond = 10'000'000;
constexpr Nanos kNanosPerCentimilli = 10'000;  // 0.01 ms

// Ordering on (total / ncalls) without division.
int compare_per_call(Nanos a_total, std::int64_t a_calls, Nanos b_total, std::int64_t b_calls) {
    const __int128 lhs = static_cast<__int128>(a_total) * b_calls;
    const __int128 rhs = static_cast<__int128>(b_total) * a_calls;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

template <typename T>
int three_way(const T& a, const T& b) {
    return a < b ? -1 : (b < a ? 1 : 0);
}

int compare_records(const CallRecord& a, const CallRecord& b, SortKey key) {
    switch (key) {
        case SortKey::SelfSeconds: return three_way(a.self_time, b.self_time);
        case SortKey::TotalMsPerCall: return compare_per_call(a.total_time, a.ncalls, b.total_time, b.ncalls);
        case SortKey::Calls: return three_way(a.ncalls, b.ncalls);
        case SortKey::Name: return three_way(a.key, b.key);
        case SortKey::FirstCall: return three_way(a.first_call, b.first_call);
    }
    return 0;
}

int compare_arcs(const ArcRecord& a, const ArcRecord& b, SortKey key) {
    switch (key) {
        case SortKey::SelfSeconds: return three_way(a.self_time, b.self_time);
        case SortKey::TotalMsPerCall: return compare_per_call(a.total_time, a.ncalls, b.total_time, b.ncalls);
        case SortKey::Calls: return three_way(a.ncalls, b.ncalls);
        case SortKey::Name: return three_way(a.callee, b.callee);
        case SortKey::FirstCall: return three_way(a.first_call, b.first_call);
    }
    return 0;
}

std::int64_t per_call_hundredths(Nanos time, std::int64_t ncalls) {
    if (ncalls <= 0) {
        return 0;
    }
    return round_half_up(time, static_cast<__int128>(ncalls) * kNanosPerCentimilli);
}

std::string seconds_text(Nanos ns) { return format_hundredths(round_half_up(ns, kNanosPerCentisecond)); }

void append_line(std::string& out, const char* fmt, auto... args) {
    char buf[512];
    const int n = std::snprintf(buf, sizeof buf, fmt, args...);
    if (n > 0) {
        out.append(buf, std::min<std::size_t>(static_cast<std::size_t>(n), sizeof buf - 1));
    }
}

}  // namespace

std::int64_t round_half_up(__int128 numerator, __int128 denominator) {
    return static_cast<std::int64_t>((2 * numerator + denominator) / (2 * denominator));
}

std::string format_hundredths(std::int64_t hundredths) {
    const bool negative = hundredths < 0;
    const std::uint64_t mag = negative ? -static_cast<std::uint64_t>(hundredths)
                                       : static_cast<std::uint64_t>(hundredths);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%llu.%02llu", negative ? "-" : "",
                  static_cast<unsigned long long>(mag / 100), static_cast<unsigned long long>(mag % 100));
    return buf;
}

std::vector<FlatReportRow> flat_rows(const FlatProfile& profile, SortOrder order) {
    std::vector<const CallRecord*> sorted;
    sorted.reserve(profile.records.size());
    for (const auto& [name, rec] : profile.records) {
        sorted.push_back(&rec);
    }
    std::stable_sort(sorted.begin(), sorted.end(), [&](const CallRecord* a, const CallRecord* b) {
        int c = compare_records(*a, *b, order.key);
        if (order.direction == SortDirection::Descending) {
            c = -c;
        }
        return c != 0 ? c < 0 : a->key < b->key;
    });

    std::vector<FlatReportRow> rows;
    rows.reserve(sorted.size());
    Nanos running = 0;
    for (const CallRecord* rec : sorted) {
        running += rec->self_time;
        FlatReportRow row;
        row.pct_time = profile.program_total > 0
                           ? round_half_up(static_cast<__int128>(rec->self_time) * 10'000, profile.program_total)
                           : 0;
        row.cumulative_seconds = round_half_up(running, kNanosPerCentisecond);
        row.self_seconds = round_half_up(rec->self_time, kNanosPerCentisecond);
        row.calls = rec->ncalls;
        row.self_ms_per_call = per_call_hundredths(rec->self_time, rec->ncalls);
        row.total_ms_per_call = per_call_hundredths(rec->total_time, rec->ncalls);
        row.name = rec->key;
        row.truncated = rec->truncated;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_flat(const FlatProfile& profile, SortOrder order) {
    std::string out;
    append_line(out, "Flat profile (program total %s seconds)\n\n", seconds_text(profile.program_total).c_str());
    out += "     %  cumulative      self                 self     total\n";
    out += "  time     seconds   seconds     calls   ms/call   ms/call  name\n";
    bool any_truncated = false;
    for (const FlatReportRow& row : flat_rows(profile, order)) {
        append_line(out, "%6s %11s %9s %9lld %9s %9s  %s%s\n", format_hundredths(row.pct_time).c_str(),
                    format_hundredths(row.cumulative_seconds).c_str(), format_hundredths(row.self_seconds).c_str(),
                    static_cast<long long>(row.calls), format_hundredths(row.self_ms_per_call).c_str(),
                    format_hundredths(row.total_ms_per_call).c_str(), row.name.c_str(),
                    row.truncated ? " (truncated)" : "");
        any_truncated = any_truncated || row.truncated;
    }
    if (any_truncated) {
        out += "\n(truncated): still running when profiling stopped; closed at the stop time.\n";
    }
    return out;
}

std::string render_graph(const CallGraphProfile& profile, SortOrder order) {
    std::map<std::string, std::vector<const ArcRecord*>, std::less<>> children;
    for (const auto& [key, arc] : profile.arcs) {
        children[arc.caller].push_back(&arc);
    }
    for (auto& [caller, list] : children) {
        std::stable_sort(list.begin(), list.end(), [&](const ArcRecord* a, const ArcRecord* b) {
            int c = compare_arcs(*a, *b, order.key);
            if (order.direction == SortDirection::Descending) {
                c = -c;
            }
            return c != 0 ? c < 0 : a->callee < b->callee;
        });
    }

    struct Line {
        std::string label;
        const ArcRecord* arc;
    };
    std::vector<Line> lines;
    std::vector<std::string> path{std::string(kToplevelName)};
    std::set<std::string, std::less<>> expanded{std::string(kToplevelName)};

    // Each function's callees are listed once, under the first place it is reached.
    auto walk = [&](auto&& self, const std::string& caller, std::size_t depth) -> void {
        auto it = children.find(caller);
        if (it == children.end()) {
            return;
        }
        for (const ArcRecord* arc : it->second) {
            std::string label(2 * depth, ' ');
            label += arc->caller + " -> " + arc->callee;
            const bool on_path = std::find(path.begin(), path.end(), arc->callee) != path.end();
            if (on_path) {
                lines.push_back({label + " <cycle>", arc});
                continue;
            }
            if (!expanded.insert(arc->callee).second) {
                const bool has_callees = children.count(arc->callee) != 0;
                lines.push_back({has_callees ? label + " <see above>" : label, arc});
                continue;
            }
            lines.push_back({label, arc});
            path.push_back(arc->callee);
            self(self, arc->callee, depth + 1);
            path.pop_back();
        }
    };
    walk(walk, std::string(kToplevelName), 0);

    std::size_t width = 3;
    for (const Line& line : lines) {
        width = std::max(width, line.label.size());
    }

    std::string out;
    append_line(out, "Call graph (program total %s seconds)\n\n",
                seconds_text(profile.rollup.program_total).c_str());
    append_line(out, "%-*s %9s %9s %9s %9s\n", static_cast<int>(width), "arc", "calls", "self s", "total s",
                "ms/call");
    for (const Line& line : lines) {
        append_line(out, "%-*s %9lld %9s %9s %9s\n", static_cast<int>(width), line.label.c_str(),
                    static_cast<long long>(line.arc->ncalls), seconds_text(line.arc->self_time).c_str(),
                    seconds_text(line.arc->total_time).c_str(),
                    format_hundredths(per_call_hundredths(line.arc->total_time, line.arc->ncalls)).c_str());
    }
    return out;
}

namespace {

using Json = nlohmann::ordered_json;

Json session_json(const FlatProfile& p) {
    Json s;
    s["start_ns"] = p.session.start.ns;
    s["stop_ns"] = p.session.stop.ns;
    s["program_total_ns"] = p.program_total;
    s["compensated_overhead_ns"] = p.session.compensated_overhead;
    return s;
}

Json records_json(const FlatProfile& p) {
    Json records = Json::array();
    for (const auto& [name, r] : p.records) {
        Json j;
        j["name"] = r.key;
        j["type"] = std::string(to_string(r.type));
        j["ncalls"] = r.ncalls;
        j["total_ns"] = r.total_time;
        j["self_ns"] = r.self_time;
        j["truncated"] = r.truncated;
        j["first_call"] = r.first_call;
        records.push_back(std::move(j));
    }
    return records;
}

Json document(const FlatProfile& p, std::string_view mode) {
    Json doc;
    doc["format"] = "cgprof-profile";
    doc["version"] = 1;
    doc["mode"] = std::string(mode);
    doc["session"] = session_json(p);
    doc["records"] = records_json(p);
    return doc;
}

template <typename T>
T field(const Json& j, const char* name) {
    if (!j.contains(name)) {
        throw ImportError(std::string("missing field '") + name + "'");
    }
    return j.at(name).get<T>();
}

FlatProfile flat_from_json(const Json& doc) {
    FlatProfile p;
    const Json& s = doc.at("session");
    p.session.start = Timestamp{field<Nanos>(s, "start_ns")};
    p.session.stop = Timestamp{field<Nanos>(s, "stop_ns")};
    p.session.compensated_overhead = field<Nanos>(s, "compensated_overhead_ns");
    p.program_total = field<Nanos>(s, "program_total_ns");
    for (const Json& j : doc.at("records")) {
        CallRecord r;
        r.key = field<std::string>(j, "name");
        const auto type = parse_function_type(field<std::string>(j, "type"));
        if (!type) {
            throw ImportError("unknown function type for '" + r.key + "'");
        }
        r.type = *type;
        r.ncalls = field<std::int64_t>(j, "ncalls");
        r.total_time = field<Nanos>(j, "total_ns");
        r.self_time = field<Nanos>(j, "self_ns");
        r.truncated = field<bool>(j, "truncated");
        r.first_call = field<std::uint64_t>(j, "first_call");
        if (!p.records.emplace(r.key, r).second) {
            throw ImportError("duplicate record '" + r.key + "'");
        }
    }
    return p;
}

}  // namespace

std::string export_structured(const FlatProfile& profile) {
    return document(profile, "flat").dump(2) + "\n";
}

std::string export_structured(const CallGraphProfile& profile) {
    Json doc = document(profile.rollup, "graph");
    Json arcs = Json::array();
    for (const auto& [key, a] : profile.arcs) {
        Json j;
        j["caller"] = a.caller;
        j["callee"] = a.callee;
        j["ncalls"] = a.ncalls;
        j["total_ns"] = a.total_time;
        j["self_ns"] = a.self_time;
        j["first_call"] = a.first_call;
        arcs.push_back(std::move(j));
    }
    doc["arcs"] = std::move(arcs);
    return doc.dump(2) + "\n";
}

std::string export_structured(const ProfileDocument& profile) {
    return std::visit([](const auto& p) { return export_structured(p); }, profile);
}

ProfileDocument import_structured(std::string_view json_text) {
    try {
        const Json doc = Json::parse(json_text);
        if (field<std::string>(doc, "format") != "cgprof-profile") {
            throw ImportError("not a cgprof profile document");
        }
        const auto mode = field<std::string>(doc, "mode");
        if (mode == "flat") {
            return flat_from_json(doc);
        }
        if (mode != "graph") {
            throw ImportError("unknown profile mode '" + mode + "'");
        }
        CallGraphProfile g;
        g.rollup = flat_from_json(doc);
        for (const Json& j : doc.at("arcs")) {
            ArcRecord a;
            a.caller = field<std::string>(j, "caller");
            a.callee = field<std::string>(j, "callee");
            a.ncalls = field<std::int64_t>(j, "ncalls");
            a.total_time = field<Nanos>(j, "total_ns");
            a.self_time = field<Nanos>(j, "self_ns");
            a.first_call = field<std::uint64_t>(j, "first_call");
            ArcKey key{a.caller, a.callee};
            if (!g.arcs.emplace(std::move(key), std::move(a)).second) {
                throw ImportError("duplicate arc");
            }
        }
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw ImportError(std::string("malformed profile document: ") + e.what());
    }
}

}  // namespace cgprof
