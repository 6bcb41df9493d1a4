#include "cgprof/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cgprof/calibration.hpp"
#include "cgprof/engine_callgraph.hpp"
#include "cgprof/engine_flat.hpp"
#include "cgprof/error.hpp"
#include "cgprof/report.hpp"
#include "cgprof/trace.hpp"
#include "cgprof/workload.hpp"

namespace cgprof::cli {
namespace {

struct CliConfig {
    std::string mode = "flat";
    std::string sort = "self";
    bool ascending = false;
    std::string output = "text";
    std::string clock = "real";
    std::string input_path;
    std::string out_path;
    Nanos inject_ns = 0;
    bool no_compensate = false;
    std::size_t max_depth = 10'000;
    // calibrate
    std::vector<std::uint64_t> calls{100, 1'000, 10'000, 100'000};
    Nanos work_ns = 0;
    int repeats = 3;
};

const std::map<std::string, SortKey> kSortKeys{
    {"self", SortKey::SelfSeconds}, {"total", SortKey::TotalMsPerCall}, {"calls", SortKey::Calls},
    {"name", SortKey::Name},        {"first-call", SortKey::FirstCall},
};

SortOrder sort_order(const CliConfig& c) {
    return SortOrder{kSortKeys.at(c.sort), c.ascending ? SortDirection::Ascending : SortDirection::Descending};
}

EngineMode engine_mode(const std::string& mode) { return mode == "graph" ? EngineMode::Graph : EngineMode::Flat; }

ClockMode clock_mode(const CliConfig& c) { return c.clock == "virtual" ? ClockMode::Virtual : ClockMode::Real; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const CliConfig& c, const std::string& text, std::ostream& out) {
    if (c.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(c.out_path, std::ios::binary);
    file << text;
    file.close();
    if (!file) {
        throw Error("cannot write '" + c.out_path + "'");
    }
}

std::string render(const ProfileDocument& doc, const CliConfig& c) {
    if (c.output != "text") {
        return export_structured(doc);
    }
    if (const auto* flat = std::get_if<FlatProfile>(&doc)) {
        return render_flat(*flat, sort_order(c));
    }
    const auto& graph = std::get<CallGraphProfile>(doc);
    return render_graph(graph, sort_order(c)) + "\n" + render_flat(graph.rollup, sort_order(c));
}

workload::Script load_script(const std::string& path) {
    try {
        return workload::parse(read_file(path));
    } catch (const ScriptError& e) {
        throw Error(path + ":" + e.what());
    }
}

ProfilerOptions profiler_options(const CliConfig& c) { return ProfilerOptions{!c.no_compensate, c.inject_ns}; }

int cmd_run(const CliConfig& c, std::ostream& out) {
    const workload::Script script = load_script(c.input_path);
    TimeSource source = clock_mode(c) == ClockMode::Virtual ? TimeSource::virtual_clock() : TimeSource::real();
    HookRegistry registry(source);
    const workload::RunOptions run_options{c.max_depth};
    ProfileDocument doc;
    if (engine_mode(c.mode) == EngineMode::Flat) {
        FlatProfiler profiler(profiler_options(c));
        profiler.start(registry);
        workload::run(script, source, registry, run_options);
        doc = profiler.stop();
    } else {
        CallGraphProfiler profiler(profiler_options(c));
        profiler.start(registry);
        workload::run(script, source, registry, run_options);
        doc = profiler.stop();
    }
    emit(c, render(doc, c), out);
    return kExitOk;
}

int cmd_replay(const CliConfig& c, std::ostream& out) {
    std::ifstream in(c.input_path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + c.input_path + "'");
    }
    std::vector<ProfileEvent> events;
    try {
        events = read_trace(in);
    } catch (const TraceError& e) {
        throw Error(c.input_path + ": " + e.what());
    }
    emit(c, render(replay(events, engine_mode(c.mode), profiler_options(c)), c), out);
    return kExitOk;
}

int cmd_record(const CliConfig& c, std::ostream& out) {
    const workload::Script script = load_script(c.input_path);
    TimeSource source = clock_mode(c) == ClockMode::Virtual ? TimeSource::virtual_clock() : TimeSource::real();
    HookRegistry registry(source);
    TraceRecorder recorder;
    recorder.start(registry);
    workload::run(script, source, registry, workload::RunOptions{c.max_depth});
    const std::vector<ProfileEvent> events = recorder.stop();
    std::ostringstream text;
    write_trace(events, text);
    emit(c, text.str(), out);
    return kExitOk;
}

int cmd_calibrate(const CliConfig& c, std::ostream& out) {
    CalibrationOptions options;
    options.call_counts = c.calls;
    options.work_per_call = c.work_ns;
    options.measure = MeasureOptions{clock_mode(c), c.inject_ns, c.repeats};

    std::vector<EngineMode> modes;
    if (c.mode == "both") {
        modes = {EngineMode::Flat, EngineMode::Graph};
    } else {
        modes = {engine_mode(c.mode)};
    }
    std::string text;
    std::vector<CalibrationResult> results;
    for (EngineMode m : modes) {
        results.push_back(run_calibration(m, options));
        if (!text.empty()) {
            text += "\n";
        }
        text += render_calibration(results.back());
    }
    if (results.size() == 2) {
        char buf[160];
        const double flat = results[0].gross.slope;
        const double graph = results[1].gross.slope;
        std::snprintf(buf, sizeof buf, "\ngraph/flat gross overhead ratio: %.3f\n", flat > 0 ? graph / flat : 0.0);
        text += buf;
    }
    emit(c, text, out);
    return kExitOk;
}

void add_report_options(CLI::App& cmd, CliConfig& c) {
    cmd.add_option("--mode", c.mode, "Profiler engine")->check(CLI::IsMember({"flat", "graph"}));
    cmd.add_option("--sort", c.sort, "Row order key")->check(CLI::IsMember({"self", "total", "calls", "name", "first-call"}));
    auto* asc = cmd.add_flag("--asc", c.ascending, "Ascending order");
    cmd.add_flag("--desc{false}", c.ascending, "Descending order (default)")->excludes(asc);
    cmd.add_option("--output", c.output, "Report format")->check(CLI::IsMember({"text", "json", "structured"}));
    cmd.add_option("-o,--out", c.out_path, "Write the report to a file instead of stdout");
    cmd.add_option("--inject-ns", c.inject_ns, "Extra handler cost per event, in ns")->check(CLI::NonNegativeNumber);
    cmd.add_flag("--no-compensate", c.no_compensate, "Do not subtract handler time");
}

void add_clock_option(CLI::App& cmd, CliConfig& c) {
    cmd.add_option("--clock", c.clock, "Time source")->check(CLI::IsMember({"real", "virtual"}));
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deterministic flat and call-graph profiler for .wk workload scripts", "profile"};
    app.require_subcommand(1);
    CliConfig c;

    auto* run = app.add_subcommand("run", "Profile a workload script and print the report");
    run->add_option("script", c.input_path, "Workload script (.wk)")->required();
    add_report_options(*run, c);
    add_clock_option(*run, c);
    run->add_option("--max-depth", c.max_depth, "Call depth limit");

    auto* rep = app.add_subcommand("replay", "Profile a recorded trace");
    rep->add_option("trace", c.input_path, "Trace file (.csv)")->required();
    add_report_options(*rep, c);

    auto* rec = app.add_subcommand("record", "Run a workload script and write its event trace");
    rec->add_option("script", c.input_path, "Workload script (.wk)")->required();
    rec->add_option("-o,--out", c.out_path, "Trace file to write (default stdout)");
    add_clock_option(*rec, c);
    rec->add_option("--max-depth", c.max_depth, "Call depth limit");

    auto* cal = app.add_subcommand("calibrate", "Fit per-call profiler overhead on a tight loop");
    cal->add_option("--mode", c.mode, "Profiler engine, or both")->check(CLI::IsMember({"flat", "graph", "both"}));
    cal->add_option("--calls", c.calls, "Call counts to measure")->delimiter(',');
    cal->add_option("--work-ns", c.work_ns, "Work per call, in ns")->check(CLI::NonNegativeNumber);
    cal->add_option("--inject-ns", c.inject_ns, "Extra handler cost per event, in ns")->check(CLI::NonNegativeNumber);
    cal->add_option("--repeats", c.repeats, "Runs per point on the real clock (minimum kept)")->check(CLI::PositiveNumber);
    cal->add_option("-o,--out", c.out_path, "Write the report to a file");
    add_clock_option(*cal, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*cal && cal->count("--mode") == 0) {
        c.mode = "both";
    }

    try {
        if (*run) return cmd_run(c, out);
        if (*rep) return cmd_replay(c, out);
        if (*rec) return cmd_record(c, out);
        return cmd_calibrate(c, out);
    } catch (const std::exception& e) {
        err << "profile: error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace cgprof::cli
