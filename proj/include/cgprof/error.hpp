#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cgprof {

/// Base class for every error raised by the profiler library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Misuse of a TimeSource: advancing a real clock, or advancing backwards.
class ClockError : public Error {
public:
    using Error::Error;
};

/// Start/stop called in the wrong lifecycle state, or a handler re-entered dispatch.
class SessionStateError : public Error {
public:
    using Error::Error;
};

/// The call/return stream is not well nested.
class MalformedEventStream : public Error {
public:
    using Error::Error;
};

/// The overhead ledger went negative or exceeded elapsed time.
class AccountingError : public Error {
public:
    using Error::Error;
};

class UndefinedPercentage : public Error {
public:
    using Error::Error;
};

/// Fewer than two distinct x-values handed to a least-squares fit.
class DegenerateFit : public Error {
public:
    using Error::Error;
};

/// Error in a workload script, with 1-based source position.
class ScriptError : public Error {
public:
    enum class Kind { Syntax, UndefinedFunction, DuplicateDefinition, ReservedName };

    ScriptError(Kind kind, std::size_t line, std::size_t column, const std::string& what)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          kind_(kind), line_(line), column_(column) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    Kind kind_;
    std::size_t line_;
    std::size_t column_;
};

/// Runtime failure while interpreting a workload (call depth limit).
class WorkloadRuntimeError : public Error {
public:
    using Error::Error;
};

/// Error reading a trace file, with 1-based line number.
class TraceError : public Error {
public:
    enum class Kind { Parse, Order, Structure };

    TraceError(Kind kind, std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

/// A structured profile document could not be imported.
class ImportError : public Error {
public:
    using Error::Error;
};

}  // namespace cgprof
