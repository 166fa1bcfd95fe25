#pragma once

#include <stdexcept>
#include <string>

namespace rake {

/// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data: trace logs, graph files, decomposition files.
/// The CLI maps these to exit code 2.
class InputError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration: flags, objective specs, hyperparameters.
/// The CLI maps these to exit code 3.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Parse error that carries the 1-based line number it occurred on.
class LineError : public InputError {
public:
    LineError(const std::string& msg, long line)
        : InputError("line " + std::to_string(line) + ": " + msg), line_(line) {}

    long line() const { return line_; }

private:
    long line_;
};

class MalformedRecord : public LineError {
public:
    using LineError::LineError;
};

class UnknownRecordKind : public LineError {
public:
    UnknownRecordKind(const std::string& kind, long line)
        : LineError("unknown record kind '" + kind + "'", line) {}
};

class RecordBeforeHeader : public LineError {
public:
    explicit RecordBeforeHeader(long line)
        : LineError("operation record before any trace header", line) {}
};

/// eoi values must be strictly increasing within one trace of a block.
class TraceOrderError : public LineError {
public:
    using LineError::LineError;
};

class BadTestCaseId : public InputError {
public:
    explicit BadTestCaseId(const std::string& id)
        : InputError("test case id '" + id + "' does not match Test_<Capability>_<UseCase>") {}
};

class BrokenStack : public InputError {
public:
    BrokenStack(const std::string& method, long long depth)
        : InputError("record for '" + method + "' at stack depth " + std::to_string(depth) +
                     " has no preceding record at depth " + std::to_string(depth - 1)) {}
};

class NoTracesForCapability : public InputError {
public:
    explicit NoTracesForCapability(const std::string& capability)
        : InputError("no trace blocks for capability '" + capability + "'") {}
};

class MethodSetMismatch : public InputError {
public:
    using InputError::InputError;
};

class GraphEnvMismatch : public Error {
public:
    GraphEnvMismatch(int cfg_n, int graph_n)
        : Error("environment configured for " + std::to_string(cfg_n) +
                " methods but graph has " + std::to_string(graph_n)) {}
};

class ActionOutOfRange : public Error {
public:
    ActionOutOfRange(int action, int n_actions)
        : Error("action " + std::to_string(action) + " outside [0, " +
                std::to_string(n_actions - 1) + "]") {}
};

class StepAfterDone : public Error {
public:
    StepAfterDone() : Error("step() called on a finished episode") {}
};

class ShapeMismatch : public Error {
public:
    ShapeMismatch(std::size_t got, std::size_t expected)
        : Error("observation of length " + std::to_string(got) + ", network expects " +
                std::to_string(expected)) {}
};

class EmptyBuffer : public Error {
public:
    EmptyBuffer() : Error("rollout buffer is empty") {}
};

class NonFiniteLoss : public Error {
public:
    using Error::Error;
};

class TooLarge : public ConfigError {
public:
    TooLarge(int n, int cap)
        : ConfigError("graph has " + std::to_string(n) +
                      " methods, exhaustive enumeration is capped at " + std::to_string(cap)) {}
};

class InvalidConfig : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace rake
