#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rake/error.hpp"

namespace rake {

// Trace log format: one record per line, fields separated by ';'.
//   $2;<timestamp>;<test_case_id>
//   $1;<logging_timestamp>;<signature>;<session_id>;<trace_id>;<tin>;<tout>;<hostname>;<eoi>;<ess>

/// Marks the start of the execution trace collected for one test case.
struct TraceHeader {
    std::int64_t timestamp = 0;
    std::string test_case_id;  // Test_<Capability>_<UseCase>

    std::string to_line() const;
    bool operator==(const TraceHeader&) const = default;
};

/// One monitored method invocation.
struct OperationRecord {
    std::int64_t logging_timestamp = 0;
    std::string operation_signature;  // Class.method(paramTypes); identifies the method
    std::string session_id;           // "<no-session-id>" is kept verbatim
    std::int64_t trace_id = 0;
    std::int64_t tin = 0;   // entry time
    std::int64_t tout = 0;  // exit time
    std::string hostname;
    std::int64_t eoi = 0;  // execution order index, strictly increasing within a trace
    std::int64_t ess = 0;  // execution stack size (call depth)

    std::string to_line() const;
    bool operator==(const OperationRecord&) const = default;
};

using TraceRecord = std::variant<TraceHeader, OperationRecord>;

/// A header plus every operation record up to the next header.
struct TraceBlock {
    TraceHeader header;
    std::vector<OperationRecord> records;

    bool has_multiple_traces() const;

    /// Records grouped by trace_id, file order preserved inside each group.
    /// A block normally holds a single trace; interleaved trace ids are
    /// split apart here and flagged by the analysis pipeline.
    std::vector<std::vector<OperationRecord>> trace_partitions() const;
};

struct TraceLog {
    std::vector<TraceBlock> blocks;
};

/// Capability names plus the per-method capability sets. Methods observed in
/// traces of several capabilities keep the union of those capabilities.
struct CapabilityMap {
    std::set<std::string> capabilities;
    std::map<std::string, std::set<std::string>> method_caps;  // values are non-empty

    std::size_t capability_count() const { return capabilities.size(); }
};

/// Parse a single log line. Throws MalformedRecord (wrong field count,
/// non-numeric field, tin > tout, negative eoi/ess) or UnknownRecordKind.
TraceRecord parse_line(const std::string& line, long line_no = 0);

/// Parse a whole log. Blank lines are skipped; a record before any header
/// throws RecordBeforeHeader; eoi must be strictly increasing per trace.
TraceLog parse_log(std::istream& in);
TraceLog parse_log_text(const std::string& text);

/// Split Test_<Capability>_<UseCase> into (capability, use_case).
/// Throws BadTestCaseId when the id does not match; the caller may then
/// fall back to an explicit capability-mapping file.
std::pair<std::string, std::string> extract_capability(const std::string& test_case_id);

/// Capability mapping file. Two shapes are accepted:
///   - tabular: one "method_signature,capability" per line, split on the
///     last comma (signatures contain commas), '#' starts a comment
///   - JSON object: {"signature": "Cap"} or {"signature": ["Cap1", "Cap2"]}
/// A method listed several times accumulates the union of its capabilities.
std::map<std::string, std::set<std::string>> parse_capability_map_text(const std::string& text);
std::map<std::string, std::set<std::string>> load_capability_map(const std::string& path);

}  // namespace rake
