#include "rake/trace.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

namespace rake {

namespace {

constexpr const char* kHeaderMarker = "$2";
constexpr const char* kOperationMarker = "$1";

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::int64_t parse_int(const std::string& field, const char* name, long line_no) {
    std::int64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty()) {
        throw MalformedRecord(std::string("field '") + name + "' is not an integer: '" + field + "'",
                              line_no);
    }
    return value;
}

std::string strip_cr(const std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        return line.substr(0, line.size() - 1);
    }
    return line;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string TraceHeader::to_line() const {
    std::ostringstream os;
    os << kHeaderMarker << ';' << timestamp << ';' << test_case_id;
    return os.str();
}

std::string OperationRecord::to_line() const {
    std::ostringstream os;
    os << kOperationMarker << ';' << logging_timestamp << ';' << operation_signature << ';'
       << session_id << ';' << trace_id << ';' << tin << ';' << tout << ';' << hostname << ';'
       << eoi << ';' << ess;
    return os.str();
}

bool TraceBlock::has_multiple_traces() const {
    for (const auto& r : records) {
        if (r.trace_id != records.front().trace_id) return true;
    }
    return false;
}

std::vector<std::vector<OperationRecord>> TraceBlock::trace_partitions() const {
    std::vector<std::vector<OperationRecord>> parts;
    std::map<std::int64_t, std::size_t> slot;  // trace_id -> index, in order of appearance
    for (const auto& r : records) {
        auto it = slot.find(r.trace_id);
        if (it == slot.end()) {
            it = slot.emplace(r.trace_id, parts.size()).first;
            parts.emplace_back();
        }
        parts[it->second].push_back(r);
    }
    return parts;
}

TraceRecord parse_line(const std::string& raw, long line_no) {
    const std::string line = strip_cr(raw);
    if (line.empty()) {
        throw MalformedRecord("empty line", line_no);
    }
    const std::vector<std::string> fields = split(line, ';');
    const std::string& kind = fields[0];

    if (kind == kHeaderMarker) {
        if (fields.size() != 3) {
            throw MalformedRecord("trace header has " + std::to_string(fields.size()) +
                                      " fields, expected 3",
                                  line_no);
        }
        TraceHeader h;
        h.timestamp = parse_int(fields[1], "timestamp", line_no);
        h.test_case_id = fields[2];
        return h;
    }

    if (kind == kOperationMarker) {
        if (fields.size() != 10) {
            throw MalformedRecord("operation record has " + std::to_string(fields.size()) +
                                      " fields, expected 10",
                                  line_no);
        }
        OperationRecord r;
        r.logging_timestamp = parse_int(fields[1], "logging_timestamp", line_no);
        r.operation_signature = fields[2];
        r.session_id = fields[3];
        r.trace_id = parse_int(fields[4], "trace_id", line_no);
        r.tin = parse_int(fields[5], "tin", line_no);
        r.tout = parse_int(fields[6], "tout", line_no);
        r.hostname = fields[7];
        r.eoi = parse_int(fields[8], "eoi", line_no);
        r.ess = parse_int(fields[9], "ess", line_no);
        if (r.tin > r.tout) {
            throw MalformedRecord("tin > tout", line_no);
        }
        if (r.eoi < 0 || r.ess < 0) {
            throw MalformedRecord("negative eoi/ess", line_no);
        }
        return r;
    }

    throw UnknownRecordKind(kind, line_no);
}

TraceLog parse_log(std::istream& in) {
    TraceLog log;
    std::string raw;
    long line_no = 0;
    // last eoi seen per trace_id inside the current block
    std::map<std::int64_t, std::int64_t> last_eoi;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip_cr(raw);
        if (line.empty()) continue;

        TraceRecord rec = parse_line(line, line_no);
        if (std::holds_alternative<TraceHeader>(rec)) {
            log.blocks.push_back(TraceBlock{std::get<TraceHeader>(std::move(rec)), {}});
            last_eoi.clear();
            continue;
        }

        if (log.blocks.empty()) {
            throw RecordBeforeHeader(line_no);
        }
        auto op = std::get<OperationRecord>(std::move(rec));
        auto it = last_eoi.find(op.trace_id);
        if (it != last_eoi.end() && op.eoi <= it->second) {
            throw TraceOrderError("eoi " + std::to_string(op.eoi) +
                                      " not strictly increasing within trace " +
                                      std::to_string(op.trace_id),
                                  line_no);
        }
        last_eoi[op.trace_id] = op.eoi;
        log.blocks.back().records.push_back(std::move(op));
    }
    return log;
}

TraceLog parse_log_text(const std::string& text) {
    std::istringstream in(text);
    return parse_log(in);
}

std::pair<std::string, std::string> extract_capability(const std::string& test_case_id) {
    const std::vector<std::string> parts = split(test_case_id, '_');
    if (parts.size() != 3 || parts[0] != "Test" || parts[1].empty() || parts[2].empty()) {
        throw BadTestCaseId(test_case_id);
    }
    return {parts[1], parts[2]};
}

std::map<std::string, std::set<std::string>> parse_capability_map_text(const std::string& text) {
    std::map<std::string, std::set<std::string>> out;
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(std::string("capability map is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) {
            throw InputError("capability map JSON must be an object keyed by method signature");
        }
        for (const auto& [method, caps] : j.items()) {
            if (caps.is_string()) {
                out[method].insert(caps.get<std::string>());
            } else if (caps.is_array()) {
                for (const auto& c : caps) {
                    if (!c.is_string()) {
                        throw InputError("capability list for '" + method + "' must hold strings");
                    }
                    out[method].insert(c.get<std::string>());
                }
            } else {
                throw InputError("capability entry for '" + method +
                                 "' must be a string or an array of strings");
            }
        }
        return out;
    }

    std::istringstream in(text);
    std::string raw;
    long line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_cr(raw));
        if (line.empty() || line.front() == '#') continue;
        const std::size_t pos = line.rfind(',');
        if (pos == std::string::npos || pos == 0 || pos + 1 == line.size()) {
            throw MalformedRecord("expected 'method_signature,capability'", line_no);
        }
        const std::string method = trim(line.substr(0, pos));
        const std::string cap = trim(line.substr(pos + 1));
        if (method.empty() || cap.empty()) {
            throw MalformedRecord("expected 'method_signature,capability'", line_no);
        }
        out[method].insert(cap);
    }
    return out;
}

std::map<std::string, std::set<std::string>> load_capability_map(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open capability map: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_capability_map_text(buf.str());
}

}  // namespace rake
