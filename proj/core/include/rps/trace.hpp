#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rps/errors.hpp"

namespace rps {

using DetailValue = std::variant<std::int64_t, bool, std::string>;
using Detail = std::map<std::string, DetailValue>;

struct TraceEvent {
    enum class Kind { Send, Deliver, Verify, Decide, Error, RngDraw };

    std::int64_t tick = 0;   // simulated day
    std::uint64_t seq = 0;   // dense from 0 across the whole run
    std::string actor;       // player id, or "post" for the network
    Kind kind = Kind::Send;
    Detail detail;
};

const char* to_string(TraceEvent::Kind kind);

enum class TerminalStatus { MatchComplete, Aborted };

struct Trace {
    std::vector<TraceEvent> events;
    TerminalStatus status = TerminalStatus::Aborted;
    std::optional<ProtocolError> abort_error;

    // Canonical serialization: one compact JSON object per event line with
    // fields (tick, seq, actor, kind, detail), then one terminal status
    // line. Object keys are sorted; trace_digest is computed over exactly
    // these bytes.
    std::string to_jsonl() const;
};

// SHA-256 of the canonical serialization, lowercase hex. Golden traces pin
// this value to freeze the wire and event formats.
std::string trace_digest(const Trace& trace);

std::optional<std::int64_t> detail_int(const TraceEvent& ev, const std::string& key);
std::optional<std::string> detail_str(const TraceEvent& ev, const std::string& key);
std::optional<bool> detail_bool(const TraceEvent& ev, const std::string& key);

}  // namespace rps
