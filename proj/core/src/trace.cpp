#include "rps/trace.hpp"

#include <json.hpp>

#include "rps/bytes.hpp"
#include "rps/crypto.hpp"

namespace rps {

const char* to_string(TraceEvent::Kind kind) {
    switch (kind) {
        case TraceEvent::Kind::Send: return "Send";
        case TraceEvent::Kind::Deliver: return "Deliver";
        case TraceEvent::Kind::Verify: return "Verify";
        case TraceEvent::Kind::Decide: return "Decide";
        case TraceEvent::Kind::Error: return "Error";
        case TraceEvent::Kind::RngDraw: return "RngDraw";
    }
    return "?";
}

std::string Trace::to_jsonl() const {
    std::string out;
    for (const TraceEvent& ev : events) {
        nlohmann::json detail = nlohmann::json::object();
        for (const auto& [key, value] : ev.detail) {
            std::visit([&detail, &key](const auto& v) { detail[key] = v; }, value);
        }
        const nlohmann::json line = {
            {"tick", ev.tick}, {"seq", ev.seq},      {"actor", ev.actor},
            {"kind", to_string(ev.kind)},            {"detail", std::move(detail)},
        };
        out += line.dump();
        out += '\n';
    }
    nlohmann::json status_line;
    if (status == TerminalStatus::MatchComplete) {
        status_line = {{"status", "MatchComplete"}};
    } else {
        status_line = {{"status", "Aborted"},
                       {"error", abort_error ? to_string(*abort_error) : "unknown"}};
    }
    out += status_line.dump();
    out += '\n';
    return out;
}

std::string trace_digest(const Trace& trace) {
    const std::string body = trace.to_jsonl();
    return to_hex(sha256(reinterpret_cast<const std::uint8_t*>(body.data()), body.size()).data(), 32);
}

std::optional<std::int64_t> detail_int(const TraceEvent& ev, const std::string& key) {
    const auto it = ev.detail.find(key);
    if (it == ev.detail.end()) return std::nullopt;
    if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
    return std::nullopt;
}

std::optional<std::string> detail_str(const TraceEvent& ev, const std::string& key) {
    const auto it = ev.detail.find(key);
    if (it == ev.detail.end()) return std::nullopt;
    if (const auto* v = std::get_if<std::string>(&it->second)) return *v;
    return std::nullopt;
}

std::optional<bool> detail_bool(const TraceEvent& ev, const std::string& key) {
    const auto it = ev.detail.find(key);
    if (it == ev.detail.end()) return std::nullopt;
    if (const auto* v = std::get_if<bool>(&it->second)) return *v;
    return std::nullopt;
}

}  // namespace rps
