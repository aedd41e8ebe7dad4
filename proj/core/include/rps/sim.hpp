#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rps/commitment.hpp"
#include "rps/game_rules.hpp"
#include "rps/protocol.hpp"
#include "rps/rng.hpp"
#include "rps/strategy.hpp"
#include "rps/trace.hpp"

namespace rps {

// Transit time is a whole number of simulated days, uniform on
// [min_days, max_days], drawn per mailing.
struct LatencyModel {
    int min_days = 2;
    int max_days = 5;
};

enum class AdversaryKind { Swap, Tamper, Equivocate, Replay, Drop, Peek };

const char* to_string(AdversaryKind kind);
std::optional<AdversaryKind> adversary_kind_from_string(const std::string& name);

// One scripted interception. Peek is passive and watches every flow-1
// mailing; the active kinds strike the first message matching
// (game_index, flow_number) and are spent afterwards. Equivocate models a
// dishonest committer and must target a flow 3.
struct AdversarySpec {
    AdversaryKind kind = AdversaryKind::Peek;
    std::uint32_t game_index = 0;
    std::uint8_t flow_number = 1;
    std::optional<int> replacement_move;
};

class Adversary {
public:
    Adversary(AdversarySpec spec, std::uint32_t variant_n);

    // Returns the message to forward, or nullopt when it is dropped. The
    // committer id is public knowledge (the game's addressing names it).
    std::optional<FlowMessage> intercept(const FlowMessage& msg, const std::string& committer_id,
                                         SeededRng& rng);

    bool fired() const { return fired_; }
    const AdversarySpec& spec() const { return spec_; }
    // Guess recorded by the last Peek interception, derived only from the
    // public bytes of the message.
    std::optional<int> last_peek_guess() const { return last_guess_; }

private:
    bool matches_target(const FlowMessage& msg) const;

    AdversarySpec spec_;
    std::uint32_t variant_n_;
    bool fired_ = false;
    std::optional<int> last_guess_;
    std::optional<Envelope> recorded_envelope_;  // earliest countersigned envelope seen
};

struct PlayerSpec {
    std::string id;
    std::string display_name;  // defaults to id when empty
    StrategySpec strategy;
};

struct SimConfig {
    std::uint64_t seed = 0;
    Variant variant = Variant::validate(3);
    int games_per_match = 10;
    LatencyModel latency;
    int timeout_days = 30;
    PlayerSpec player_a;
    PlayerSpec player_b;
    std::optional<AdversarySpec> adversary;
};

struct GameResult {
    std::string committer_id;
    Move committer_move;
    Move responder_move;
    std::string winner_id;  // empty on a draw
};

struct MatchTally {
    int wins_a = 0;
    int wins_b = 0;
    int draws = 0;
    MatchPoints points;  // first = player_a
};

struct SimReport {
    MatchId match_id{};
    Trace trace;
    std::vector<GameResult> games;   // games completed before the end, abort or not
    std::optional<MatchTally> tally; // present iff the trace ends MatchComplete
};

// Runs one full match over the simulated postal network. Deterministic: the
// report, including the serialized trace, is a pure function of the config.
SimReport run_simulation(const SimConfig& config);

}  // namespace rps
