#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rps/commitment.hpp"
#include "rps/crypto.hpp"
#include "rps/errors.hpp"
#include "rps/game_rules.hpp"

namespace rps {

// The digital sealed envelope. The committer signs across the flap
// (commitment digest plus the game addressing); the responder countersigns
// below that, over the same material plus the committer's signature. The
// chain order lets each party later recognize their own signature and detect
// a swapped envelope.
struct Envelope {
    Commitment commitment;
    Signature committer_sig{};
    std::optional<Signature> responder_sig;

    Bytes encode() const;       // full encoding, countersignature included
    Bytes encode_base() const;  // commitment + committer signature only

    friend bool operator==(const Envelope&, const Envelope&) = default;
};

// Bytes covered by the committer's flap signature.
Bytes committer_sign_bytes(const CommitContext& ctx, const Commitment& c);
// Bytes covered by the responder's countersignature: the committer's
// material plus the committer's signature.
Bytes responder_sign_bytes(const CommitContext& ctx, const Commitment& c, const Signature& committer_sig);

struct FlowHeader {
    MatchId match_id{};
    std::uint32_t game_index = 0;
    std::string sender_id;
    std::uint8_t flow_number = 1;

    friend bool operator==(const FlowHeader&, const FlowHeader&) = default;
};

// Flow 1: the sealed, signed envelope. No move travels in the clear.
struct Flow1 {
    Envelope envelope;
};

// Flow 2: the countersigned envelope returned, responder's move in the clear.
struct Flow2 {
    Envelope envelope;
    Move responder_move;
};

// Flow 3: the doubly signed envelope again, now with the opening.
struct Flow3 {
    Envelope envelope;
    Opening opening;
};

struct FlowMessage {
    FlowHeader header;
    std::variant<Flow1, Flow2, Flow3> body;

    const Envelope& envelope() const;

    // Wire form: every field length-prefixed (4-byte big-endian length), the
    // envelope nested as a single field. decode returns nullopt on any
    // framing or tag violation.
    Bytes encode() const;
    static std::optional<FlowMessage> decode(const Bytes& wire);
};

// One verification performed by a handler, surfaced so the simulator can
// trace each check individually.
struct VerifyCheck {
    const char* check;
    bool ok;
};
using CheckLog = std::vector<VerifyCheck>;

// Committer side of one game. Handlers are transitions: they either advance
// the state and return the emission, or return the detection that killed the
// game (the state parks in Failed; errors are terminal).
class Committer {
public:
    enum class State { Init, Committed, OutcomeKnown, Done, Failed };

    Committer(CommitContext ctx, Variant variant, KeyPair keys, PublicKey responder_pub,
              std::string responder_id);

    // Seal the move: draw a nonce, commit, sign across the flap. Emits flow 1.
    FlowMessage start(Move move, SeededRng& rng);

    struct Flow2Result {
        FlowMessage flow3;
        GameOutcome outcome;  // relative to (committer, responder)
        Move responder_move;
    };
    // On the returned envelope: byte-compare against the envelope as sent,
    // re-verify the own flap signature, verify the countersignature. This is
    // the point where the committer knows who won. Emits flow 3 carrying the
    // opening.
    std::variant<Flow2Result, ProtocolError> on_flow2(const FlowMessage& msg, CheckLog* checks = nullptr);

    // Called by the match engine once the responder has completed the game.
    void finish();

    State state() const { return state_; }
    Move move() const { return move_; }
    const Envelope& sent_envelope() const { return sent_envelope_; }

private:
    ProtocolError fail(ProtocolError err);

    CommitContext ctx_;
    Variant variant_;
    KeyPair keys_;
    PublicKey responder_pub_;
    std::string responder_id_;
    State state_ = State::Init;
    Move move_{};
    Nonce nonce_{};
    Envelope sent_envelope_;
};

// Responder side of one game.
class Responder {
public:
    enum class State { AwaitingFlow1, Responded, Complete, Failed };

    Responder(CommitContext ctx, Variant variant, KeyPair keys, PublicKey committer_pub,
              std::string own_id);

    // Verify the flap signature, countersign, fix the own move and send it in
    // the clear. The move never changes after this point. Emits flow 2.
    std::variant<FlowMessage, ProtocolError> on_flow1(const FlowMessage& msg, Move own_move,
                                                      CheckLog* checks = nullptr);

    struct Flow3Result {
        GameOutcome outcome;  // relative to (committer, responder)
        Move committer_move;
    };
    // On the envelope's return: byte-compare against the countersigned
    // envelope stored at flow 2, then verify the opening. This is where the
    // responder learns who won.
    std::variant<Flow3Result, ProtocolError> on_flow3(const FlowMessage& msg, CheckLog* checks = nullptr);

    State state() const { return state_; }
    Move own_move() const { return own_move_; }

private:
    ProtocolError fail(ProtocolError err);

    CommitContext ctx_;
    Variant variant_;
    KeyPair keys_;
    PublicKey committer_pub_;
    std::string own_id_;
    State state_ = State::AwaitingFlow1;
    Move own_move_{};
    Envelope countersigned_envelope_;
};

// Match bookkeeping: strict one-game-at-a-time sequencing with the committer
// role alternating, player A committing game 0.
class Match {
public:
    struct GameRow {
        std::string committer_id;
        Move committer_move;
        Move responder_move;
        GameOutcome outcome;  // relative to (committer, responder)
    };

    struct NextGame {
        CommitContext context;
        std::string committer_id;
        std::string responder_id;
    };

    struct Tally {
        int wins_a = 0;
        int wins_b = 0;
        int draws = 0;
        MatchPoints points;  // first = player A
    };

    Match(MatchId id, std::string player_a, std::string player_b, Variant variant,
          int games_per_match = 10);

    // Context for the next game, or nullopt once the match is complete.
    // Throws SequencingViolation while a game is still in flight.
    std::optional<NextGame> next_game();

    // Closes the game handed out by the last next_game call.
    void record_game(GameRow row);

    bool complete() const;
    Tally tally() const;  // MatchIncomplete until every game is recorded

    const std::vector<GameRow>& games() const { return games_; }
    const std::string& committer_for(std::uint32_t game) const { return game % 2 == 0 ? a_ : b_; }
    const std::string& id_a() const { return a_; }
    const std::string& id_b() const { return b_; }
    const MatchId& id() const { return id_; }
    int games_per_match() const { return games_per_match_; }

private:
    MatchId id_{};
    std::string a_;
    std::string b_;
    Variant variant_;
    int games_per_match_;
    std::vector<GameRow> games_;
    bool game_open_ = false;
};

}  // namespace rps
