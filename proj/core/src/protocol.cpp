#include "rps/protocol.hpp"

namespace rps {

namespace {

void log_check(CheckLog* checks, const char* name, bool ok) {
    if (checks != nullptr) checks->push_back(VerifyCheck{name, ok});
}

Bytes context_fields(const CommitContext& ctx) {
    Bytes out;
    append_field(out, ctx.match_id);
    append_field_u32(out, ctx.game_index);
    append_field(out, std::string_view(ctx.committer_id));
    append_field_u32(out, ctx.variant_n);
    return out;
}

}  // namespace

Bytes Envelope::encode() const {
    Bytes out = encode_base();
    append_field_u8(out, responder_sig.has_value() ? 1 : 0);
    if (responder_sig) append_field(out, *responder_sig);
    return out;
}

Bytes Envelope::encode_base() const {
    Bytes out;
    append_field(out, commitment.digest);
    append_field(out, committer_sig);
    return out;
}

namespace {

std::optional<Envelope> decode_envelope(const Bytes& blob) {
    FieldReader r(blob);
    Envelope env;
    env.commitment.digest = r.field_array<32>();
    env.committer_sig = r.field_array<64>();
    const std::uint8_t flag = r.field_u8();
    if (r.ok() && flag == 1) env.responder_sig = r.field_array<64>();
    if (!r.done() || flag > 1) return std::nullopt;
    return env;
}

}  // namespace

Bytes committer_sign_bytes(const CommitContext& ctx, const Commitment& c) {
    Bytes out = context_fields(ctx);
    append_field(out, c.digest);
    return out;
}

Bytes responder_sign_bytes(const CommitContext& ctx, const Commitment& c, const Signature& committer_sig) {
    Bytes out = committer_sign_bytes(ctx, c);
    append_field(out, committer_sig);
    return out;
}

const Envelope& FlowMessage::envelope() const {
    return std::visit([](const auto& b) -> const Envelope& { return b.envelope; }, body);
}

Bytes FlowMessage::encode() const {
    Bytes out;
    append_field(out, header.match_id);
    append_field_u32(out, header.game_index);
    append_field(out, std::string_view(header.sender_id));
    append_field_u8(out, header.flow_number);
    std::visit(
        [&out](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            append_field(out, b.envelope.encode());
            if constexpr (std::is_same_v<T, Flow2>) {
                append_field_u32(out, static_cast<std::uint32_t>(b.responder_move.index));
            } else if constexpr (std::is_same_v<T, Flow3>) {
                append_field_u32(out, static_cast<std::uint32_t>(b.opening.move.index));
                append_field(out, b.opening.nonce.value);
            }
        },
        body);
    return out;
}

std::optional<FlowMessage> FlowMessage::decode(const Bytes& wire) {
    FieldReader r(wire);
    FlowMessage msg;
    msg.header.match_id = r.field_array<16>();
    msg.header.game_index = r.field_u32();
    msg.header.sender_id = r.field_str();
    msg.header.flow_number = r.field_u8();
    if (!r.ok()) return std::nullopt;

    auto env = decode_envelope(r.field());
    if (!env) return std::nullopt;

    switch (msg.header.flow_number) {
        case 1:
            msg.body = Flow1{*env};
            break;
        case 2: {
            const std::uint32_t mv = r.field_u32();
            if (mv > static_cast<std::uint32_t>(INT32_MAX)) return std::nullopt;
            msg.body = Flow2{*env, Move{static_cast<int>(mv)}};
            break;
        }
        case 3: {
            const std::uint32_t mv = r.field_u32();
            Nonce nonce;
            nonce.value = r.field_array<16>();
            if (mv > static_cast<std::uint32_t>(INT32_MAX)) return std::nullopt;
            msg.body = Flow3{*env, Opening{Move{static_cast<int>(mv)}, nonce}};
            break;
        }
        default:
            return std::nullopt;
    }
    if (!r.done()) return std::nullopt;
    return msg;
}

/* ------------------------------------------------------------------ */
/* Committer                                                           */

Committer::Committer(CommitContext ctx, Variant variant, KeyPair keys, PublicKey responder_pub,
                     std::string responder_id)
    : ctx_(std::move(ctx)),
      variant_(std::move(variant)),
      keys_(std::move(keys)),
      responder_pub_(responder_pub),
      responder_id_(std::move(responder_id)) {}

ProtocolError Committer::fail(ProtocolError err) {
    state_ = State::Failed;
    return err;
}

FlowMessage Committer::start(Move move, SeededRng& rng) {
    if (state_ != State::Init)
        throw DomainError(ErrorCode::SequencingViolation, "committer already started");
    if (!variant_.valid(move)) throw std::invalid_argument("move out of range for variant");

    move_ = move;
    nonce_ = new_nonce(rng);
    const Commitment c = commit(ctx_, move_, nonce_);
    sent_envelope_ = Envelope{c, keys_.sign(committer_sign_bytes(ctx_, c)), std::nullopt};
    state_ = State::Committed;
    return FlowMessage{FlowHeader{ctx_.match_id, ctx_.game_index, ctx_.committer_id, 1},
                       Flow1{sent_envelope_}};
}

std::variant<Committer::Flow2Result, ProtocolError> Committer::on_flow2(const FlowMessage& msg,
                                                                        CheckLog* checks) {
    if (state_ != State::Committed) return fail(ProtocolError::OutOfOrderMessage);

    const FlowHeader expected{ctx_.match_id, ctx_.game_index, responder_id_, 2};
    const bool header_ok = msg.header == expected;
    log_check(checks, "header", header_ok);
    if (!header_ok) return fail(ProtocolError::OutOfOrderMessage);

    const Flow2* f2 = std::get_if<Flow2>(&msg.body);
    if (f2 == nullptr) return fail(ProtocolError::MalformedMessage);
    if (!variant_.valid(f2->responder_move)) return fail(ProtocolError::MalformedMessage);

    // The envelope must come back byte-identical to the one sent out; a
    // fresh envelope, however well signed, is a swap.
    const bool same_envelope = f2->envelope.encode_base() == sent_envelope_.encode_base();
    log_check(checks, "envelope_match", same_envelope);
    if (!same_envelope) return fail(ProtocolError::SwapDetected);

    const bool own_sig_ok = verify_sig(keys_.public_key(),
                                       committer_sign_bytes(ctx_, f2->envelope.commitment),
                                       f2->envelope.committer_sig);
    log_check(checks, "committer_sig", own_sig_ok);
    if (!own_sig_ok) return fail(ProtocolError::SwapDetected);

    const bool countersigned = f2->envelope.responder_sig.has_value();
    bool counter_ok = countersigned &&
                      verify_sig(responder_pub_,
                                 responder_sign_bytes(ctx_, f2->envelope.commitment,
                                                      f2->envelope.committer_sig),
                                 *f2->envelope.responder_sig);
    log_check(checks, "responder_sig", counter_ok);
    if (!counter_ok) return fail(ProtocolError::InvalidResponderSignature);

    state_ = State::OutcomeKnown;
    FlowMessage flow3{FlowHeader{ctx_.match_id, ctx_.game_index, ctx_.committer_id, 3},
                      Flow3{f2->envelope, Opening{move_, nonce_}}};
    return Flow2Result{std::move(flow3), outcome(variant_, move_, f2->responder_move),
                       f2->responder_move};
}

void Committer::finish() {
    if (state_ != State::OutcomeKnown)
        throw DomainError(ErrorCode::SequencingViolation, "committer cannot finish before the outcome is known");
    state_ = State::Done;
}

/* ------------------------------------------------------------------ */
/* Responder                                                           */

Responder::Responder(CommitContext ctx, Variant variant, KeyPair keys, PublicKey committer_pub,
                     std::string own_id)
    : ctx_(std::move(ctx)),
      variant_(std::move(variant)),
      keys_(std::move(keys)),
      committer_pub_(committer_pub),
      own_id_(std::move(own_id)) {}

ProtocolError Responder::fail(ProtocolError err) {
    state_ = State::Failed;
    return err;
}

std::variant<FlowMessage, ProtocolError> Responder::on_flow1(const FlowMessage& msg, Move own_move,
                                                             CheckLog* checks) {
    if (state_ != State::AwaitingFlow1) return fail(ProtocolError::OutOfOrderMessage);

    const FlowHeader expected{ctx_.match_id, ctx_.game_index, ctx_.committer_id, 1};
    const bool header_ok = msg.header == expected;
    log_check(checks, "header", header_ok);
    if (!header_ok) return fail(ProtocolError::OutOfOrderMessage);

    const Flow1* f1 = std::get_if<Flow1>(&msg.body);
    if (f1 == nullptr || f1->envelope.responder_sig.has_value())
        return fail(ProtocolError::MalformedMessage);
    if (!variant_.valid(own_move)) throw std::invalid_argument("own move out of range for variant");

    const bool sig_ok = verify_sig(committer_pub_,
                                   committer_sign_bytes(ctx_, f1->envelope.commitment),
                                   f1->envelope.committer_sig);
    log_check(checks, "committer_sig", sig_ok);
    if (!sig_ok) return fail(ProtocolError::InvalidCommitterSignature);

    Envelope countersigned = f1->envelope;
    countersigned.responder_sig =
        keys_.sign(responder_sign_bytes(ctx_, countersigned.commitment, countersigned.committer_sig));

    own_move_ = own_move;
    countersigned_envelope_ = countersigned;
    state_ = State::Responded;
    return FlowMessage{FlowHeader{ctx_.match_id, ctx_.game_index, own_id_, 2},
                       Flow2{std::move(countersigned), own_move}};
}

std::variant<Responder::Flow3Result, ProtocolError> Responder::on_flow3(const FlowMessage& msg,
                                                                        CheckLog* checks) {
    if (state_ != State::Responded) return fail(ProtocolError::OutOfOrderMessage);

    const FlowHeader expected{ctx_.match_id, ctx_.game_index, ctx_.committer_id, 3};
    const bool header_ok = msg.header == expected;
    log_check(checks, "header", header_ok);
    if (!header_ok) return fail(ProtocolError::OutOfOrderMessage);

    const Flow3* f3 = std::get_if<Flow3>(&msg.body);
    if (f3 == nullptr) return fail(ProtocolError::MalformedMessage);

    // Own countersignature must still be on the exact envelope stored at
    // flow 2, or the committer swapped it on the way back.
    const bool same_envelope = f3->envelope.encode() == countersigned_envelope_.encode();
    log_check(checks, "envelope_match", same_envelope);
    if (!same_envelope) return fail(ProtocolError::SwapDetected);

    const bool opening_ok = verify_opening(ctx_, f3->envelope.commitment, f3->opening);
    log_check(checks, "opening", opening_ok);
    if (!opening_ok) return fail(ProtocolError::BadOpening);

    state_ = State::Complete;
    return Flow3Result{outcome(variant_, f3->opening.move, own_move_), f3->opening.move};
}

/* ------------------------------------------------------------------ */
/* Match                                                               */

Match::Match(MatchId id, std::string player_a, std::string player_b, Variant variant,
             int games_per_match)
    : id_(id),
      a_(std::move(player_a)),
      b_(std::move(player_b)),
      variant_(std::move(variant)),
      games_per_match_(games_per_match) {
    if (games_per_match_ < 1) throw std::invalid_argument("games_per_match must be positive");
    if (a_ == b_) throw std::invalid_argument("players must be distinct");
}

std::optional<Match::NextGame> Match::next_game() {
    if (game_open_)
        throw DomainError(ErrorCode::SequencingViolation,
                          "game " + std::to_string(games_.size()) + " is still in flight");
    if (complete()) return std::nullopt;
    const auto k = static_cast<std::uint32_t>(games_.size());
    const std::string& committer = committer_for(k);
    const std::string& responder = k % 2 == 0 ? b_ : a_;
    game_open_ = true;
    return NextGame{CommitContext{id_, k, committer, static_cast<std::uint32_t>(variant_.size())},
                    committer, responder};
}

void Match::record_game(GameRow row) {
    if (!game_open_) throw DomainError(ErrorCode::SequencingViolation, "no game in flight");
    games_.push_back(std::move(row));
    game_open_ = false;
}

bool Match::complete() const {
    return static_cast<int>(games_.size()) >= games_per_match_;
}

Match::Tally Match::tally() const {
    if (!complete())
        throw DomainError(ErrorCode::MatchIncomplete,
                          "only " + std::to_string(games_.size()) + " of " +
                              std::to_string(games_per_match_) + " games played");
    Tally t;
    for (const GameRow& g : games_) {
        if (g.outcome == GameOutcome::Draw) {
            ++t.draws;
            continue;
        }
        const bool committer_won = g.outcome == GameOutcome::FirstWins;
        const std::string& winner = committer_won ? g.committer_id : (g.committer_id == a_ ? b_ : a_);
        if (winner == a_)
            ++t.wins_a;
        else
            ++t.wins_b;
    }
    t.points = match_points(t.wins_a, t.wins_b, games_per_match_);
    return t;
}

}  // namespace rps
