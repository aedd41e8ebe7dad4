#include "rps/sim.hpp"

#include <memory>
#include <queue>
#include <utility>

namespace rps {

const char* to_string(AdversaryKind kind) {
    switch (kind) {
        case AdversaryKind::Swap: return "swap";
        case AdversaryKind::Tamper: return "tamper";
        case AdversaryKind::Equivocate: return "equivocate";
        case AdversaryKind::Replay: return "replay";
        case AdversaryKind::Drop: return "drop";
        case AdversaryKind::Peek: return "peek";
    }
    return "?";
}

std::optional<AdversaryKind> adversary_kind_from_string(const std::string& name) {
    if (name == "swap") return AdversaryKind::Swap;
    if (name == "tamper") return AdversaryKind::Tamper;
    if (name == "equivocate") return AdversaryKind::Equivocate;
    if (name == "replay") return AdversaryKind::Replay;
    if (name == "drop") return AdversaryKind::Drop;
    if (name == "peek") return AdversaryKind::Peek;
    return std::nullopt;
}

/* ------------------------------------------------------------------ */
/* Adversary                                                           */

Adversary::Adversary(AdversarySpec spec, std::uint32_t variant_n)
    : spec_(spec), variant_n_(variant_n) {
    if (spec_.flow_number < 1 || spec_.flow_number > 3)
        throw DomainError(ErrorCode::ConfigError, "adversary flow_number must be 1..3");
    if (spec_.kind == AdversaryKind::Equivocate && spec_.flow_number != 3)
        throw DomainError(ErrorCode::ConfigError, "equivocate applies to flow 3 (the opening)");
    if (spec_.replacement_move &&
        (*spec_.replacement_move < 0 ||
         static_cast<std::uint32_t>(*spec_.replacement_move) >= variant_n_))
        throw DomainError(ErrorCode::ConfigError, "adversary replacement_move out of range");
}

bool Adversary::matches_target(const FlowMessage& msg) const {
    return msg.header.game_index == spec_.game_index && msg.header.flow_number == spec_.flow_number;
}

std::optional<FlowMessage> Adversary::intercept(const FlowMessage& msg,
                                                const std::string& committer_id, SeededRng& rng) {
    last_guess_.reset();
    switch (spec_.kind) {
        case AdversaryKind::Peek: {
            if (msg.header.flow_number == 1) {
                // best available guess from public bytes: fold the digest
                const Digest& d = msg.envelope().commitment.digest;
                std::uint64_t v = 0;
                for (int i = 0; i < 8; ++i) v = (v << 8) | d[static_cast<std::size_t>(i)];
                last_guess_ = static_cast<int>(v % variant_n_);
                fired_ = true;
            }
            return msg;
        }
        case AdversaryKind::Drop: {
            if (!fired_ && matches_target(msg)) {
                fired_ = true;
                return std::nullopt;
            }
            return msg;
        }
        case AdversaryKind::Tamper: {
            if (!fired_ && matches_target(msg)) {
                fired_ = true;
                FlowMessage m = msg;
                std::visit([](auto& b) { b.envelope.commitment.digest[0] ^= 0x01; }, m.body);
                return m;
            }
            return msg;
        }
        case AdversaryKind::Swap: {
            if (!fired_ && matches_target(msg)) {
                fired_ = true;
                // a fresh, well-formed envelope committed by the attacker
                FlowMessage m = msg;
                const KeyPair attacker = KeyPair::generate(rng);
                const CommitContext ctx{msg.header.match_id, msg.header.game_index, committer_id,
                                        variant_n_};
                const Nonce nonce = new_nonce(rng);
                const Move mv{spec_.replacement_move.value_or(0)};
                const Commitment c = commit(ctx, mv, nonce);
                Envelope env{c, attacker.sign(committer_sign_bytes(ctx, c)), std::nullopt};
                if (msg.envelope().responder_sig)
                    env.responder_sig = attacker.sign(responder_sign_bytes(ctx, c, env.committer_sig));
                std::visit([&env](auto& b) { b.envelope = env; }, m.body);
                return m;
            }
            return msg;
        }
        case AdversaryKind::Replay: {
            if (!fired_ && matches_target(msg) && recorded_envelope_) {
                fired_ = true;
                FlowMessage m = msg;
                std::visit([this](auto& b) { b.envelope = *recorded_envelope_; }, m.body);
                return m;
            }
            if (!recorded_envelope_ && !matches_target(msg) && msg.envelope().responder_sig)
                recorded_envelope_ = msg.envelope();
            return msg;
        }
        case AdversaryKind::Equivocate: {
            if (!fired_ && matches_target(msg)) {
                FlowMessage m = msg;
                if (Flow3* f3 = std::get_if<Flow3>(&m.body)) {
                    fired_ = true;
                    const int committed = f3->opening.move.index;
                    int repl = spec_.replacement_move.value_or(committed + 1);
                    if (repl == committed) repl = committed + 1;
                    f3->opening.move = Move{repl % static_cast<int>(variant_n_)};
                    return m;
                }
            }
            return msg;
        }
    }
    return msg;
}

/* ------------------------------------------------------------------ */
/* Event loop                                                          */

namespace {

struct DeliverPayload {
    FlowMessage msg;
    std::string from;
    std::string to;
    std::optional<int> peek_guess;
};

struct TimeoutPayload {
    std::string party;
    std::uint32_t game;
    std::uint8_t flow;  // the flow the party is waiting for
};

struct QueuedEvent {
    std::int64_t tick;
    std::uint64_t order;  // insertion order breaks ties within a tick
    std::variant<DeliverPayload, TimeoutPayload> payload;
};

struct LaterEvent {
    bool operator()(const QueuedEvent& x, const QueuedEvent& y) const {
        if (x.tick != y.tick) return x.tick > y.tick;
        return x.order > y.order;
    }
};

std::string msg_digest_hex(const FlowMessage& msg) {
    return to_hex(sha256(msg.encode()));
}

class SimRun {
public:
    explicit SimRun(const SimConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

    SimReport run();

private:
    struct PlayerRt {
        std::string id;
        std::optional<KeyPair> keys;
        std::unique_ptr<Strategy> strategy;
        std::vector<GameView> history;
        std::optional<Committer> committer;
        std::optional<Responder> responder;
        std::optional<std::pair<std::uint32_t, std::uint8_t>> awaiting;
    };

    void validate_config() const;

    PlayerRt& rt(const std::string& id) { return id == a_.id ? a_ : b_; }

    void record(TraceEvent::Kind kind, const std::string& actor, Detail detail) {
        trace_.events.push_back(TraceEvent{now_, seq_++, actor, kind, std::move(detail)});
    }

    // one RngDraw line per logical draw made since `before`
    void record_draws(const char* purpose, const std::string& actor, std::uint64_t before) {
        for (std::uint64_t i = before; i < rng_.draws(); ++i)
            record(TraceEvent::Kind::RngDraw, actor, Detail{{"purpose", std::string(purpose)}});
    }

    void record_verifies(const CheckLog& checks, const std::string& actor, std::uint32_t game,
                         int flow) {
        for (const VerifyCheck& c : checks)
            record(TraceEvent::Kind::Verify, actor,
                   Detail{{"check", std::string(c.check)},
                          {"ok", c.ok},
                          {"game", static_cast<std::int64_t>(game)},
                          {"flow", static_cast<std::int64_t>(flow)}});
    }

    void record_decide(const std::string& actor, std::uint32_t game, Move committer_move,
                       Move responder_move, GameOutcome oc, const std::string& committer_id,
                       const std::string& responder_id) {
        Detail d{{"game", static_cast<std::int64_t>(game)},
                 {"committer_move", static_cast<std::int64_t>(committer_move.index)},
                 {"responder_move", static_cast<std::int64_t>(responder_move.index)}};
        if (oc == GameOutcome::FirstWins)
            d["winner"] = committer_id;
        else if (oc == GameOutcome::SecondWins)
            d["winner"] = responder_id;
        record(TraceEvent::Kind::Decide, actor, std::move(d));
    }

    void abort_match(ProtocolError err, const std::string& actor, std::uint32_t game, int flow) {
        const bool is_committer = match_->committer_for(game) == actor;
        record(TraceEvent::Kind::Error, actor,
               Detail{{"error", std::string(to_string(err))},
                      {"game", static_cast<std::int64_t>(game)},
                      {"flow", static_cast<std::int64_t>(flow)},
                      {"role", std::string(is_committer ? "committer" : "responder")}});
        trace_.status = TerminalStatus::Aborted;
        trace_.abort_error = err;
        terminal_ = true;
    }

    void push(std::int64_t tick, std::variant<DeliverPayload, TimeoutPayload> payload) {
        queue_.push(QueuedEvent{tick, order_++, std::move(payload)});
    }

    void start_next_game();
    void send(FlowMessage msg, const std::string& from, const std::string& to);
    void on_deliver(DeliverPayload& p);
    void on_timeout(const TimeoutPayload& p);

    const SimConfig& cfg_;
    SeededRng rng_;
    Trace trace_;
    std::uint64_t seq_ = 0;
    std::uint64_t order_ = 0;
    std::int64_t now_ = 0;
    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, LaterEvent> queue_;
    std::optional<Match> match_;
    std::optional<Adversary> adversary_;
    PlayerRt a_;
    PlayerRt b_;
    MatchId match_id_{};
    bool terminal_ = false;
};

void SimRun::validate_config() const {
    if (cfg_.latency.min_days < 1 || cfg_.latency.max_days < cfg_.latency.min_days)
        throw DomainError(ErrorCode::ConfigError, "latency bounds must satisfy 1 <= min <= max");
    if (cfg_.timeout_days < 1)
        throw DomainError(ErrorCode::ConfigError, "timeout_days must be positive");
    if (cfg_.games_per_match < 1)
        throw DomainError(ErrorCode::ConfigError, "games_per_match must be positive");
    if (cfg_.player_a.id.empty() || cfg_.player_b.id.empty())
        throw DomainError(ErrorCode::ConfigError, "player ids must be non-empty");
    if (cfg_.player_a.id == cfg_.player_b.id)
        throw DomainError(ErrorCode::ConfigError, "player ids must be distinct");
    if (cfg_.player_a.id == "post" || cfg_.player_b.id == "post")
        throw DomainError(ErrorCode::ConfigError, "\"post\" is reserved for the network");
}

void SimRun::start_next_game() {
    auto ng = match_->next_game();
    if (!ng) {
        trace_.status = TerminalStatus::MatchComplete;
        terminal_ = true;
        return;
    }
    PlayerRt& c = rt(ng->committer_id);
    PlayerRt& r = rt(ng->responder_id);
    c.committer.emplace(ng->context, cfg_.variant, *c.keys, r.keys->public_key(), r.id);
    r.responder.emplace(ng->context, cfg_.variant, *r.keys, c.keys->public_key(), r.id);

    std::uint64_t before = rng_.draws();
    const Move mv = c.strategy->next_move(cfg_.variant, c.history, rng_);
    record_draws("strategy", c.id, before);

    before = rng_.draws();
    FlowMessage flow1 = c.committer->start(mv, rng_);
    record_draws("nonce", c.id, before);

    send(std::move(flow1), c.id, r.id);
}

void SimRun::send(FlowMessage msg, const std::string& from, const std::string& to) {
    const std::uint32_t game = msg.header.game_index;
    const std::uint8_t flow = msg.header.flow_number;
    const std::string& committer_id = match_->committer_for(game);

    // A dishonest committer malforms the message before it is ever mailed.
    if (adversary_ && adversary_->spec().kind == AdversaryKind::Equivocate) {
        const std::uint64_t before = rng_.draws();
        msg = *adversary_->intercept(msg, committer_id, rng_);
        record_draws("adversary", "post", before);
    }

    record(TraceEvent::Kind::Send, from,
           Detail{{"flow", static_cast<std::int64_t>(flow)},
                  {"game", static_cast<std::int64_t>(game)},
                  {"from", from},
                  {"to", to},
                  {"msg_sha256", msg_digest_hex(msg)}});

    std::optional<FlowMessage> forwarded = std::move(msg);
    std::optional<int> peek_guess;
    if (adversary_ && adversary_->spec().kind != AdversaryKind::Equivocate) {
        const std::uint64_t before = rng_.draws();
        forwarded = adversary_->intercept(*forwarded, committer_id, rng_);
        record_draws("adversary", "post", before);
        peek_guess = adversary_->last_peek_guess();
    }

    if (forwarded) {
        const std::uint64_t before = rng_.draws();
        const auto latency = rng_.uniform_int(cfg_.latency.min_days, cfg_.latency.max_days);
        record_draws("latency", "post", before);
        push(now_ + latency, DeliverPayload{std::move(*forwarded), from, to, peek_guess});
    }

    // The sender now waits for the next flow; flow 3 answers nothing.
    if (flow < 3) {
        rt(from).awaiting = std::make_pair(game, static_cast<std::uint8_t>(flow + 1));
        push(now_ + cfg_.timeout_days, TimeoutPayload{from, game, static_cast<std::uint8_t>(flow + 1)});
    }
}

void SimRun::on_deliver(DeliverPayload& p) {
    const std::uint32_t game = p.msg.header.game_index;
    const std::uint8_t flow = p.msg.header.flow_number;
    PlayerRt& to = rt(p.to);

    Detail d{{"flow", static_cast<std::int64_t>(flow)},
             {"game", static_cast<std::int64_t>(game)},
             {"from", p.from},
             {"to", p.to},
             {"msg_sha256", msg_digest_hex(p.msg)}};
    if (p.peek_guess) d["peek_guess"] = static_cast<std::int64_t>(*p.peek_guess);
    record(TraceEvent::Kind::Deliver, "post", std::move(d));

    if (to.awaiting && *to.awaiting == std::make_pair(game, flow)) to.awaiting.reset();

    switch (flow) {
        case 1: {
            if (!to.responder) {
                abort_match(ProtocolError::OutOfOrderMessage, p.to, game, flow);
                return;
            }
            std::uint64_t before = rng_.draws();
            const Move mv = to.strategy->next_move(cfg_.variant, to.history, rng_);
            record_draws("strategy", p.to, before);

            CheckLog checks;
            auto res = to.responder->on_flow1(p.msg, mv, &checks);
            record_verifies(checks, p.to, game, flow);
            if (const auto* err = std::get_if<ProtocolError>(&res)) {
                abort_match(*err, p.to, game, flow);
                return;
            }
            send(std::move(std::get<FlowMessage>(res)), p.to, p.from);
            return;
        }
        case 2: {
            if (!to.committer) {
                abort_match(ProtocolError::OutOfOrderMessage, p.to, game, flow);
                return;
            }
            CheckLog checks;
            auto res = to.committer->on_flow2(p.msg, &checks);
            record_verifies(checks, p.to, game, flow);
            if (const auto* err = std::get_if<ProtocolError>(&res)) {
                abort_match(*err, p.to, game, flow);
                return;
            }
            auto& ok = std::get<Committer::Flow2Result>(res);
            record_decide(p.to, game, to.committer->move(), ok.responder_move, ok.outcome, p.to,
                          p.from);
            send(std::move(ok.flow3), p.to, p.from);
            return;
        }
        case 3: {
            if (!to.responder) {
                abort_match(ProtocolError::OutOfOrderMessage, p.to, game, flow);
                return;
            }
            CheckLog checks;
            auto res = to.responder->on_flow3(p.msg, &checks);
            record_verifies(checks, p.to, game, flow);
            if (const auto* err = std::get_if<ProtocolError>(&res)) {
                abort_match(*err, p.to, game, flow);
                return;
            }
            const auto& ok = std::get<Responder::Flow3Result>(res);
            const Move responder_move = to.responder->own_move();
            record_decide(p.to, game, ok.committer_move, responder_move, ok.outcome, p.from, p.to);

            PlayerRt& committer = rt(p.from);
            committer.committer->finish();
            match_->record_game(
                Match::GameRow{p.from, ok.committer_move, responder_move, ok.outcome});
            committer.history.push_back(GameView{ok.committer_move, responder_move, ok.outcome});
            to.history.push_back(GameView{responder_move, ok.committer_move, flip(ok.outcome)});
            committer.committer.reset();
            to.responder.reset();

            start_next_game();
            return;
        }
        default:
            abort_match(ProtocolError::MalformedMessage, p.to, game, flow);
            return;
    }
}

void SimRun::on_timeout(const TimeoutPayload& p) {
    PlayerRt& party = rt(p.party);
    if (!party.awaiting || *party.awaiting != std::make_pair(p.game, p.flow)) return;
    abort_match(ProtocolError::Timeout, p.party, p.game, p.flow);
}

SimReport SimRun::run() {
    validate_config();

    std::uint64_t before = rng_.draws();
    match_id_ = new_match_id(rng_);
    record_draws("match_id", "post", before);

    a_.id = cfg_.player_a.id;
    b_.id = cfg_.player_b.id;
    before = rng_.draws();
    a_.keys = KeyPair::generate(rng_);
    record_draws("keygen", a_.id, before);
    before = rng_.draws();
    b_.keys = KeyPair::generate(rng_);
    record_draws("keygen", b_.id, before);

    a_.strategy = make_strategy(cfg_.player_a.strategy, cfg_.variant);
    b_.strategy = make_strategy(cfg_.player_b.strategy, cfg_.variant);

    match_.emplace(match_id_, a_.id, b_.id, cfg_.variant, cfg_.games_per_match);
    if (cfg_.adversary)
        adversary_.emplace(*cfg_.adversary, static_cast<std::uint32_t>(cfg_.variant.size()));

    start_next_game();

    while (!terminal_ && !queue_.empty()) {
        QueuedEvent ev = queue_.top();
        queue_.pop();
        now_ = ev.tick;
        if (auto* del = std::get_if<DeliverPayload>(&ev.payload))
            on_deliver(*del);
        else
            on_timeout(std::get<TimeoutPayload>(ev.payload));
    }
    if (!terminal_) {
        // queue exhausted with the match still open: nothing left that could
        // ever wake it up
        trace_.status = TerminalStatus::Aborted;
        trace_.abort_error = ProtocolError::Timeout;
    }

    SimReport report;
    report.match_id = match_id_;
    report.trace = std::move(trace_);
    for (const Match::GameRow& g : match_->games()) {
        std::string winner;
        if (g.outcome == GameOutcome::FirstWins)
            winner = g.committer_id;
        else if (g.outcome == GameOutcome::SecondWins)
            winner = g.committer_id == a_.id ? b_.id : a_.id;
        report.games.push_back(GameResult{g.committer_id, g.committer_move, g.responder_move, winner});
    }
    if (report.trace.status == TerminalStatus::MatchComplete) {
        const Match::Tally t = match_->tally();
        report.tally = MatchTally{t.wins_a, t.wins_b, t.draws, t.points};
    }
    return report;
}

}  // namespace

SimReport run_simulation(const SimConfig& config) {
    return SimRun(config).run();
}

}  // namespace rps
