#include "rps/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rps/federation.hpp"

namespace rps {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

[[noreturn]] void config_fail(const std::string& msg) {
    throw DomainError(ErrorCode::ConfigError, msg);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&key](const char* k) { return key == k; }) == allowed.end())
            config_fail("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T get_as(const json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        config_fail(std::string("bad value for key '") + key + "' in " + where);
    }
}

StrategySpec parse_strategy(const json& jp, const std::string& where) {
    StrategySpec spec;
    spec.name = get_as<std::string>(jp, "strategy", where);
    if (jp.contains("move")) spec.move = get_as<int>(jp, "move", where);
    return spec;
}

}  // namespace

CliConfig load_cli_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) config_fail("cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        config_fail("config is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) config_fail("config root must be a JSON object");
    check_keys(doc,
               {"seed", "variant", "games_per_match", "latency", "timeout_days", "players",
                "adversary", "registry"},
               "config");

    CliConfig cfg;
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
            config_fail("bad value for key 'seed' in config");
        cfg.seed = doc["seed"].get<std::uint64_t>();
        cfg.has_seed = true;
    }
    if (doc.contains("variant")) {
        const json& jv = doc["variant"];
        if (!jv.is_object()) config_fail("'variant' must be an object");
        check_keys(jv, {"n", "move_names"}, "variant");
        const int n = jv.contains("n") ? get_as<int>(jv, "n", "variant") : 3;
        std::vector<std::string> names;
        if (jv.contains("move_names")) names = get_as<std::vector<std::string>>(jv, "move_names", "variant");
        cfg.variant = Variant::validate(n, std::move(names));
    }
    if (doc.contains("games_per_match")) {
        cfg.games_per_match = get_as<int>(doc, "games_per_match", "config");
        if (cfg.games_per_match < 1) config_fail("'games_per_match' must be positive");
    }
    if (doc.contains("latency")) {
        const json& jl = doc["latency"];
        if (!jl.is_object()) config_fail("'latency' must be an object");
        check_keys(jl, {"min_days", "max_days"}, "latency");
        if (jl.contains("min_days")) cfg.latency.min_days = get_as<int>(jl, "min_days", "latency");
        if (jl.contains("max_days")) cfg.latency.max_days = get_as<int>(jl, "max_days", "latency");
    }
    if (doc.contains("timeout_days")) cfg.timeout_days = get_as<int>(doc, "timeout_days", "config");
    if (doc.contains("players")) {
        const json& jps = doc["players"];
        if (!jps.is_array()) config_fail("'players' must be an array");
        for (const json& jp : jps) {
            if (!jp.is_object()) config_fail("each player must be an object");
            check_keys(jp, {"id", "name", "strategy", "move"}, "player");
            PlayerSpec p;
            p.id = get_as<std::string>(jp, "id", "player");
            if (jp.contains("name")) p.display_name = get_as<std::string>(jp, "name", "player");
            if (p.display_name.empty()) p.display_name = p.id;
            p.strategy = parse_strategy(jp, "player '" + p.id + "'");
            cfg.players.push_back(std::move(p));
        }
    }
    if (doc.contains("adversary")) {
        const json& ja = doc["adversary"];
        if (!ja.is_object()) config_fail("'adversary' must be an object");
        check_keys(ja, {"kind", "game_index", "flow_number", "replacement_move"}, "adversary");
        AdversarySpec spec;
        const auto kind_name = get_as<std::string>(ja, "kind", "adversary");
        const auto kind = adversary_kind_from_string(kind_name);
        if (!kind) config_fail("unknown adversary kind '" + kind_name + "'");
        spec.kind = *kind;
        spec.flow_number = spec.kind == AdversaryKind::Equivocate ? 3 : 1;
        if (ja.contains("game_index"))
            spec.game_index = static_cast<std::uint32_t>(get_as<int>(ja, "game_index", "adversary"));
        if (ja.contains("flow_number"))
            spec.flow_number = static_cast<std::uint8_t>(get_as<int>(ja, "flow_number", "adversary"));
        if (ja.contains("replacement_move"))
            spec.replacement_move = get_as<int>(ja, "replacement_move", "adversary");
        cfg.adversary = spec;
    }
    if (doc.contains("registry")) cfg.registry_path = get_as<std::string>(doc, "registry", "config");
    return cfg;
}

namespace {

/* ------------------------------------------------------------------ */
/* shared output helpers                                               */

std::string points_str(int p) {
    return (p >= 0 ? "+" : "") + std::to_string(p);
}

std::string game_line(const Variant& variant, std::size_t index, const GameResult& g,
                      const std::string& id_a, const std::string& id_b) {
    const std::string& responder = g.committer_id == id_a ? id_b : id_a;
    std::string line = "game " + std::to_string(index) + ": " + g.committer_id + "[" +
                       variant.move_name(g.committer_move) + "] vs " + responder + "[" +
                       variant.move_name(g.responder_move) + "] -> ";
    line += g.winner_id.empty() ? "draw" : g.winner_id;
    return line;
}

void print_standings(std::ostream& out, const std::vector<PlayerRecord>& rows) {
    std::size_t id_w = 2;
    std::size_t name_w = 4;
    std::size_t rank_w = 7;
    for (const PlayerRecord& p : rows) {
        id_w = std::max(id_w, p.id.size());
        name_w = std::max(name_w, p.name.size());
        rank_w = std::max(rank_w, format_ranking(p.ranking_halves).size());
    }
    out << std::left << std::setw(static_cast<int>(id_w)) << "id" << "  "
        << std::setw(static_cast<int>(name_w)) << "name" << "  " << std::right
        << std::setw(static_cast<int>(rank_w)) << "ranking" << "  " << std::setw(7) << "matches"
        << "\n";
    for (const PlayerRecord& p : rows) {
        out << std::left << std::setw(static_cast<int>(id_w)) << p.id << "  "
            << std::setw(static_cast<int>(name_w)) << p.name << "  " << std::right
            << std::setw(static_cast<int>(rank_w)) << format_ranking(p.ranking_halves) << "  "
            << std::setw(7) << p.matches << "\n";
    }
}

SimConfig to_sim_config(const CliConfig& cfg, const PlayerSpec& a, const PlayerSpec& b,
                        std::uint64_t seed) {
    SimConfig sc;
    sc.seed = seed;
    sc.variant = cfg.variant;
    sc.games_per_match = cfg.games_per_match;
    sc.latency = cfg.latency;
    sc.timeout_days = cfg.timeout_days;
    sc.player_a = a;
    sc.player_b = b;
    sc.adversary = cfg.adversary;
    return sc;
}

void require_seed(const CliConfig& cfg) {
    if (!cfg.has_seed) config_fail("missing required key 'seed' in config");
}

MatchRecord to_match_record(const SimReport& rep, const std::string& id_a, const std::string& id_b) {
    MatchRecord rec;
    rec.match_id_hex = to_hex(rep.match_id);
    rec.player_a = id_a;
    rec.player_b = id_b;
    for (const GameResult& g : rep.games)
        rec.games.push_back(
            GameLine{g.committer_id, g.committer_move.index, g.responder_move.index, g.winner_id});
    if (rep.tally) {
        rec.wins_a = rep.tally->wins_a;
        rec.wins_b = rep.tally->wins_b;
        rec.draws = rep.tally->draws;
        rec.points_a = rep.tally->points.first;
        rec.status = "MatchComplete";
    } else {
        for (const GameResult& g : rep.games) {
            if (g.winner_id.empty())
                ++rec.draws;
            else if (g.winner_id == id_a)
                ++rec.wins_a;
            else
                ++rec.wins_b;
        }
        rec.status = "Aborted:" +
                     std::string(rep.trace.abort_error ? to_string(*rep.trace.abort_error) : "unknown");
    }
    return rec;
}

/* ------------------------------------------------------------------ */
/* subcommands                                                         */

int cmd_play(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
             const std::optional<std::string>& trace_path, std::ostream& out, std::ostream& err) {
    CliConfig cfg = load_cli_config(config_path);
    if (seed_flag) {
        cfg.seed = *seed_flag;
        cfg.has_seed = true;
    }
    require_seed(cfg);
    if (cfg.players.size() != 2) config_fail("'players' must list exactly 2 players for play");

    const SimConfig sc = to_sim_config(cfg, cfg.players[0], cfg.players[1], cfg.seed);
    const SimReport rep = run_simulation(sc);

    out << "match " << to_hex(rep.match_id) << " " << sc.player_a.id << " vs " << sc.player_b.id
        << " n=" << cfg.variant.size() << " games=" << cfg.games_per_match << " seed=" << cfg.seed
        << "\n";
    for (std::size_t i = 0; i < rep.games.size(); ++i)
        out << game_line(cfg.variant, i, rep.games[i], sc.player_a.id, sc.player_b.id) << "\n";

    if (trace_path) {
        std::ofstream tf(*trace_path, std::ios::binary | std::ios::trunc);
        if (!tf) {
            err << "error: cannot write trace file " << *trace_path << "\n";
            return 1;
        }
        tf << rep.trace.to_jsonl();
    }

    if (!rep.tally) {
        out << "ABORTED: " << (rep.trace.abort_error ? to_string(*rep.trace.abort_error) : "unknown")
            << "\n";
        return 2;
    }
    out << "tally: " << sc.player_a.id << " " << rep.tally->wins_a << ", " << sc.player_b.id << " "
        << rep.tally->wins_b << ", draws " << rep.tally->draws << "\n";
    out << "points: " << sc.player_a.id << " " << points_str(rep.tally->points.first) << ", "
        << sc.player_b.id << " " << points_str(rep.tally->points.second) << "\n";
    out << "status: MatchComplete\n";
    out << "trace: " << trace_digest(rep.trace) << "\n";
    return 0;
}

int cmd_tournament(const std::string& config_path, int rounds, std::ostream& out, std::ostream&) {
    CliConfig cfg = load_cli_config(config_path);
    require_seed(cfg);
    if (cfg.players.size() < 2) config_fail("'players' must list at least 2 players for tournament");
    if (!cfg.registry_path) config_fail("missing required key 'registry' in config");
    if (rounds < 1) config_fail("--rounds must be positive");

    const fs::path reg_path = *cfg.registry_path;
    Registry registry;
    if (fs::exists(reg_path)) {
        registry = Registry::load(reg_path);
        for (const PlayerSpec& p : cfg.players)
            if (!registry.has(p.id))
                throw DomainError(ErrorCode::UnknownPlayer, "player '" + p.id + "' not registered");
    } else {
        // bootstrap: a fresh registry file starts everyone at 100.0
        for (const PlayerSpec& p : cfg.players) registry.register_player(p.id, p.display_name);
        registry.save(reg_path);
    }

    std::uint64_t match_index = 0;
    for (int round = 0; round < rounds; ++round) {
        for (std::size_t i = 0; i < cfg.players.size(); ++i) {
            for (std::size_t j = i + 1; j < cfg.players.size(); ++j) {
                const PlayerSpec& pa = cfg.players[i];
                const PlayerSpec& pb = cfg.players[j];
                const SimConfig sc =
                    to_sim_config(cfg, pa, pb, derive_seed(cfg.seed, match_index));
                const SimReport rep = run_simulation(sc);
                registry.record_match(to_match_record(rep, pa.id, pb.id));
                registry.save(reg_path);

                out << "round " << round + 1 << " match " << match_index << ": " << pa.id << " vs "
                    << pb.id << " -> ";
                if (rep.tally) {
                    out << rep.tally->wins_a << "-" << rep.tally->wins_b << "-" << rep.tally->draws
                        << ", points " << points_str(rep.tally->points.first) << "/"
                        << points_str(rep.tally->points.second) << "\n";
                } else {
                    out << "ABORTED: "
                        << (rep.trace.abort_error ? to_string(*rep.trace.abort_error) : "unknown")
                        << "\n";
                }
                ++match_index;
            }
        }
    }
    out << "\n";
    print_standings(out, registry.standings());
    return 0;
}

int cmd_rankings(const std::string& registry_path, std::ostream& out, std::ostream&) {
    const Registry registry = Registry::load(registry_path);
    print_standings(out, registry.standings());
    return 0;
}

struct AttackExpectation {
    AdversarySpec spec;
    ProtocolError error;
    const char* role;
    int flow;
};

AttackExpectation attack_plan(AdversaryKind kind) {
    switch (kind) {
        case AdversaryKind::Swap:
            return {{AdversaryKind::Swap, 0, 2, std::nullopt}, ProtocolError::SwapDetected,
                    "committer", 2};
        case AdversaryKind::Tamper:
            return {{AdversaryKind::Tamper, 0, 1, std::nullopt},
                    ProtocolError::InvalidCommitterSignature, "responder", 1};
        case AdversaryKind::Equivocate:
            return {{AdversaryKind::Equivocate, 0, 3, std::nullopt}, ProtocolError::BadOpening,
                    "responder", 3};
        case AdversaryKind::Replay:
            return {{AdversaryKind::Replay, 1, 3, std::nullopt}, ProtocolError::SwapDetected,
                    "responder", 3};
        case AdversaryKind::Drop:
            return {{AdversaryKind::Drop, 0, 2, std::nullopt}, ProtocolError::Timeout, "committer",
                    2};
        case AdversaryKind::Peek:
            return {{AdversaryKind::Peek, 0, 1, std::nullopt}, ProtocolError::Timeout, "", 1};
    }
    throw std::logic_error("unreachable");
}

SimConfig attack_sim_config(std::uint64_t seed, std::optional<AdversarySpec> adversary) {
    SimConfig sc;
    sc.seed = seed;
    sc.player_a = PlayerSpec{"alice", "alice", StrategySpec{"uniform", std::nullopt}};
    sc.player_b = PlayerSpec{"bob", "bob", StrategySpec{"uniform", std::nullopt}};
    sc.adversary = adversary;
    return sc;
}

// Did the expected detection show up, on the expected side of the expected
// flow?
bool detection_matches(const SimReport& rep, const AttackExpectation& want) {
    if (rep.trace.status != TerminalStatus::Aborted || rep.trace.abort_error != want.error)
        return false;
    for (const TraceEvent& ev : rep.trace.events) {
        if (ev.kind != TraceEvent::Kind::Error) continue;
        return detail_str(ev, "error") == std::string(to_string(want.error)) &&
               detail_str(ev, "role") == std::string(want.role) &&
               detail_int(ev, "flow") == want.flow;
    }
    return false;
}

int cmd_attack(const std::string& kind_name, std::uint64_t seed, std::ostream& out,
               std::ostream&) {
    const auto kind = adversary_kind_from_string(kind_name);
    if (!kind) config_fail("unknown attack kind '" + kind_name + "'");

    if (*kind == AdversaryKind::Peek) {
        // 100 honest 10-game matches watched by a passive peeker; hiding
        // holds when its per-game guesses do no better than chance.
        const int matches = 100;
        int games = 0;
        int correct = 0;
        for (int m = 0; m < matches; ++m) {
            const SimConfig sc = attack_sim_config(
                derive_seed(seed, static_cast<std::uint64_t>(m)),
                AdversarySpec{AdversaryKind::Peek, 0, 1, std::nullopt});
            const SimReport rep = run_simulation(sc);
            for (const TraceEvent& ev : rep.trace.events) {
                if (ev.kind != TraceEvent::Kind::Deliver || detail_int(ev, "flow") != 1) continue;
                const auto guess = detail_int(ev, "peek_guess");
                const auto game = detail_int(ev, "game");
                if (!guess || !game) continue;
                ++games;
                if (*guess == rep.games[static_cast<std::size_t>(*game)].committer_move.index)
                    ++correct;
            }
        }
        const double n = 3.0;
        const double rate = static_cast<double>(correct) / games;
        const double expected = 1.0 / n;
        const double tolerance = 3.0 * std::sqrt(expected * (1.0 - expected) / games);
        std::ostringstream stats;
        stats << std::fixed << std::setprecision(4) << "guess rate " << rate << " over " << games
              << " games (chance " << expected << ", tolerance " << tolerance << ")";
        if (std::abs(rate - expected) <= tolerance) {
            out << "peek: " << stats.str() << "\n";
            out << "HIDING HOLDS: peek learned nothing beyond chance\n";
            return 0;
        }
        out << "peek: " << stats.str() << "\n";
        out << "UNDETECTED: peek beat the chance bound\n";
        return 3;
    }

    const AttackExpectation want = attack_plan(*kind);
    const SimReport rep = run_simulation(attack_sim_config(seed, want.spec));
    if (detection_matches(rep, want)) {
        out << "DETECTED: " << to_string(want.error) << " at " << want.role << ", flow "
            << want.flow << "\n";
        return 0;
    }
    out << "UNDETECTED: expected " << to_string(want.error) << " at " << want.role << ", flow "
        << want.flow << "; match ended "
        << (rep.trace.status == TerminalStatus::MatchComplete
                ? std::string("MatchComplete")
                : "Aborted:" + std::string(rep.trace.abort_error ? to_string(*rep.trace.abort_error)
                                                                 : "unknown"))
        << "\n";
    return 3;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"commit-reveal rock-paper-scissors over a simulated postal network"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::string> trace_path;
    CLI::App* play = app.add_subcommand("play", "run one seeded match");
    play->add_option("config", config_path, "JSON config file")->required();
    play->add_option("--seed", seed_flag, "override the config seed");
    play->add_option("--out", trace_path, "write the JSON-lines trace here");

    std::string t_config_path;
    int rounds = 1;
    CLI::App* tournament = app.add_subcommand("tournament", "round-robin federation play");
    tournament->add_option("config", t_config_path, "JSON config file")->required();
    tournament->add_option("--rounds", rounds, "matches per pair (default 1)");

    std::string attack_kind;
    std::uint64_t attack_seed = 1;
    CLI::App* attack = app.add_subcommand("attack", "run an adversary scenario");
    attack->add_option("kind", attack_kind, "swap|tamper|equivocate|replay|drop|peek")->required();
    attack->add_option("--seed", attack_seed, "base seed (default 1)");

    std::string registry_path;
    CLI::App* rankings = app.add_subcommand("rankings", "print the federation table");
    rankings->add_option("registry", registry_path, "registry JSON file")->required();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (play->parsed()) return cmd_play(config_path, seed_flag, trace_path, out, err);
        if (tournament->parsed()) return cmd_tournament(t_config_path, rounds, out, err);
        if (attack->parsed()) return cmd_attack(attack_kind, attack_seed, out, err);
        if (rankings->parsed()) return cmd_rankings(registry_path, out, err);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 1;
}

}  // namespace rps
