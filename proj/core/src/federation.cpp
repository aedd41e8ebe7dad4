#include "rps/federation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rps/bytes.hpp"
#include "rps/crypto.hpp"

namespace rps {

using nlohmann::json;

std::string format_ranking(std::int64_t halves) {
    const bool negative = halves < 0;
    const std::int64_t a = negative ? -halves : halves;
    std::string out = negative ? "-" : "";
    out += std::to_string(a / 2);
    out += a % 2 == 0 ? ".0" : ".5";
    return out;
}

const char* to_string(Branch branch) {
    return branch == Branch::UpsetOrDraw ? "UpsetOrDraw" : "Expected";
}

std::pair<RankingUpdate, RankingUpdate> update_rankings(std::int64_t r_a_halves,
                                                        std::int64_t r_b_halves, int p_a) {
    const std::int64_t delta_halves = r_a_halves >= r_b_halves ? r_a_halves - r_b_halves
                                                               : r_b_halves - r_a_halves;
    // branch 1 unless the strictly higher-ranked player won the match
    const int lower_points = r_a_halves == r_b_halves ? 0 : (r_a_halves < r_b_halves ? p_a : -p_a);
    const bool upset_or_draw = r_a_halves == r_b_halves || lower_points >= 0;

    RankingUpdate a;
    RankingUpdate b;
    a.r_old_halves = r_a_halves;
    b.r_old_halves = r_b_halves;
    a.points = p_a;
    b.points = -p_a;
    if (upset_or_draw) {
        // f = floor(delta/5) + 1/2 in points, so 2f = 2*floor(delta/5) + 1
        // and the move in half units is exactly (2f) * (P + 2).
        const std::int64_t two_f = 2 * (delta_halves / 10) + 1;
        a.branch = b.branch = Branch::UpsetOrDraw;
        a.r_new_halves = r_a_halves + two_f * (a.points + 2);
        b.r_new_halves = r_b_halves + two_f * (b.points + 2);
    } else {
        // P/2 in points is exactly P in half units
        a.branch = b.branch = Branch::Expected;
        a.r_new_halves = r_a_halves + a.points;
        b.r_new_halves = r_b_halves + b.points;
    }
    return {a, b};
}

/* ------------------------------------------------------------------ */
/* Registry                                                            */

PlayerRecord& Registry::register_player(const std::string& id, const std::string& name) {
    const auto it = std::lower_bound(players_.begin(), players_.end(), id,
                                     [](const PlayerRecord& p, const std::string& key) { return p.id < key; });
    if (it != players_.end() && it->id == id)
        throw DomainError(ErrorCode::DuplicateId, "player '" + id + "' already registered");
    return *players_.insert(it, PlayerRecord{id, name.empty() ? id : name, 200, 0});
}

const PlayerRecord* Registry::find(const std::string& id) const {
    const auto it = std::lower_bound(players_.begin(), players_.end(), id,
                                     [](const PlayerRecord& p, const std::string& key) { return p.id < key; });
    if (it == players_.end() || it->id != id) return nullptr;
    return &*it;
}

std::optional<std::pair<RankingUpdate, RankingUpdate>> Registry::record_match(MatchRecord rec) {
    const auto find_mut = [this](const std::string& id) -> PlayerRecord* {
        const auto it = std::lower_bound(players_.begin(), players_.end(), id,
                                         [](const PlayerRecord& p, const std::string& key) { return p.id < key; });
        return it != players_.end() && it->id == id ? &*it : nullptr;
    };
    PlayerRecord* pa = find_mut(rec.player_a);
    PlayerRecord* pb = find_mut(rec.player_b);
    if (pa == nullptr) throw DomainError(ErrorCode::UnknownPlayer, "player '" + rec.player_a + "' not registered");
    if (pb == nullptr) throw DomainError(ErrorCode::UnknownPlayer, "player '" + rec.player_b + "' not registered");

    if (rec.status != "MatchComplete") {
        rec.updates.clear();
        history_.push_back(std::move(rec));
        return std::nullopt;
    }

    auto [ua, ub] = update_rankings(pa->ranking_halves, pb->ranking_halves, rec.points_a);
    ua.player_id = pa->id;
    ub.player_id = pb->id;
    pa->ranking_halves = ua.r_new_halves;
    pb->ranking_halves = ub.r_new_halves;
    ++pa->matches;
    ++pb->matches;
    rec.updates = {ua, ub};
    history_.push_back(std::move(rec));
    return std::make_pair(ua, ub);
}

std::vector<PlayerRecord> Registry::standings() const {
    std::vector<PlayerRecord> out = players_;
    std::sort(out.begin(), out.end(), [](const PlayerRecord& x, const PlayerRecord& y) {
        if (x.ranking_halves != y.ranking_halves) return x.ranking_halves > y.ranking_halves;
        return x.id < y.id;
    });
    return out;
}

/* ------------------------------------------------------------------ */
/* Persistence                                                         */

namespace {

json update_to_json(const RankingUpdate& u) {
    return json{{"player_id", u.player_id},
                {"r_old_halves", u.r_old_halves},
                {"r_new_halves", u.r_new_halves},
                {"p", u.points},
                {"branch", to_string(u.branch)}};
}

RankingUpdate update_from_json(const json& j) {
    RankingUpdate u;
    u.player_id = j.at("player_id").get<std::string>();
    u.r_old_halves = j.at("r_old_halves").get<std::int64_t>();
    u.r_new_halves = j.at("r_new_halves").get<std::int64_t>();
    u.points = j.at("p").get<int>();
    const auto branch = j.at("branch").get<std::string>();
    if (branch == "UpsetOrDraw")
        u.branch = Branch::UpsetOrDraw;
    else if (branch == "Expected")
        u.branch = Branch::Expected;
    else
        throw DomainError(ErrorCode::CorruptFile, "bad branch '" + branch + "'");
    return u;
}

json payload_json(const std::vector<PlayerRecord>& players, const std::vector<MatchRecord>& history) {
    json jplayers = json::array();
    for (const PlayerRecord& p : players)
        jplayers.push_back(json{{"id", p.id},
                                {"name", p.name},
                                {"ranking_halves", p.ranking_halves},
                                {"matches", p.matches}});
    json jhistory = json::array();
    for (const MatchRecord& m : history) {
        json games = json::array();
        for (const GameLine& g : m.games)
            games.push_back(json{{"committer", g.committer_id},
                                 {"committer_move", g.committer_move},
                                 {"responder_move", g.responder_move},
                                 {"winner", g.winner_id}});
        json updates = json::array();
        for (const RankingUpdate& u : m.updates) updates.push_back(update_to_json(u));
        jhistory.push_back(json{{"match_id", m.match_id_hex},
                                {"player_a", m.player_a},
                                {"player_b", m.player_b},
                                {"games", std::move(games)},
                                {"wins_a", m.wins_a},
                                {"wins_b", m.wins_b},
                                {"draws", m.draws},
                                {"points_a", m.points_a},
                                {"status", m.status},
                                {"updates", std::move(updates)}});
    }
    return json{{"version", 1}, {"players", std::move(jplayers)}, {"history", std::move(jhistory)}};
}

std::string checksum_of(const json& payload) {
    const std::string canonical = payload.dump();
    return to_hex(
        sha256(reinterpret_cast<const std::uint8_t*>(canonical.data()), canonical.size()).data(), 32);
}

}  // namespace

std::string Registry::serialize() const {
    json payload = payload_json(players_, history_);
    const std::string checksum = checksum_of(payload);
    payload["checksum"] = checksum;
    return payload.dump();
}

Registry Registry::deserialize(const std::string& text) {
    try {
        json doc = json::parse(text);
        const auto checksum = doc.at("checksum").get<std::string>();
        doc.erase("checksum");
        if (checksum_of(doc) != checksum)
            throw DomainError(ErrorCode::CorruptFile, "checksum mismatch");
        if (doc.at("version").get<int>() != 1)
            throw DomainError(ErrorCode::CorruptFile, "unsupported version");

        Registry reg;
        for (const json& jp : doc.at("players")) {
            PlayerRecord p;
            p.id = jp.at("id").get<std::string>();
            p.name = jp.at("name").get<std::string>();
            p.ranking_halves = jp.at("ranking_halves").get<std::int64_t>();
            p.matches = jp.at("matches").get<std::int64_t>();
            reg.players_.push_back(std::move(p));
        }
        if (!std::is_sorted(reg.players_.begin(), reg.players_.end(),
                            [](const PlayerRecord& x, const PlayerRecord& y) { return x.id < y.id; }))
            throw DomainError(ErrorCode::CorruptFile, "players not sorted by id");
        for (const json& jm : doc.at("history")) {
            MatchRecord m;
            m.match_id_hex = jm.at("match_id").get<std::string>();
            m.player_a = jm.at("player_a").get<std::string>();
            m.player_b = jm.at("player_b").get<std::string>();
            for (const json& jg : jm.at("games")) {
                GameLine g;
                g.committer_id = jg.at("committer").get<std::string>();
                g.committer_move = jg.at("committer_move").get<int>();
                g.responder_move = jg.at("responder_move").get<int>();
                g.winner_id = jg.at("winner").get<std::string>();
                m.games.push_back(std::move(g));
            }
            m.wins_a = jm.at("wins_a").get<int>();
            m.wins_b = jm.at("wins_b").get<int>();
            m.draws = jm.at("draws").get<int>();
            m.points_a = jm.at("points_a").get<int>();
            m.status = jm.at("status").get<std::string>();
            for (const json& ju : jm.at("updates")) m.updates.push_back(update_from_json(ju));
            reg.history_.push_back(std::move(m));
        }
        return reg;
    } catch (const DomainError&) {
        throw;
    } catch (const json::exception& e) {
        throw DomainError(ErrorCode::CorruptFile, e.what());
    }
}

void Registry::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError(ErrorCode::CorruptFile, "cannot write " + path.string());
    out << serialize() << '\n';
    if (!out) throw DomainError(ErrorCode::CorruptFile, "short write to " + path.string());
}

Registry Registry::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError(ErrorCode::CorruptFile, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize(buf.str());
}

}  // namespace rps
