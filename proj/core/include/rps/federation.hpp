#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rps/errors.hpp"

namespace rps {

// Rankings live in half-point units so that the update formula stays in
// exact integer arithmetic; rendered value = ranking_halves / 2.
struct PlayerRecord {
    std::string id;
    std::string name;
    std::int64_t ranking_halves = 200;  // every new player starts at 100.0
    std::int64_t matches = 0;

    friend bool operator==(const PlayerRecord&, const PlayerRecord&) = default;
};

// "127.0", "100.5", "-1.5" — always exactly one decimal digit.
std::string format_ranking(std::int64_t halves);

enum class Branch { UpsetOrDraw, Expected };

const char* to_string(Branch branch);

struct RankingUpdate {
    std::string player_id;
    std::int64_t r_old_halves = 0;
    std::int64_t r_new_halves = 0;
    int points = 0;
    Branch branch = Branch::UpsetOrDraw;

    friend bool operator==(const RankingUpdate&, const RankingUpdate&) = default;
};

// The two-branch update, exact in half units. With d = |Ra - Rb| in points
// and f = floor(d/5) + 1/2: when the strictly lower-ranked player won or
// drew (or the rankings are equal) both sides move by f*(P+2) with their own
// P; when the higher-ranked player won, both move by P/2. p_a is player A's
// match points; B's are -p_a.
std::pair<RankingUpdate, RankingUpdate> update_rankings(std::int64_t r_a_halves,
                                                        std::int64_t r_b_halves, int p_a);

struct GameLine {
    std::string committer_id;
    int committer_move = 0;
    int responder_move = 0;
    std::string winner_id;  // empty = draw

    friend bool operator==(const GameLine&, const GameLine&) = default;
};

struct MatchRecord {
    std::string match_id_hex;
    std::string player_a;
    std::string player_b;
    std::vector<GameLine> games;
    int wins_a = 0;
    int wins_b = 0;
    int draws = 0;
    int points_a = 0;
    std::string status;  // "MatchComplete" or "Aborted:<error>"
    std::vector<RankingUpdate> updates;  // filled by record_match; empty for aborts

    friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

// Player registry plus append-only match history. Single-writer: callers
// serialize record_match invocations.
class Registry {
public:
    // New players start at ranking 100.0. DuplicateId when the id exists.
    PlayerRecord& register_player(const std::string& id, const std::string& name);

    const PlayerRecord* find(const std::string& id) const;
    bool has(const std::string& id) const { return find(id) != nullptr; }
    std::size_t player_count() const { return players_.size(); }

    // For a completed match: applies update_rankings to both players
    // atomically and appends the record. Aborted matches are appended to the
    // history but never touch rankings (returns nullopt).
    std::optional<std::pair<RankingUpdate, RankingUpdate>> record_match(MatchRecord rec);

    std::vector<PlayerRecord> standings() const;  // ranking desc, ties by id asc
    const std::vector<MatchRecord>& history() const { return history_; }

    // Single JSON document {version, players, history} with a trailing
    // SHA-256 checksum over the canonical serialization of the rest.
    // load raises CorruptFile on parse, schema, or checksum failure.
    void save(const std::filesystem::path& path) const;
    static Registry load(const std::filesystem::path& path);

    std::string serialize() const;
    static Registry deserialize(const std::string& text);

    friend bool operator==(const Registry&, const Registry&) = default;

private:
    std::vector<PlayerRecord> players_;  // kept sorted by id
    std::vector<MatchRecord> history_;
};

}  // namespace rps
