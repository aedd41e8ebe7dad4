#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rps/game_rules.hpp"
#include "rps/rng.hpp"

namespace rps {

// One completed game as seen by one player.
struct GameView {
    Move own;
    Move theirs;
    GameOutcome result;  // FirstWins = this player won
};

class Strategy {
public:
    virtual ~Strategy() = default;

    // Must return a move valid for the variant, and the same move given the
    // same history and rng state.
    virtual Move next_move(const Variant& variant, const std::vector<GameView>& history,
                           SeededRng& rng) = 0;
    virtual std::string name() const = 0;
};

struct StrategySpec {
    std::string name;         // constant | uniform | cycle | frequency
    std::optional<int> move;  // constant only
};

// ConfigError on an unknown name or a missing/out-of-range constant move.
std::unique_ptr<Strategy> make_strategy(const StrategySpec& spec, const Variant& variant);

}  // namespace rps
