#pragma once

#include <string>
#include <vector>

#include "rps/errors.hpp"

namespace rps {

struct Move {
    int index = 0;

    friend bool operator==(const Move&, const Move&) = default;
};

// Relative to argument order: FirstWins means the first move given wins.
enum class GameOutcome { FirstWins, SecondWins, Draw };

inline GameOutcome flip(GameOutcome o) {
    switch (o) {
        case GameOutcome::FirstWins: return GameOutcome::SecondWins;
        case GameOutcome::SecondWins: return GameOutcome::FirstWins;
        case GameOutcome::Draw: return GameOutcome::Draw;
    }
    return GameOutcome::Draw;
}

// The RPS-n move space, n odd and >= 3. Dominance is the balanced cycle:
// move i beats move j iff (i - j) mod n lands in [1, (n-1)/2], which gives
// every move exactly (n-1)/2 wins and (n-1)/2 losses. n = 3 with the default
// names reproduces classic rock/paper/scissors.
class Variant {
public:
    // validate_variant: rejects even n (EvenN), n < 3 (TooSmallN), and name
    // lists that are the wrong length or not distinct (BadNames). An empty
    // name list selects defaults: rock/paper/scissors for n = 3, otherwise
    // "move-0".."move-(n-1)".
    static Variant validate(int n, std::vector<std::string> names = {});

    int size() const { return n_; }
    const std::string& move_name(Move m) const;
    Move move(int index) const;  // bounds-checked construction
    bool valid(Move m) const { return m.index >= 0 && m.index < n_; }

private:
    Variant(int n, std::vector<std::string> names);

    int n_;
    std::vector<std::string> names_;
};

bool beats(const Variant& v, Move i, Move j);
GameOutcome outcome(const Variant& v, Move a, Move b);

struct MatchPoints {
    int first = 0;
    int second = 0;

    friend bool operator==(const MatchPoints&, const MatchPoints&) = default;
};

// Points a match is worth to each side: own games won minus the opponent's
// games won. Draws count for neither, so first == -second always.
MatchPoints match_points(int wins_first, int wins_second, int games_per_match = 10);

}  // namespace rps
