#include "rps/game_rules.hpp"

#include <set>
#include <stdexcept>

namespace rps {

Variant::Variant(int n, std::vector<std::string> names) : n_(n), names_(std::move(names)) {}

Variant Variant::validate(int n, std::vector<std::string> names) {
    if (n < 3) throw DomainError(ErrorCode::TooSmallN, "need at least 3 signs, got " + std::to_string(n));
    if (n % 2 == 0) throw DomainError(ErrorCode::EvenN, "sign count must be odd, got " + std::to_string(n));
    if (names.empty()) {
        if (n == 3) {
            names = {"rock", "paper", "scissors"};
        } else {
            names.reserve(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) names.push_back("move-" + std::to_string(i));
        }
    } else {
        if (static_cast<int>(names.size()) != n)
            throw DomainError(ErrorCode::BadNames,
                              "expected " + std::to_string(n) + " names, got " + std::to_string(names.size()));
        std::set<std::string> distinct(names.begin(), names.end());
        if (static_cast<int>(distinct.size()) != n)
            throw DomainError(ErrorCode::BadNames, "move names must be distinct");
    }
    return Variant(n, std::move(names));
}

const std::string& Variant::move_name(Move m) const {
    return names_.at(static_cast<std::size_t>(m.index));
}

Move Variant::move(int index) const {
    if (index < 0 || index >= n_)
        throw std::out_of_range("move index " + std::to_string(index) + " out of range for n=" + std::to_string(n_));
    return Move{index};
}

bool beats(const Variant& v, Move i, Move j) {
    const int n = v.size();
    const int d = ((i.index - j.index) % n + n) % n;
    return d >= 1 && d <= (n - 1) / 2;
}

GameOutcome outcome(const Variant& v, Move a, Move b) {
    if (a == b) return GameOutcome::Draw;
    return beats(v, a, b) ? GameOutcome::FirstWins : GameOutcome::SecondWins;
}

MatchPoints match_points(int wins_first, int wins_second, int games_per_match) {
    if (wins_first < 0 || wins_second < 0) throw std::invalid_argument("negative win count");
    if (wins_first + wins_second > games_per_match)
        throw DomainError(ErrorCode::TooManyWins, std::to_string(wins_first) + "+" + std::to_string(wins_second) +
                                                      " wins in a " + std::to_string(games_per_match) +
                                                      "-game match");
    const int p = wins_first - wins_second;
    return MatchPoints{p, -p};
}

}  // namespace rps
