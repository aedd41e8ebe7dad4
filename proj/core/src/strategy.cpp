#include "rps/strategy.hpp"

#include <algorithm>

#include "rps/errors.hpp"

namespace rps {

namespace {

class ConstantStrategy final : public Strategy {
public:
    explicit ConstantStrategy(Move m) : move_(m) {}

    Move next_move(const Variant&, const std::vector<GameView>&, SeededRng&) override { return move_; }
    std::string name() const override { return "constant"; }

private:
    Move move_;
};

class UniformRandomStrategy final : public Strategy {
public:
    Move next_move(const Variant& variant, const std::vector<GameView>&, SeededRng& rng) override {
        return Move{static_cast<int>(rng.uniform_int(0, variant.size() - 1))};
    }
    std::string name() const override { return "uniform"; }
};

class CycleStrategy final : public Strategy {
public:
    Move next_move(const Variant& variant, const std::vector<GameView>& history, SeededRng&) override {
        return Move{static_cast<int>(history.size() % static_cast<std::size_t>(variant.size()))};
    }
    std::string name() const override { return "cycle"; }
};

// Plays the counter to the opponent's most frequent move so far (ties to the
// lowest index); move 0 when there is no history yet.
class FrequencyCounterStrategy final : public Strategy {
public:
    Move next_move(const Variant& variant, const std::vector<GameView>& history, SeededRng&) override {
        if (history.empty()) return Move{0};
        std::vector<int> counts(static_cast<std::size_t>(variant.size()), 0);
        for (const GameView& g : history) ++counts[static_cast<std::size_t>(g.theirs.index)];
        const auto most = std::max_element(counts.begin(), counts.end());
        const int target = static_cast<int>(most - counts.begin());
        return Move{(target + 1) % variant.size()};
    }
    std::string name() const override { return "frequency"; }
};

}  // namespace

std::unique_ptr<Strategy> make_strategy(const StrategySpec& spec, const Variant& variant) {
    if (spec.name == "constant") {
        if (!spec.move)
            throw DomainError(ErrorCode::ConfigError, "strategy 'constant' needs a 'move'");
        if (*spec.move < 0 || *spec.move >= variant.size())
            throw DomainError(ErrorCode::ConfigError,
                              "'move' " + std::to_string(*spec.move) + " out of range for n=" +
                                  std::to_string(variant.size()));
        return std::make_unique<ConstantStrategy>(Move{*spec.move});
    }
    if (spec.move)
        throw DomainError(ErrorCode::ConfigError, "'move' only applies to strategy 'constant'");
    if (spec.name == "uniform") return std::make_unique<UniformRandomStrategy>();
    if (spec.name == "cycle") return std::make_unique<CycleStrategy>();
    if (spec.name == "frequency") return std::make_unique<FrequencyCounterStrategy>();
    throw DomainError(ErrorCode::ConfigError, "unknown strategy '" + spec.name + "'");
}

}  // namespace rps
