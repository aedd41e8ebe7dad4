#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "rps/bytes.hpp"
#include "rps/crypto.hpp"
#include "rps/game_rules.hpp"
#include "rps/rng.hpp"

namespace rps {

using MatchId = std::array<std::uint8_t, 16>;

// Everything a commitment is bound to. Both sides of a game hold identical
// contexts, so a digest produced for one game can never verify in another
// game, match, or role.
struct CommitContext {
    MatchId match_id{};
    std::uint32_t game_index = 0;
    std::string committer_id;
    std::uint32_t variant_n = 3;

    friend bool operator==(const CommitContext&, const CommitContext&) = default;
};

struct Nonce {
    std::array<std::uint8_t, 16> value{};

    friend bool operator==(const Nonce&, const Nonce&) = default;
};

struct Commitment {
    Digest digest{};

    friend bool operator==(const Commitment&, const Commitment&) = default;
};

struct Opening {
    Move move;
    Nonce nonce;
};

// Injective encoding of (context, move, nonce): each field length-prefixed
// with a 4-byte big-endian length and concatenated in the fixed order
// match_id, game_index, committer_id, variant_n, move, nonce.
Bytes canonical_encode(const CommitContext& ctx, Move move, const Nonce& nonce);

// The sealed envelope: SHA-256 over the canonical encoding. Hiding rests on
// the 128-bit nonce, binding on collision resistance.
Commitment commit(const CommitContext& ctx, Move move, const Nonce& nonce);

bool verify_opening(const CommitContext& ctx, const Commitment& c, const Opening& o);

Nonce new_nonce(SeededRng& rng);
MatchId new_match_id(SeededRng& rng);

}  // namespace rps
