#include "rps/commitment.hpp"

namespace rps {

Bytes canonical_encode(const CommitContext& ctx, Move move, const Nonce& nonce) {
    Bytes out;
    out.reserve(16 + ctx.committer_id.size() + 16 + 6 * 4 + 3 * 4);
    append_field(out, ctx.match_id);
    append_field_u32(out, ctx.game_index);
    append_field(out, std::string_view(ctx.committer_id));
    append_field_u32(out, ctx.variant_n);
    append_field_u32(out, static_cast<std::uint32_t>(move.index));
    append_field(out, nonce.value);
    return out;
}

Commitment commit(const CommitContext& ctx, Move move, const Nonce& nonce) {
    return Commitment{sha256(canonical_encode(ctx, move, nonce))};
}

bool verify_opening(const CommitContext& ctx, const Commitment& c, const Opening& o) {
    if (o.move.index < 0 || static_cast<std::uint32_t>(o.move.index) >= ctx.variant_n) return false;
    return commit(ctx, o.move, o.nonce) == c;
}

Nonce new_nonce(SeededRng& rng) {
    Nonce n;
    rng.fill(n.value.data(), n.value.size());
    return n;
}

MatchId new_match_id(SeededRng& rng) {
    MatchId id{};
    rng.fill(id.data(), id.size());
    return id;
}

}  // namespace rps
