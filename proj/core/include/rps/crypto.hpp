#pragma once

#include <array>
#include <cstdint>
#include <memory>

#include "rps/bytes.hpp"
#include "rps/rng.hpp"

namespace rps {

using Digest = std::array<std::uint8_t, 32>;
using PublicKey = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;

Digest sha256(const std::uint8_t* data, std::size_t len);

inline Digest sha256(const Bytes& b) {
    return sha256(b.data(), b.size());
}

// Ed25519 identity. Key material derives from the seeded simulation stream,
// never from ambient entropy, so whole runs replay bit-exactly. The hash and
// signature primitives are fixed here behind this interface; swapping either
// for another 256-bit hash / deterministic signature scheme only touches
// crypto.cpp.
class KeyPair {
public:
    static KeyPair generate(SeededRng& rng);
    static KeyPair from_seed(const std::array<std::uint8_t, 32>& seed);

    const PublicKey& public_key() const { return pub_; }
    Signature sign(const Bytes& msg) const;

private:
    KeyPair() = default;

    PublicKey pub_{};
    std::shared_ptr<void> pkey_;  // EVP_PKEY; shared so copies stay cheap
};

bool verify_sig(const PublicKey& pub, const Bytes& msg, const Signature& sig);

}  // namespace rps
