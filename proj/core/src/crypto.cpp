#include "rps/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <stdexcept>

namespace rps {

Digest sha256(const std::uint8_t* data, std::size_t len) {
    Digest out{};
    SHA256(data, len, out.data());
    return out;
}

namespace {

void free_pkey(void* p) {
    EVP_PKEY_free(static_cast<EVP_PKEY*>(p));
}

}  // namespace

KeyPair KeyPair::generate(SeededRng& rng) {
    std::array<std::uint8_t, 32> seed{};
    rng.fill(seed.data(), seed.size());
    return from_seed(seed);
}

KeyPair KeyPair::from_seed(const std::array<std::uint8_t, 32>& seed) {
    EVP_PKEY* pkey = EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size());
    if (pkey == nullptr) throw std::runtime_error("ed25519 key derivation failed");
    KeyPair kp;
    kp.pkey_ = std::shared_ptr<void>(pkey, free_pkey);
    std::size_t publen = kp.pub_.size();
    if (EVP_PKEY_get_raw_public_key(pkey, kp.pub_.data(), &publen) != 1 || publen != kp.pub_.size())
        throw std::runtime_error("ed25519 public key extraction failed");
    return kp;
}

Signature KeyPair::sign(const Bytes& msg) const {
    Signature sig{};
    std::size_t siglen = sig.size();
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
    int ok = EVP_DigestSignInit(ctx, nullptr, nullptr, nullptr, static_cast<EVP_PKEY*>(pkey_.get()));
    if (ok == 1) ok = EVP_DigestSign(ctx, sig.data(), &siglen, msg.data(), msg.size());
    EVP_MD_CTX_free(ctx);
    if (ok != 1 || siglen != sig.size()) throw std::runtime_error("ed25519 signing failed");
    return sig;
}

bool verify_sig(const PublicKey& pub, const Bytes& msg, const Signature& sig) {
    EVP_PKEY* pkey = EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, pub.data(), pub.size());
    if (pkey == nullptr) return false;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) {
        EVP_PKEY_free(pkey);
        return false;
    }
    int ok = EVP_DigestVerifyInit(ctx, nullptr, nullptr, nullptr, pkey);
    if (ok == 1) ok = EVP_DigestVerify(ctx, sig.data(), sig.size(), msg.data(), msg.size());
    EVP_MD_CTX_free(ctx);
    EVP_PKEY_free(pkey);
    return ok == 1;
}

}  // namespace rps
