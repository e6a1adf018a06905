#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbin/core.hpp"

namespace qbin {

// Toy keyed cipher, a stand-in for a real AEAD + searchable-tag scheme. Rows
// are padded to one fixed width before sealing so blob lengths carry no
// signal; tags are deterministic per (value, occurrence), so two rows with
// the same value never share a tag or a blob.

struct OwnerKeys {
  std::uint64_t enc = 0;
  std::uint64_t mac = 0;
  std::uint64_t tag = 0;
};

OwnerKeys derive_keys(const Rng& root);

// 128-bit searchable tag, hex-encoded.
std::string search_token(const OwnerKeys& keys, const Value& v, std::uint64_t occurrence);

// blob = nonce(8) || ciphertext || mac(8); plaintext is length-prefixed and
// zero-padded to pad_width before encryption.
std::vector<std::uint8_t> seal_payload(const OwnerKeys& keys, const std::string& payload,
                                       std::size_t pad_width, std::uint64_t nonce);
// Throws IntegrityError when the mac does not verify.
std::string open_payload(const OwnerKeys& keys, const std::vector<std::uint8_t>& blob);

std::string to_base64(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> from_base64(const std::string& text);

}  // namespace qbin
