#include "qbin/crypto.hpp"

#include <array>
#include <cstring>

namespace qbin {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t prf(std::uint64_t key, const void* data, std::size_t len, std::uint64_t salt) {
  std::uint64_t h = mix64(key ^ salt);
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t word = 0;
  std::size_t filled = 0;
  for (std::size_t i = 0; i < len; ++i) {
    word |= static_cast<std::uint64_t>(p[i]) << (8 * filled);
    if (++filled == 8) {
      h = mix64(h ^ word);
      word = 0;
      filled = 0;
    }
  }
  h = mix64(h ^ word ^ (static_cast<std::uint64_t>(len) << 56));
  return h;
}

constexpr char kHex[] = "0123456789abcdef";

std::string hex64(std::uint64_t v) {
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kHex[v & 0xF];
    v >>= 4;
  }
  return out;
}

constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

}  // namespace

OwnerKeys derive_keys(const Rng& root) {
  OwnerKeys keys;
  Rng enc = root.derive("key.enc");
  Rng mac = root.derive("key.mac");
  Rng tag = root.derive("key.tag");
  keys.enc = enc.next();
  keys.mac = mac.next();
  keys.tag = tag.next();
  return keys;
}

std::string search_token(const OwnerKeys& keys, const Value& v, std::uint64_t occurrence) {
  std::uint64_t a = prf(keys.tag, v.data(), v.size(), occurrence * 2 + 1);
  std::uint64_t b = prf(keys.tag ^ 0xA5A5A5A5A5A5A5A5ULL, v.data(), v.size(), occurrence * 2);
  return hex64(a) + hex64(b);
}

std::vector<std::uint8_t> seal_payload(const OwnerKeys& keys, const std::string& payload,
                                       std::size_t pad_width, std::uint64_t nonce) {
  if (payload.size() + 4 > pad_width) {
    throw QbinError("payload exceeds pad width " + std::to_string(pad_width));
  }
  std::vector<std::uint8_t> plain(pad_width, 0);
  std::uint32_t len = static_cast<std::uint32_t>(payload.size());
  std::memcpy(plain.data(), &len, 4);
  std::memcpy(plain.data() + 4, payload.data(), payload.size());

  std::vector<std::uint8_t> blob(8 + pad_width + 8);
  std::memcpy(blob.data(), &nonce, 8);
  std::uint64_t stream = keys.enc ^ nonce;
  for (std::size_t i = 0; i < pad_width; ++i) {
    if (i % 8 == 0) stream = mix64(stream);
    blob[8 + i] = plain[i] ^ static_cast<std::uint8_t>(stream >> (8 * (i % 8)));
  }
  std::uint64_t mac = prf(keys.mac, blob.data(), 8 + pad_width, nonce);
  std::memcpy(blob.data() + 8 + pad_width, &mac, 8);
  return blob;
}

std::string open_payload(const OwnerKeys& keys, const std::vector<std::uint8_t>& blob) {
  if (blob.size() < 20) throw IntegrityError("blob too short");
  std::size_t pad_width = blob.size() - 16;
  std::uint64_t nonce = 0;
  std::memcpy(&nonce, blob.data(), 8);
  std::uint64_t mac = 0;
  std::memcpy(&mac, blob.data() + 8 + pad_width, 8);
  if (prf(keys.mac, blob.data(), 8 + pad_width, nonce) != mac) {
    throw IntegrityError("ciphertext authentication failed");
  }
  std::vector<std::uint8_t> plain(pad_width);
  std::uint64_t stream = keys.enc ^ nonce;
  for (std::size_t i = 0; i < pad_width; ++i) {
    if (i % 8 == 0) stream = mix64(stream);
    plain[i] = blob[8 + i] ^ static_cast<std::uint8_t>(stream >> (8 * (i % 8)));
  }
  std::uint32_t len = 0;
  std::memcpy(&len, plain.data(), 4);
  if (len + 4 > pad_width) throw IntegrityError("corrupt payload length");
  return std::string(reinterpret_cast<const char*>(plain.data() + 4), len);
}

std::string to_base64(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    std::uint32_t chunk = bytes[i] << 16;
    if (i + 1 < bytes.size()) chunk |= bytes[i + 1] << 8;
    if (i + 2 < bytes.size()) chunk |= bytes[i + 2];
    out.push_back(kB64[(chunk >> 18) & 0x3F]);
    out.push_back(kB64[(chunk >> 12) & 0x3F]);
    out.push_back(i + 1 < bytes.size() ? kB64[(chunk >> 6) & 0x3F] : '=');
    out.push_back(i + 2 < bytes.size() ? kB64[chunk & 0x3F] : '=');
  }
  return out;
}

std::vector<std::uint8_t> from_base64(const std::string& text) {
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  std::uint32_t chunk = 0;
  int have = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    int v = b64_value(c);
    if (v < 0) throw QbinError("invalid base64 input");
    chunk = (chunk << 6) | static_cast<std::uint32_t>(v);
    if (++have == 4) {
      out.push_back((chunk >> 16) & 0xFF);
      out.push_back((chunk >> 8) & 0xFF);
      out.push_back(chunk & 0xFF);
      have = 0;
      chunk = 0;
    }
  }
  if (have == 2) {
    out.push_back((chunk >> 4) & 0xFF);
  } else if (have == 3) {
    out.push_back((chunk >> 10) & 0xFF);
    out.push_back((chunk >> 2) & 0xFF);
  }
  return out;
}

}  // namespace qbin
