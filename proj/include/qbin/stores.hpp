#pragma once

#include <atomic>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qbin/binning.hpp"
#include "qbin/crypto.hpp"
#include "qbin/core.hpp"

namespace qbin {

// One query's cloud-observable record: predicates received and tuples
// returned, nothing owner-secret.
struct StoreObservation {
  std::uint64_t query_index = 0;
  std::vector<std::string> cipher_predicates;  // sorted token hex
  std::vector<Value> plain_predicates;         // sorted values
  std::vector<std::string> returned_refs;      // sorted tuple refs
  std::vector<std::string> returned_row_ids;   // sorted plaintext row ids

  bool operator==(const StoreObservation&) const = default;
};

struct Ciphertext {
  std::string tuple_ref;
  std::string token;  // searchable tag, hex
  std::string blob_b64;
};

enum class ScanCharge { per_query, per_token };

// Simulated untrusted encrypted store: answers token-set selections with a
// full scan and counts the work it did.
class EncryptedStore {
 public:
  EncryptedStore() = default;
  explicit EncryptedStore(std::vector<Ciphertext> rows) : rows_(std::move(rows)) {}
  EncryptedStore(EncryptedStore&& other) noexcept
      : rows_(std::move(other.rows_)), scans_(other.scans_.load()),
        rows_scanned_(other.rows_scanned_.load()) {}
  EncryptedStore& operator=(EncryptedStore&& other) noexcept {
    rows_ = std::move(other.rows_);
    scans_ = other.scans_.load();
    rows_scanned_ = other.rows_scanned_.load();
    return *this;
  }

  std::size_t size() const { return rows_.size(); }
  const std::vector<Ciphertext>& rows() const { return rows_; }

  std::vector<Ciphertext> select(const std::vector<std::string>& tokens,
                                 ScanCharge charge = ScanCharge::per_query) const;

  std::uint64_t scans() const { return scans_.load(); }
  std::uint64_t rows_scanned() const { return rows_scanned_.load(); }

 private:
  std::vector<Ciphertext> rows_;
  mutable std::atomic<std::uint64_t> scans_{0};
  mutable std::atomic<std::uint64_t> rows_scanned_{0};
};

// Plaintext store over the non-sensitive rows with an equality index on the
// searchable attribute.
class PlaintextStore {
 public:
  PlaintextStore() = default;
  PlaintextStore(std::vector<Row> rows, std::string attribute);
  PlaintextStore(PlaintextStore&& other) noexcept
      : rows_(std::move(other.rows_)), attribute_(std::move(other.attribute_)),
        index_(std::move(other.index_)), lookups_(other.lookups_.load()) {}
  PlaintextStore& operator=(PlaintextStore&& other) noexcept {
    rows_ = std::move(other.rows_);
    attribute_ = std::move(other.attribute_);
    index_ = std::move(other.index_);
    lookups_ = other.lookups_.load();
    return *this;
  }

  std::size_t size() const { return rows_.size(); }
  const std::vector<Row>& rows() const { return rows_; }
  const std::string& attribute() const { return attribute_; }

  std::vector<Row> select(const std::vector<Value>& values) const;
  std::vector<Value> distinct_values() const;

  std::uint64_t lookups() const { return lookups_.load(); }

 private:
  std::vector<Row> rows_;
  std::string attribute_;
  std::unordered_map<Value, std::vector<std::size_t>> index_;
  mutable std::atomic<std::uint64_t> lookups_{0};
};

struct UploadResult {
  EncryptedStore encrypted;
  PlaintextStore plain;
  std::size_t pad_width = 0;
  std::uint64_t fake_rows = 0;
};

// Encrypts every sensitive row with a fresh nonce, generates the layout's
// fake rows with tags in the reserved occurrence range, shuffles real and
// fake rows together, and loads + indexes the plaintext side.
UploadResult encrypt_and_upload(const PartitionedRelation& rel, const OwnerMetadata& meta,
                                const BinLayout& layout, const OwnerKeys& keys, Rng rng);

// Owner-side inverse of the sealed payload: the row plus its fake flag.
struct OpenedRow {
  Row row;
  bool fake = false;
};
OpenedRow open_row(const OwnerKeys& keys, const Ciphertext& ct);

}  // namespace qbin
