#pragma once

#include <optional>

#include "qbin/stores.hpp"

namespace qbin {

// Owner-side query state: metadata, the secret layout and the keys.
struct Owner {
  OwnerMetadata meta;
  BinLayout layout;
  OwnerKeys keys;

  // Search tokens covering every real and fake occurrence of the bin's
  // values; the fetch size of a padded bin is independent of the query value.
  std::vector<std::string> bin_tokens(std::size_t sensitive_bin) const;
  std::vector<std::string> value_tokens(const Value& v) const;
};

struct QueryPlan {
  Value query_value;
  std::optional<std::size_t> sensitive_bin;
  std::optional<std::size_t> nonsensitive_bin;
  std::vector<std::string> tokens;
  std::vector<Value> plain_values;

  bool empty() const { return !sensitive_bin && !nonsensitive_bin; }
};

// Bin retrieval: if w sits at position j of sensitive bin i, fetch (SB_i,
// NSB_j); else if w sits at slot j of non-sensitive bin i, fetch (NSB_i,
// SB_j). Slot indexes past the bin count wrap. A value present on both sides
// yields the same pair by both rules (asserted). Unknown values produce an
// empty plan and the stores are never contacted.
QueryPlan plan_query(const Owner& owner, const Value& w);

struct QueryStats {
  std::uint64_t encrypted_fetched = 0;
  std::uint64_t plain_fetched = 0;
  std::uint64_t discarded_fakes = 0;
  std::uint64_t discarded_binmates = 0;
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
  std::uint64_t encrypted_rows_scanned = 0;

  std::uint64_t discarded() const { return discarded_fakes + discarded_binmates; }
};

struct QueryResult {
  std::vector<Row> rows;  // decrypted sensitive + plaintext rows equal to w
  QueryStats stats;
};

class ObservationLog {
 public:
  void append(StoreObservation obs);
  const std::vector<StoreObservation>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<StoreObservation> entries_;
};

QueryResult execute(const QueryPlan& plan, const EncryptedStore& enc, const PlaintextStore& plain,
                    const Owner& owner, ObservationLog* log,
                    ScanCharge charge = ScanCharge::per_query);

// Insecure per-value baseline: sends w itself to the plaintext store and, only
// when w has sensitive occurrences, w's own tokens to the encrypted store.
// Exists as the negative control for the audit module.
QueryResult execute_naive(const Value& w, const EncryptedStore& enc, const PlaintextStore& plain,
                          const Owner& owner, ObservationLog* log,
                          ScanCharge charge = ScanCharge::per_query);

// Reference answer: linear scan over the ingested relation.
std::vector<std::string> brute_force_select(const PartitionedRelation& rel, const Value& w);

}  // namespace qbin
