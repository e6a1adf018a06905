#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qbin {

// Attribute values are opaque tokens; equality is the only comparison that
// carries query semantics, ordering is used for deterministic output only.
using Value = std::string;

struct QbinError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegrityError : QbinError {
  using QbinError::QbinError;
};

struct Row {
  std::string row_id;
  std::map<std::string, Value> attributes;
  bool sensitive = false;

  const Value& attr(const std::string& name) const;
  bool has_attr(const std::string& name) const { return attributes.count(name) != 0; }
};

// A relation split by row-level sensitivity. The union of the two row sets is
// the ingested relation; row_ids are unique across both.
struct PartitionedRelation {
  std::string name;
  std::string searchable_attribute;
  std::vector<Row> sensitive_rows;
  std::vector<Row> nonsensitive_rows;

  std::size_t total_rows() const { return sensitive_rows.size() + nonsensitive_rows.size(); }
};

struct ValueCount {
  Value value;
  std::uint64_t count = 0;
};

// Owner-side metadata: distinct values per side (first-appearance order) with
// exact tuple frequencies, plus the set of values present on both sides.
struct OwnerMetadata {
  std::vector<ValueCount> sensitive_values;
  std::vector<ValueCount> nonsensitive_values;
  std::vector<Value> associated_values;

  std::size_t s_count() const { return sensitive_values.size(); }
  std::size_t ns_count() const { return nonsensitive_values.size(); }

  std::uint64_t sensitive_count_of(const Value& v) const;
  std::uint64_t nonsensitive_count_of(const Value& v) const;
  bool is_associated(const Value& v) const;
  bool has_sensitive(const Value& v) const;
  bool has_nonsensitive(const Value& v) const;

  std::uint64_t sensitive_tuple_total() const;
  std::uint64_t nonsensitive_tuple_total() const;
  // True when every distinct value on both sides has exactly one tuple.
  bool uniform_single_tuple() const;

  void rebuild_index();

 private:
  std::unordered_map<Value, std::uint64_t> s_index_;
  std::unordered_map<Value, std::uint64_t> ns_index_;
};

// Deterministic 64-bit generator (splitmix64). Named sub-streams keep the
// permutation, nonce and workload randomness independently reproducible from
// one root seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }
  Rng derive(std::string_view label) const;

  std::uint64_t next();
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n); n > 0
  double unit();                         // [0, 1)

  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) {
      std::swap(xs[i - 1], xs[below(i)]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

PartitionedRelation ingest(const std::vector<Row>& rows,
                           const std::string& searchable_attribute,
                           const std::string& name = "relation");

OwnerMetadata build_metadata(const PartitionedRelation& rel);

}  // namespace qbin
