#include "qbin/core.hpp"

#include <algorithm>

namespace qbin {

namespace {

constexpr std::uint64_t kSplitmixGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t& state) {
  state += kSplitmixGamma;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

const Value& Row::attr(const std::string& name) const {
  auto it = attributes.find(name);
  if (it == attributes.end()) {
    throw QbinError("row '" + row_id + "' has no attribute '" + name + "'");
  }
  return it->second;
}

Rng Rng::derive(std::string_view label) const {
  std::uint64_t mix = seed_ ^ fnv1a(label);
  std::uint64_t state = mix;
  return Rng(splitmix64(state));
}

std::uint64_t Rng::next() { return splitmix64(state_); }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw QbinError("Rng::below(0)");
  return next() % n;
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

PartitionedRelation ingest(const std::vector<Row>& rows, const std::string& searchable_attribute,
                           const std::string& name) {
  if (rows.empty()) throw QbinError("ingest: no rows");
  PartitionedRelation rel;
  rel.name = name;
  rel.searchable_attribute = searchable_attribute;
  std::unordered_map<std::string, bool> seen_ids;
  for (const Row& row : rows) {
    if (!row.has_attr(searchable_attribute)) {
      throw QbinError("ingest: row '" + row.row_id + "' is missing searchable attribute '" +
                      searchable_attribute + "'");
    }
    if (!seen_ids.emplace(row.row_id, true).second) {
      throw QbinError("ingest: duplicate row_id '" + row.row_id + "'");
    }
    if (row.sensitive) {
      rel.sensitive_rows.push_back(row);
    } else {
      rel.nonsensitive_rows.push_back(row);
    }
  }
  return rel;
}

namespace {

std::vector<ValueCount> distinct_counts(const std::vector<Row>& rows, const std::string& attr) {
  std::vector<ValueCount> out;
  std::unordered_map<Value, std::size_t> where;
  for (const Row& row : rows) {
    const Value& v = row.attr(attr);
    auto it = where.find(v);
    if (it == where.end()) {
      where.emplace(v, out.size());
      out.push_back({v, 1});
    } else {
      out[it->second].count++;
    }
  }
  return out;
}

}  // namespace

OwnerMetadata build_metadata(const PartitionedRelation& rel) {
  OwnerMetadata meta;
  meta.sensitive_values = distinct_counts(rel.sensitive_rows, rel.searchable_attribute);
  meta.nonsensitive_values = distinct_counts(rel.nonsensitive_rows, rel.searchable_attribute);
  meta.rebuild_index();
  for (const ValueCount& vc : meta.sensitive_values) {
    if (meta.has_nonsensitive(vc.value)) meta.associated_values.push_back(vc.value);
  }
  return meta;
}

void OwnerMetadata::rebuild_index() {
  s_index_.clear();
  ns_index_.clear();
  for (std::size_t i = 0; i < sensitive_values.size(); ++i) {
    s_index_.emplace(sensitive_values[i].value, i);
  }
  for (std::size_t i = 0; i < nonsensitive_values.size(); ++i) {
    ns_index_.emplace(nonsensitive_values[i].value, i);
  }
}

std::uint64_t OwnerMetadata::sensitive_count_of(const Value& v) const {
  auto it = s_index_.find(v);
  return it == s_index_.end() ? 0 : sensitive_values[it->second].count;
}

std::uint64_t OwnerMetadata::nonsensitive_count_of(const Value& v) const {
  auto it = ns_index_.find(v);
  return it == ns_index_.end() ? 0 : nonsensitive_values[it->second].count;
}

bool OwnerMetadata::has_sensitive(const Value& v) const { return s_index_.count(v) != 0; }
bool OwnerMetadata::has_nonsensitive(const Value& v) const { return ns_index_.count(v) != 0; }

bool OwnerMetadata::is_associated(const Value& v) const {
  return has_sensitive(v) && has_nonsensitive(v);
}

std::uint64_t OwnerMetadata::sensitive_tuple_total() const {
  std::uint64_t total = 0;
  for (const ValueCount& vc : sensitive_values) total += vc.count;
  return total;
}

std::uint64_t OwnerMetadata::nonsensitive_tuple_total() const {
  std::uint64_t total = 0;
  for (const ValueCount& vc : nonsensitive_values) total += vc.count;
  return total;
}

bool OwnerMetadata::uniform_single_tuple() const {
  auto all_one = [](const std::vector<ValueCount>& vs) {
    return std::all_of(vs.begin(), vs.end(), [](const ValueCount& vc) { return vc.count == 1; });
  };
  return all_one(sensitive_values) && all_one(nonsensitive_values);
}

}  // namespace qbin
