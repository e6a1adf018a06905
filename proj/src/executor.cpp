#include "qbin/executor.hpp"

#include <algorithm>

namespace qbin {

void ObservationLog::append(StoreObservation obs) {
  obs.query_index = entries_.size();
  entries_.push_back(std::move(obs));
}

std::vector<std::string> Owner::value_tokens(const Value& v) const {
  std::vector<std::string> tokens;
  std::uint64_t real = meta.sensitive_count_of(v);
  std::uint64_t fakes = 0;
  if (auto slot = layout.find_sensitive(v)) fakes = layout.fake_share(slot->bin, v);
  tokens.reserve(real + fakes);
  for (std::uint64_t occ = 0; occ < real + fakes; ++occ) {
    tokens.push_back(search_token(keys, v, occ));
  }
  return tokens;
}

std::vector<std::string> Owner::bin_tokens(std::size_t sensitive_bin) const {
  std::vector<std::string> tokens;
  for (const Value& v : layout.sensitive_bins.at(sensitive_bin)) {
    auto vt = value_tokens(v);
    tokens.insert(tokens.end(), vt.begin(), vt.end());
  }
  return tokens;
}

QueryPlan plan_query(const Owner& owner, const Value& w) {
  QueryPlan plan;
  plan.query_value = w;

  std::size_t sb_count = owner.layout.sensitive_bin_count();
  std::size_t nsb_count = owner.layout.nonsensitive_bin_count();

  auto s_slot = owner.layout.find_sensitive(w);
  auto ns_slot = owner.layout.find_nonsensitive(w);

  if (s_slot) {
    plan.sensitive_bin = s_slot->bin;
    plan.nonsensitive_bin = s_slot->pos % nsb_count;
  } else if (ns_slot) {
    plan.nonsensitive_bin = ns_slot->bin;
    plan.sensitive_bin = ns_slot->pos % sb_count;
  } else {
    return plan;  // unknown value: nothing to retrieve
  }

  // A value present on both sides must map to the same pair by both rules.
  if (s_slot && ns_slot) {
    if (ns_slot->bin != *plan.nonsensitive_bin || ns_slot->pos % sb_count != *plan.sensitive_bin) {
      throw QbinError("retrieval rules disagree for value '" + w + "'");
    }
  }

  plan.tokens = owner.bin_tokens(*plan.sensitive_bin);
  plan.plain_values = owner.layout.nonsensitive_bin_values(*plan.nonsensitive_bin);
  return plan;
}

namespace {

std::uint64_t bytes_of(const std::vector<std::string>& items) {
  std::uint64_t total = 0;
  for (const auto& s : items) total += s.size();
  return total;
}

std::uint64_t row_bytes(const Row& row) {
  std::uint64_t total = row.row_id.size();
  for (const auto& [k, v] : row.attributes) total += k.size() + v.size();
  return total;
}

StoreObservation observe(const std::vector<std::string>& tokens,
                         const std::vector<Value>& plain_values,
                         const std::vector<Ciphertext>& cipher_hits,
                         const std::vector<Row>& plain_hits) {
  StoreObservation obs;
  obs.cipher_predicates = tokens;
  obs.plain_predicates = plain_values;
  for (const Ciphertext& c : cipher_hits) obs.returned_refs.push_back(c.tuple_ref);
  for (const Row& r : plain_hits) obs.returned_row_ids.push_back(r.row_id);
  std::sort(obs.cipher_predicates.begin(), obs.cipher_predicates.end());
  std::sort(obs.plain_predicates.begin(), obs.plain_predicates.end());
  std::sort(obs.returned_refs.begin(), obs.returned_refs.end());
  std::sort(obs.returned_row_ids.begin(), obs.returned_row_ids.end());
  return obs;
}

QueryResult run_fetch(const Value& w, const std::vector<std::string>& tokens,
                      const std::vector<Value>& plain_values, const EncryptedStore& enc,
                      const PlaintextStore& plain, const Owner& owner, ObservationLog* log,
                      ScanCharge charge) {
  QueryResult result;
  std::uint64_t scanned_before = enc.rows_scanned();

  std::vector<Ciphertext> cipher_hits = enc.select(tokens, charge);
  std::vector<Row> plain_hits = plain.select(plain_values);

  result.stats.encrypted_fetched = cipher_hits.size();
  result.stats.plain_fetched = plain_hits.size();
  result.stats.bytes_sent = bytes_of(tokens) + bytes_of(plain_values);
  result.stats.encrypted_rows_scanned = enc.rows_scanned() - scanned_before;

  for (const Ciphertext& c : cipher_hits) {
    result.stats.bytes_received += c.blob_b64.size();
    OpenedRow opened = open_row(owner.keys, c);
    if (opened.fake) {
      result.stats.discarded_fakes++;
      continue;
    }
    if (opened.row.attr(plain.attribute()) != w) {
      result.stats.discarded_binmates++;
      continue;
    }
    result.rows.push_back(opened.row);
  }
  for (const Row& r : plain_hits) {
    result.stats.bytes_received += row_bytes(r);
    if (r.attr(plain.attribute()) != w) {
      result.stats.discarded_binmates++;
      continue;
    }
    result.rows.push_back(r);
  }

  if (log) log->append(observe(tokens, plain_values, cipher_hits, plain_hits));
  return result;
}

}  // namespace

QueryResult execute(const QueryPlan& plan, const EncryptedStore& enc, const PlaintextStore& plain,
                    const Owner& owner, ObservationLog* log, ScanCharge charge) {
  if (plan.empty()) return {};
  return run_fetch(plan.query_value, plan.tokens, plan.plain_values, enc, plain, owner, log,
                   charge);
}

QueryResult execute_naive(const Value& w, const EncryptedStore& enc, const PlaintextStore& plain,
                          const Owner& owner, ObservationLog* log, ScanCharge charge) {
  std::vector<std::string> tokens;
  if (owner.meta.has_sensitive(w)) tokens = owner.value_tokens(w);
  return run_fetch(w, tokens, {w}, enc, plain, owner, log, charge);
}

std::vector<std::string> brute_force_select(const PartitionedRelation& rel, const Value& w) {
  std::vector<std::string> ids;
  auto scan = [&](const std::vector<Row>& rows) {
    for (const Row& row : rows) {
      if (row.attr(rel.searchable_attribute) == w) ids.push_back(row.row_id);
    }
  };
  scan(rel.sensitive_rows);
  scan(rel.nonsensitive_rows);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace qbin
