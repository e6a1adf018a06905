#include "qbin/stores.hpp"

#include <algorithm>
#include <json.hpp>
#include <unordered_set>

namespace qbin {

using nlohmann::json;

namespace {

std::string row_payload(const Row& row, bool fake) {
  json j;
  j["id"] = row.row_id;
  j["fake"] = fake;
  json attrs = json::object();
  for (const auto& [k, v] : row.attributes) attrs[k] = v;
  j["attrs"] = attrs;
  return j.dump();
}

std::string zero_padded(std::uint64_t v, int width) {
  std::string s = std::to_string(v);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

std::vector<Ciphertext> EncryptedStore::select(const std::vector<std::string>& tokens,
                                               ScanCharge charge) const {
  if (tokens.empty()) return {};
  std::unordered_set<std::string> wanted(tokens.begin(), tokens.end());
  scans_.fetch_add(1);
  std::uint64_t scanned = rows_.size();
  if (charge == ScanCharge::per_token) scanned *= tokens.size();
  rows_scanned_.fetch_add(scanned);

  std::vector<Ciphertext> out;
  for (const Ciphertext& row : rows_) {
    if (wanted.count(row.token)) out.push_back(row);
  }
  return out;
}

PlaintextStore::PlaintextStore(std::vector<Row> rows, std::string attribute)
    : rows_(std::move(rows)), attribute_(std::move(attribute)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    index_[rows_[i].attr(attribute_)].push_back(i);
  }
}

std::vector<Row> PlaintextStore::select(const std::vector<Value>& values) const {
  lookups_.fetch_add(values.size());
  std::vector<std::size_t> hits;
  for (const Value& v : values) {
    auto it = index_.find(v);
    if (it == index_.end()) continue;
    hits.insert(hits.end(), it->second.begin(), it->second.end());
  }
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  std::vector<Row> out;
  out.reserve(hits.size());
  for (std::size_t i : hits) out.push_back(rows_[i]);
  return out;
}

std::vector<Value> PlaintextStore::distinct_values() const {
  std::vector<Value> out;
  std::unordered_set<Value> seen;
  for (const Row& row : rows_) {
    const Value& v = row.attr(attribute_);
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

UploadResult encrypt_and_upload(const PartitionedRelation& rel, const OwnerMetadata& meta,
                                const BinLayout& layout, const OwnerKeys& keys, Rng rng) {
  const std::string& attr = rel.searchable_attribute;

  // Fixed pad width across real and fake rows so lengths carry no signal.
  std::size_t widest = row_payload(Row{"fake", {}, true}, true).size();
  for (const Row& row : rel.sensitive_rows) {
    widest = std::max(widest, row_payload(row, false).size());
  }
  std::size_t pad_width = ((widest + 4) + 15) / 16 * 16 + 16;

  Rng nonces = rng.derive("nonce");
  std::unordered_map<Value, std::uint64_t> occurrence;

  struct Pending {
    std::string token;
    std::vector<std::uint8_t> blob;
  };
  std::vector<Pending> pending;
  pending.reserve(rel.sensitive_rows.size());

  for (const Row& row : rel.sensitive_rows) {
    const Value& v = row.attr(attr);
    if (!layout.find_sensitive(v)) {
      throw QbinError("upload: sensitive value '" + v + "' is not covered by the layout");
    }
    std::uint64_t occ = occurrence[v]++;
    pending.push_back({search_token(keys, v, occ),
                       seal_payload(keys, row_payload(row, false), pad_width, nonces.next())});
  }

  // Fake rows take the occurrence range past the real count of their value so
  // bin queries return them; distribution mirrors BinLayout::fake_share.
  std::uint64_t fake_rows = 0;
  for (std::size_t b = 0; b < layout.fake_counts.size(); ++b) {
    const auto& values = layout.sensitive_bins[b];
    std::uint64_t fc = layout.fake_counts[b];
    if (fc > 0 && values.empty()) throw QbinError("fake tuples assigned to an empty bin");
    for (std::uint64_t k = 0; k < fc; ++k) {
      const Value& v = values[k % values.size()];
      std::uint64_t occ = meta.sensitive_count_of(v) + k / values.size();
      Row filler;
      filler.row_id = "fake-" + std::to_string(b) + "-" + std::to_string(k);
      filler.sensitive = true;
      pending.push_back({search_token(keys, v, occ),
                         seal_payload(keys, row_payload(filler, true), pad_width, nonces.next())});
      ++fake_rows;
    }
  }

  Rng shuffler = rng.derive("upload_shuffle");
  shuffler.shuffle(pending);

  std::vector<Ciphertext> rows;
  rows.reserve(pending.size());
  int width = pending.size() >= 1000000 ? 8 : 6;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    rows.push_back({"r" + zero_padded(i, width), pending[i].token, to_base64(pending[i].blob)});
  }

  for (const Row& row : rel.nonsensitive_rows) {
    const Value& v = row.attr(attr);
    if (!layout.find_nonsensitive(v)) {
      throw QbinError("upload: non-sensitive value '" + v + "' is not covered by the layout");
    }
  }

  UploadResult result;
  result.encrypted = EncryptedStore(std::move(rows));
  result.plain = PlaintextStore(rel.nonsensitive_rows, attr);
  result.pad_width = pad_width;
  result.fake_rows = fake_rows;
  return result;
}

OpenedRow open_row(const OwnerKeys& keys, const Ciphertext& ct) {
  std::string payload = open_payload(keys, from_base64(ct.blob_b64));
  json j = json::parse(payload);
  OpenedRow out;
  out.fake = j.value("fake", false);
  out.row.row_id = j.value("id", "");
  out.row.sensitive = true;
  if (j.contains("attrs")) {
    for (auto it = j["attrs"].begin(); it != j["attrs"].end(); ++it) {
      out.row.attributes[it.key()] = it.value().get<std::string>();
    }
  }
  return out;
}

}  // namespace qbin
