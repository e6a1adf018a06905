#include "qbin/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace qbin::io {

using nlohmann::json;

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw QbinError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw QbinError("cannot write " + path.string());
  out << text;
}

std::string value_to_token(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

Row row_from_json(const json& j) {
  Row row;
  if (!j.contains("row_id")) throw QbinError("dataset row without row_id");
  row.row_id = value_to_token(j["row_id"]);
  row.sensitive = j.value("sensitive", false);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "row_id" || it.key() == "sensitive") continue;
    row.attributes[it.key()] = value_to_token(it.value());
  }
  return row;
}

json row_to_json(const Row& row) {
  json j;
  j["row_id"] = row.row_id;
  j["sensitive"] = row.sensitive;
  for (const auto& [k, v] : row.attributes) j[k] = v;
  return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

}  // namespace

std::vector<Row> read_rows_ndjson(const std::filesystem::path& path) {
  std::vector<Row> rows;
  for (const std::string& line : read_lines(path)) {
    rows.push_back(row_from_json(json::parse(line)));
  }
  return rows;
}

std::vector<Row> read_rows_csv(const std::filesystem::path& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw QbinError("empty csv " + path.string());
  std::vector<std::string> header = split_csv_line(lines[0]);
  std::vector<Row> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> fields = split_csv_line(lines[i]);
    if (fields.size() != header.size()) {
      throw QbinError("csv row " + std::to_string(i) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    Row row;
    for (std::size_t f = 0; f < header.size(); ++f) {
      if (header[f] == "row_id") {
        row.row_id = fields[f];
      } else if (header[f] == "sensitive") {
        row.sensitive = fields[f] == "true" || fields[f] == "1";
      } else {
        row.attributes[header[f]] = fields[f];
      }
    }
    if (row.row_id.empty()) row.row_id = "t" + std::to_string(i);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> read_rows_auto(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return read_rows_csv(path);
  return read_rows_ndjson(path);
}

void write_rows_ndjson(const std::filesystem::path& path, const std::vector<Row>& rows) {
  std::ostringstream os;
  for (const Row& row : rows) os << row_to_json(row).dump() << "\n";
  write_text(path, os.str());
}

void write_layout(const std::filesystem::path& path, const BinLayout& layout) {
  std::ostringstream os;
  json head;
  head["type"] = "layout";
  head["mode"] = to_string(layout.mode);
  head["permutation_seed"] = layout.permutation_seed;
  head["fake_counts"] = layout.fake_counts;
  os << head.dump() << "\n";
  for (std::size_t b = 0; b < layout.sensitive_bins.size(); ++b) {
    json j;
    j["type"] = "sbin";
    j["index"] = b;
    j["values"] = layout.sensitive_bins[b];
    os << j.dump() << "\n";
  }
  for (std::size_t b = 0; b < layout.nonsensitive_bins.size(); ++b) {
    json j;
    j["type"] = "nsbin";
    j["index"] = b;
    json slots = json::array();
    for (const auto& slot : layout.nonsensitive_bins[b]) {
      if (slot) {
        slots.push_back(*slot);
      } else {
        slots.push_back(nullptr);
      }
    }
    j["slots"] = slots;
    os << j.dump() << "\n";
  }
  write_text(path, os.str());
}

BinLayout read_layout(const std::filesystem::path& path) {
  BinLayout layout;
  bool saw_head = false;
  for (const std::string& line : read_lines(path)) {
    json j = json::parse(line);
    std::string type = j.value("type", "");
    if (type == "layout") {
      layout.mode = bin_mode_from_string(j.value("mode", "base"));
      layout.permutation_seed = j.value("permutation_seed", std::uint64_t{0});
      layout.fake_counts = j.value("fake_counts", std::vector<std::uint64_t>{});
      saw_head = true;
    } else if (type == "sbin") {
      std::size_t idx = j.at("index").get<std::size_t>();
      if (layout.sensitive_bins.size() <= idx) layout.sensitive_bins.resize(idx + 1);
      layout.sensitive_bins[idx] = j.at("values").get<std::vector<Value>>();
    } else if (type == "nsbin") {
      std::size_t idx = j.at("index").get<std::size_t>();
      if (layout.nonsensitive_bins.size() <= idx) layout.nonsensitive_bins.resize(idx + 1);
      std::vector<std::optional<Value>> slots;
      for (const json& s : j.at("slots")) {
        if (s.is_null()) {
          slots.push_back(std::nullopt);
        } else {
          slots.push_back(s.get<Value>());
        }
      }
      layout.nonsensitive_bins[idx] = std::move(slots);
    }
  }
  if (!saw_head) throw QbinError("layout file " + path.string() + " has no header line");
  if (layout.fake_counts.size() != layout.sensitive_bins.size()) {
    layout.fake_counts.assign(layout.sensitive_bins.size(), 0);
  }
  return layout;
}

void write_keys(const std::filesystem::path& path, const OwnerKeys& keys) {
  json j;
  j["enc"] = keys.enc;
  j["mac"] = keys.mac;
  j["tag"] = keys.tag;
  write_text(path, j.dump() + "\n");
}

OwnerKeys read_keys(const std::filesystem::path& path) {
  json j = json::parse(read_lines(path).at(0));
  OwnerKeys keys;
  keys.enc = j.at("enc").get<std::uint64_t>();
  keys.mac = j.at("mac").get<std::uint64_t>();
  keys.tag = j.at("tag").get<std::uint64_t>();
  return keys;
}

void write_encrypted_store(const std::filesystem::path& path, const EncryptedStore& store) {
  std::ostringstream os;
  for (const Ciphertext& c : store.rows()) {
    json j;
    j["ref"] = c.tuple_ref;
    j["token"] = c.token;
    j["blob"] = c.blob_b64;
    os << j.dump() << "\n";
  }
  write_text(path, os.str());
}

EncryptedStore read_encrypted_store(const std::filesystem::path& path) {
  std::vector<Ciphertext> rows;
  for (const std::string& line : read_lines(path)) {
    json j = json::parse(line);
    rows.push_back({j.at("ref").get<std::string>(), j.at("token").get<std::string>(),
                    j.at("blob").get<std::string>()});
  }
  return EncryptedStore(std::move(rows));
}

void write_plain_store(const std::filesystem::path& path, const PlaintextStore& store) {
  std::ostringstream os;
  json head;
  head["type"] = "plain_store";
  head["attribute"] = store.attribute();
  os << head.dump() << "\n";
  for (const Row& row : store.rows()) os << row_to_json(row).dump() << "\n";
  write_text(path, os.str());
}

PlaintextStore read_plain_store(const std::filesystem::path& path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw QbinError("empty plain store " + path.string());
  json head = json::parse(lines[0]);
  std::string attribute = head.at("attribute").get<std::string>();
  std::vector<Row> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    rows.push_back(row_from_json(json::parse(lines[i])));
    rows.back().sensitive = false;
  }
  return PlaintextStore(std::move(rows), attribute);
}

void write_view(const std::filesystem::path& path, const AdversaryView& av) {
  std::ostringstream os;
  json head;
  head["type"] = "aux";
  head["s_value_count"] = av.s_value_count;
  head["ns_values"] = av.ns_values;
  head["refs"] = av.refs;
  os << head.dump() << "\n";
  for (const StoreObservation& obs : av.observations) {
    json j;
    j["type"] = "obs";
    j["query_index"] = obs.query_index;
    j["cipher_predicates"] = obs.cipher_predicates;
    j["plain_predicates"] = obs.plain_predicates;
    j["returned_refs"] = obs.returned_refs;
    j["returned_row_ids"] = obs.returned_row_ids;
    os << j.dump() << "\n";
  }
  write_text(path, os.str());
}

AdversaryView read_view(const std::filesystem::path& path) {
  AdversaryView av;
  for (const std::string& line : read_lines(path)) {
    json j = json::parse(line);
    std::string type = j.value("type", "obs");
    if (type == "aux") {
      av.s_value_count = j.value("s_value_count", std::size_t{0});
      av.ns_values = j.value("ns_values", std::vector<Value>{});
      av.refs = j.value("refs", std::vector<std::string>{});
    } else {
      StoreObservation obs;
      obs.query_index = j.value("query_index", std::uint64_t{0});
      obs.cipher_predicates = j.value("cipher_predicates", std::vector<std::string>{});
      obs.plain_predicates = j.value("plain_predicates", std::vector<Value>{});
      obs.returned_refs = j.value("returned_refs", std::vector<std::string>{});
      obs.returned_row_ids = j.value("returned_row_ids", std::vector<std::string>{});
      av.observations.push_back(std::move(obs));
    }
  }
  return av;
}

std::string graph_csv(const AssociationGraph& g) {
  std::ostringstream os;
  os << "left,right,alive\n";
  auto label = [](const std::vector<std::string>& members) {
    std::string out;
    for (const std::string& m : members) {
      if (!out.empty()) out.push_back('|');
      out += m;
    }
    return out;
  };
  for (std::size_t i = 0; i < g.left_members.size(); ++i) {
    for (std::size_t j = 0; j < g.right_members.size(); ++j) {
      os << '"' << label(g.left_members[i]) << "\",\"" << label(g.right_members[j]) << "\","
         << (g.alive[i][j] ? 1 : 0) << "\n";
    }
  }
  return os.str();
}

std::string verdict_json(const SecurityVerdict& v) {
  json j;
  j["condition1_holds"] = v.condition1_holds;
  j["condition2_holds"] = v.condition2_holds;
  j["worlds_prior"] = v.worlds_prior;
  j["worlds_posterior"] = v.worlds_posterior;
  if (!v.note.empty()) j["note"] = v.note;
  json w1 = json::array();
  for (const PairShift& s : v.association_witnesses) {
    w1.push_back({{"ref", s.ref}, {"value", s.value}, {"before", s.before}, {"after", s.after}});
  }
  j["association_witnesses"] = w1;
  json w2 = json::array();
  for (const CountShift& s : v.count_witnesses) {
    w2.push_back(
        {{"left", s.left}, {"right", s.right}, {"before_eq", s.before_eq}, {"after_eq", s.after_eq}});
  }
  j["count_witnesses"] = w2;
  j["prior_sensitive"] = v.prior_sensitive;
  j["posterior_sensitive"] = v.posterior_sensitive;
  return j.dump(2);
}

std::string attack_json(const AttackReport& r) {
  json j;
  j["name"] = r.name;
  j["succeeded"] = r.succeeded;
  j["advantage"] = r.advantage;
  j["detail"] = r.detail;
  j["candidate_refs"] = r.candidate_refs;
  if (r.flagged_pair_total) j["flagged_pair_total"] = *r.flagged_pair_total;
  return j.dump(2);
}

}  // namespace qbin::io
