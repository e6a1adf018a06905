#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qbin/audit.hpp"
#include "qbin/binning.hpp"
#include "qbin/core.hpp"
#include "qbin/stores.hpp"

namespace qbin::io {

// NDJSON dataset: one row object per line with row_id, sensitive and the
// attribute columns. CSV alternative: header row with row_id and sensitive
// columns.
std::vector<Row> read_rows_ndjson(const std::filesystem::path& path);
std::vector<Row> read_rows_csv(const std::filesystem::path& path);
std::vector<Row> read_rows_auto(const std::filesystem::path& path);
void write_rows_ndjson(const std::filesystem::path& path, const std::vector<Row>& rows);

// Owner-side layout file; trusted owner state, not for upload.
void write_layout(const std::filesystem::path& path, const BinLayout& layout);
BinLayout read_layout(const std::filesystem::path& path);

void write_keys(const std::filesystem::path& path, const OwnerKeys& keys);
OwnerKeys read_keys(const std::filesystem::path& path);

void write_encrypted_store(const std::filesystem::path& path, const EncryptedStore& store);
EncryptedStore read_encrypted_store(const std::filesystem::path& path);

void write_plain_store(const std::filesystem::path& path, const PlaintextStore& store);
PlaintextStore read_plain_store(const std::filesystem::path& path);

void write_view(const std::filesystem::path& path, const AdversaryView& av);
AdversaryView read_view(const std::filesystem::path& path);

std::string graph_csv(const AssociationGraph& g);

std::string verdict_json(const SecurityVerdict& v);
std::string attack_json(const AttackReport& r);

}  // namespace qbin::io
