#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qbin/audit.hpp"
#include "qbin/binning.hpp"
#include "qbin/executor.hpp"

namespace qbin {

struct MultiplicitySpec {
  enum class Kind { uniform, arithmetic, zipf, list };
  Kind kind = Kind::uniform;
  std::uint64_t uniform_count = 1;
  std::uint64_t arith_start = 10;
  std::uint64_t arith_step = 10;
  double zipf_s = 1.0;
  std::uint64_t zipf_max = 100;
  std::vector<std::uint64_t> explicit_counts;

  std::uint64_t count_for(std::size_t index, std::size_t total) const;
};

MultiplicitySpec parse_multiplicity(const std::string& text);

struct GenerateSpec {
  std::size_t sensitive_values = 0;
  std::size_t nonsensitive_values = 0;
  std::size_t shared_values = 0;  // values with tuples on both sides
  MultiplicitySpec sensitive_mult;
  MultiplicitySpec nonsensitive_mult;
  std::uint64_t seed = 1;
  std::string attribute = "A";
  bool tpch_names = false;
};

// Deterministic synthetic relation with the requested distinct values and
// tuple multiplicities. Shared values count toward both sides.
std::vector<Row> generate_dataset(const GenerateSpec& spec);

struct WorkloadSpec {
  enum class Kind { uniform, zipf, explicit_list };
  Kind kind = Kind::uniform;
  double zipf_s = 1.0;
  std::vector<Value> explicit_values;
  std::size_t count = 0;
  std::uint64_t seed = 1;
};

std::vector<Value> sample_workload(const WorkloadSpec& spec, const std::vector<Value>& domain);
std::map<Value, double> workload_frequencies(const std::vector<Value>& queries);

struct QueryRecord {
  std::uint64_t index = 0;
  Value value;
  std::vector<std::string> row_ids;
  QueryStats stats;
  bool verified = true;
};

struct BenchReport {
  std::vector<QueryRecord> queries;
  std::uint64_t encrypted_store_size = 0;
  std::uint64_t plain_store_size = 0;
  std::uint64_t fake_rows = 0;
  std::uint64_t total_encrypted_rows_scanned = 0;
  std::uint64_t total_plain_fetched = 0;
  std::uint64_t total_encrypted_fetched = 0;
  std::uint64_t total_discarded = 0;
  std::uint64_t total_bytes_sent = 0;
  std::uint64_t total_bytes_received = 0;
  std::uint64_t verify_failures = 0;

  void add(const QueryRecord& q);
};

struct PipelineResult {
  Owner owner;
  UploadResult stores;
  ObservationLog log;
  AdversaryView view;
  BenchReport report;
};

struct PipelineOptions {
  std::string layout_mode = "auto";  // base | near-square | general | reversed | auto
  bool naive = false;
  bool verify = false;
  ScanCharge charge = ScanCharge::per_query;
};

// End-to-end: ingest, bin, upload, run the workload, log observations and
// counters; optionally checks every answer against the brute-force oracle.
PipelineResult run_workload(const std::vector<Row>& rows, const std::string& attribute,
                            const WorkloadSpec& workload, const PipelineOptions& opts, Rng root);

}  // namespace qbin
