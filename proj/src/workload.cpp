#include "qbin/workload.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qbin {

std::uint64_t MultiplicitySpec::count_for(std::size_t index, std::size_t total) const {
  switch (kind) {
    case Kind::uniform:
      return uniform_count;
    case Kind::arithmetic:
      return arith_start + arith_step * static_cast<std::uint64_t>(index);
    case Kind::zipf: {
      double w = 1.0 / std::pow(static_cast<double>(index + 1), zipf_s);
      std::uint64_t c = static_cast<std::uint64_t>(std::llround(w * static_cast<double>(zipf_max)));
      return std::max<std::uint64_t>(1, c);
    }
    case Kind::list: {
      if (explicit_counts.empty()) return 1;
      return explicit_counts[index % explicit_counts.size()];
    }
  }
  (void)total;
  return 1;
}

MultiplicitySpec parse_multiplicity(const std::string& text) {
  MultiplicitySpec spec;
  if (text.empty() || text == "uniform" || text == "uniform:1") return spec;
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "uniform") {
    spec.kind = MultiplicitySpec::Kind::uniform;
    spec.uniform_count = std::stoull(args);
  } else if (kind == "arith") {
    spec.kind = MultiplicitySpec::Kind::arithmetic;
    auto comma = args.find(',');
    if (comma == std::string::npos) throw QbinError("arith multiplicity needs start,step");
    spec.arith_start = std::stoull(args.substr(0, comma));
    spec.arith_step = std::stoull(args.substr(comma + 1));
  } else if (kind == "zipf") {
    spec.kind = MultiplicitySpec::Kind::zipf;
    auto comma = args.find(',');
    spec.zipf_s = std::stod(comma == std::string::npos ? args : args.substr(0, comma));
    if (comma != std::string::npos) spec.zipf_max = std::stoull(args.substr(comma + 1));
  } else if (kind == "list") {
    spec.kind = MultiplicitySpec::Kind::list;
    std::size_t at = 0;
    while (at < args.size()) {
      auto comma = args.find(',', at);
      std::string piece = args.substr(at, comma == std::string::npos ? std::string::npos : comma - at);
      spec.explicit_counts.push_back(std::stoull(piece));
      if (comma == std::string::npos) break;
      at = comma + 1;
    }
  } else {
    throw QbinError("unknown multiplicity spec '" + text + "'");
  }
  return spec;
}

std::vector<Row> generate_dataset(const GenerateSpec& spec) {
  if (spec.shared_values > spec.sensitive_values || spec.shared_values > spec.nonsensitive_values) {
    throw QbinError("shared values cannot exceed either side");
  }
  if (spec.sensitive_values + spec.nonsensitive_values == 0) {
    throw QbinError("dataset needs at least one value");
  }
  const std::string attr = spec.tpch_names ? "L_PARTKEY" : spec.attribute;
  std::vector<Row> rows;
  std::uint64_t row_seq = 0;
  auto emit = [&](const Value& v, bool sensitive, std::uint64_t count) {
    for (std::uint64_t k = 0; k < count; ++k) {
      Row row;
      row.row_id = "t" + std::to_string(++row_seq);
      row.sensitive = sensitive;
      row.attributes[attr] = v;
      if (spec.tpch_names) row.attributes["L_SUPPKEY"] = "s" + std::to_string(row_seq % 97);
      rows.push_back(std::move(row));
    }
  };

  // shared values carry tuples on both sides; the rest are side-exclusive
  for (std::size_t i = 0; i < spec.sensitive_values; ++i) {
    bool shared = i < spec.shared_values;
    Value v = shared ? "v" + std::to_string(i + 1) : "s" + std::to_string(i + 1);
    emit(v, true, std::max<std::uint64_t>(1, spec.sensitive_mult.count_for(i, spec.sensitive_values)));
  }
  for (std::size_t i = 0; i < spec.nonsensitive_values; ++i) {
    bool shared = i < spec.shared_values;
    Value v = shared ? "v" + std::to_string(i + 1) : "n" + std::to_string(i + 1);
    emit(v, false,
         std::max<std::uint64_t>(1, spec.nonsensitive_mult.count_for(i, spec.nonsensitive_values)));
  }
  return rows;
}

std::vector<Value> sample_workload(const WorkloadSpec& spec, const std::vector<Value>& domain) {
  if (domain.empty()) throw QbinError("workload domain is empty");
  std::vector<Value> queries;
  queries.reserve(spec.count);
  Rng rng = Rng(spec.seed).derive("workload");
  switch (spec.kind) {
    case WorkloadSpec::Kind::uniform: {
      for (std::size_t i = 0; i < spec.count; ++i) {
        queries.push_back(domain[rng.below(domain.size())]);
      }
      break;
    }
    case WorkloadSpec::Kind::zipf: {
      std::vector<double> cdf(domain.size());
      double total = 0;
      for (std::size_t i = 0; i < domain.size(); ++i) {
        total += 1.0 / std::pow(static_cast<double>(i + 1), spec.zipf_s);
        cdf[i] = total;
      }
      for (std::size_t i = 0; i < spec.count; ++i) {
        double u = rng.unit() * total;
        std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        queries.push_back(domain[std::min(idx, domain.size() - 1)]);
      }
      break;
    }
    case WorkloadSpec::Kind::explicit_list: {
      queries = spec.explicit_values;
      if (spec.count > 0 && queries.size() > spec.count) queries.resize(spec.count);
      break;
    }
  }
  return queries;
}

std::map<Value, double> workload_frequencies(const std::vector<Value>& queries) {
  std::map<Value, double> freq;
  for (const Value& q : queries) freq[q] += 1.0;
  for (auto& [value, count] : freq) {
    (void)value;
    count /= static_cast<double>(queries.size());
  }
  return freq;
}

void BenchReport::add(const QueryRecord& q) {
  queries.push_back(q);
  total_encrypted_rows_scanned += q.stats.encrypted_rows_scanned;
  total_plain_fetched += q.stats.plain_fetched;
  total_encrypted_fetched += q.stats.encrypted_fetched;
  total_discarded += q.stats.discarded();
  total_bytes_sent += q.stats.bytes_sent;
  total_bytes_received += q.stats.bytes_received;
  if (!q.verified) ++verify_failures;
}

PipelineResult run_workload(const std::vector<Row>& rows, const std::string& attribute,
                            const WorkloadSpec& workload, const PipelineOptions& opts, Rng root) {
  PipelineResult out;
  PartitionedRelation rel = ingest(rows, attribute);
  out.owner.meta = build_metadata(rel);
  out.owner.keys = derive_keys(root.derive("keys"));

  Rng binning = root.derive("binning");
  if (opts.layout_mode == "auto") {
    out.owner.layout = create_bins_auto(out.owner.meta, binning);
  } else if (opts.layout_mode == "base") {
    out.owner.layout = create_bins_base(out.owner.meta, binning);
  } else if (opts.layout_mode == "near-square") {
    out.owner.layout = create_bins_near_square(out.owner.meta, binning);
  } else if (opts.layout_mode == "general") {
    out.owner.layout = create_bins_general(out.owner.meta, binning);
  } else if (opts.layout_mode == "reversed") {
    out.owner.layout = create_bins_reversed(out.owner.meta, binning);
  } else {
    throw QbinError("unknown layout mode '" + opts.layout_mode + "'");
  }

  out.stores = encrypt_and_upload(rel, out.owner.meta, out.owner.layout, out.owner.keys,
                                  root.derive("upload"));

  std::vector<Value> domain;
  {
    std::set<Value> seen;
    for (const ValueCount& vc : out.owner.meta.sensitive_values) {
      if (seen.insert(vc.value).second) domain.push_back(vc.value);
    }
    for (const ValueCount& vc : out.owner.meta.nonsensitive_values) {
      if (seen.insert(vc.value).second) domain.push_back(vc.value);
    }
  }
  std::vector<Value> queries = sample_workload(workload, domain);

  out.report.encrypted_store_size = out.stores.encrypted.size();
  out.report.plain_store_size = out.stores.plain.size();
  out.report.fake_rows = out.stores.fake_rows;

  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Value& w = queries[i];
    QueryResult result;
    if (opts.naive) {
      result = execute_naive(w, out.stores.encrypted, out.stores.plain, out.owner, &out.log,
                             opts.charge);
    } else {
      QueryPlan plan = plan_query(out.owner, w);
      result = execute(plan, out.stores.encrypted, out.stores.plain, out.owner, &out.log,
                       opts.charge);
    }
    QueryRecord record;
    record.index = i;
    record.value = w;
    record.stats = result.stats;
    for (const Row& row : result.rows) record.row_ids.push_back(row.row_id);
    std::sort(record.row_ids.begin(), record.row_ids.end());
    if (opts.verify) {
      record.verified = record.row_ids == brute_force_select(rel, w);
    }
    out.report.add(record);
  }

  out.view = make_view(out.log, out.stores.encrypted, out.stores.plain, out.owner.meta.s_count());
  return out;
}

}  // namespace qbin
