#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <string>

#include "qbin/audit.hpp"
#include "qbin/binning.hpp"
#include "qbin/costmodel.hpp"
#include "qbin/executor.hpp"
#include "qbin/io.hpp"
#include "qbin/workload.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qbin;

namespace {

constexpr int kExitVerifyFailure = 2;
constexpr int kExitAuditFailure = 3;

std::uint64_t root_seed(std::uint64_t cli_seed, bool seed_given) {
  if (seed_given) return cli_seed;
  if (const char* env = std::getenv("QBIN_SEED")) return std::stoull(env);
  return 1;
}

json stats_json(const QueryStats& s) {
  json j;
  j["encrypted_fetched"] = s.encrypted_fetched;
  j["plain_fetched"] = s.plain_fetched;
  j["discarded_fakes"] = s.discarded_fakes;
  j["discarded_binmates"] = s.discarded_binmates;
  j["bytes_sent"] = s.bytes_sent;
  j["bytes_received"] = s.bytes_received;
  j["encrypted_rows_scanned"] = s.encrypted_rows_scanned;
  return j;
}

json bench_json(const BenchReport& r) {
  json j;
  j["encrypted_store_size"] = r.encrypted_store_size;
  j["plain_store_size"] = r.plain_store_size;
  j["fake_rows"] = r.fake_rows;
  j["queries"] = r.queries.size();
  j["total_encrypted_rows_scanned"] = r.total_encrypted_rows_scanned;
  j["total_encrypted_fetched"] = r.total_encrypted_fetched;
  j["total_plain_fetched"] = r.total_plain_fetched;
  j["total_discarded"] = r.total_discarded;
  j["total_bytes_sent"] = r.total_bytes_sent;
  j["total_bytes_received"] = r.total_bytes_received;
  j["verify_failures"] = r.verify_failures;
  return j;
}

Owner load_owner(const fs::path& layout_path) {
  Owner owner;
  owner.layout = io::read_layout(layout_path);
  fs::path dir = layout_path.parent_path();
  owner.keys = io::read_keys(dir / "keys.json");
  std::vector<Row> meta_rows = io::read_rows_ndjson(dir / "meta.ndjson");
  // meta.ndjson stores the relation's rows in normalized form
  std::string attr;
  {
    std::ifstream in(dir / "attribute.txt");
    if (!in || !(in >> attr)) throw QbinError("missing attribute.txt next to the layout");
  }
  PartitionedRelation rel = ingest(meta_rows, attr);
  owner.meta = build_metadata(rel);
  return owner;
}

WorkloadSpec parse_workload(const std::string& dist, std::size_t count, std::uint64_t seed) {
  WorkloadSpec spec;
  spec.count = count;
  spec.seed = seed;
  if (dist == "uniform") {
    spec.kind = WorkloadSpec::Kind::uniform;
  } else if (dist.rfind("zipf:", 0) == 0) {
    spec.kind = WorkloadSpec::Kind::zipf;
    spec.zipf_s = std::stod(dist.substr(5));
  } else if (dist.rfind("file:", 0) == 0) {
    spec.kind = WorkloadSpec::Kind::explicit_list;
    std::ifstream in(dist.substr(5));
    if (!in) throw QbinError("cannot open workload file");
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) spec.explicit_values.push_back(line);
    }
  } else {
    throw QbinError("unknown workload distribution '" + dist + "'");
  }
  return spec;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t at = 0;
  while (at < text.size()) {
    auto comma = text.find(',', at);
    out.push_back(std::stod(text.substr(at, comma == std::string::npos ? std::string::npos : comma - at)));
    if (comma == std::string::npos) break;
    at = comma + 1;
  }
  return out;
}

std::vector<double> parse_range(const std::string& text) {
  // "lo:hi:step" or a comma list
  auto c1 = text.find(':');
  if (c1 == std::string::npos) return parse_list(text);
  auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw QbinError("range needs lo:hi:step");
  double lo = std::stod(text.substr(0, c1));
  double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  double step = std::stod(text.substr(c2 + 1));
  if (step <= 0) throw QbinError("range step must be positive");
  std::vector<double> out;
  for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
  return out;
}

int cmd_generate(const GenerateSpec& spec, const std::string& out) {
  std::vector<Row> rows = generate_dataset(spec);
  io::write_rows_ndjson(out, rows);
  std::cerr << "wrote " << rows.size() << " rows to " << out << "\n";
  return 0;
}

int cmd_ingest(const std::string& in, const std::string& attr, const std::string& out) {
  std::vector<Row> rows = io::read_rows_auto(in);
  PartitionedRelation rel = ingest(rows, attr);
  OwnerMetadata meta = build_metadata(rel);
  std::vector<Row> all = rel.sensitive_rows;
  all.insert(all.end(), rel.nonsensitive_rows.begin(), rel.nonsensitive_rows.end());
  io::write_rows_ndjson(out, all);
  std::cerr << "relation: " << rel.sensitive_rows.size() << " sensitive rows, "
            << rel.nonsensitive_rows.size() << " non-sensitive rows, |S|=" << meta.s_count()
            << " |NS|=" << meta.ns_count() << " associated=" << meta.associated_values.size()
            << "\n";
  return 0;
}

int cmd_plan(const std::string& in, const std::string& attr, const std::string& mode,
             std::uint64_t seed, const std::string& out) {
  std::vector<Row> rows = io::read_rows_auto(in);
  PartitionedRelation rel = ingest(rows, attr);
  OwnerMetadata meta = build_metadata(rel);
  Rng rng = Rng(seed).derive("binning");
  BinLayout layout;
  if (mode == "auto") {
    layout = create_bins_auto(meta, rng);
  } else if (mode == "base") {
    layout = create_bins_base(meta, rng);
  } else if (mode == "near-square") {
    layout = create_bins_near_square(meta, rng);
  } else if (mode == "general") {
    layout = create_bins_general(meta, rng);
  } else if (mode == "reversed") {
    layout = create_bins_reversed(meta, rng);
  } else {
    throw QbinError("unknown mode '" + mode + "'");
  }
  validate_layout(layout, meta);
  io::write_layout(out, layout);
  std::cerr << "layout: mode=" << to_string(layout.mode) << " sensitive bins="
            << layout.sensitive_bin_count() << " non-sensitive bins="
            << layout.nonsensitive_bin_count() << " fake tuples=" << layout.total_fakes() << "\n"
            << "warning: this file is owner secret state; do not upload it\n";
  return 0;
}

int cmd_upload(const std::string& in, const std::string& attr, const std::string& layout_path,
               std::uint64_t seed, const std::string& stores_dir) {
  std::vector<Row> rows = io::read_rows_auto(in);
  PartitionedRelation rel = ingest(rows, attr);
  OwnerMetadata meta = build_metadata(rel);
  BinLayout layout = io::read_layout(layout_path);
  Rng root(seed);
  OwnerKeys keys = derive_keys(root.derive("keys"));
  UploadResult stores = encrypt_and_upload(rel, meta, layout, keys, root.derive("upload"));

  fs::create_directories(stores_dir);
  io::write_encrypted_store(fs::path(stores_dir) / "enc_store.ndjson", stores.encrypted);
  io::write_plain_store(fs::path(stores_dir) / "plain_store.ndjson", stores.plain);

  fs::path owner_dir = fs::path(layout_path).parent_path();
  io::write_keys(owner_dir / "keys.json", keys);
  std::vector<Row> all = rel.sensitive_rows;
  all.insert(all.end(), rel.nonsensitive_rows.begin(), rel.nonsensitive_rows.end());
  io::write_rows_ndjson(owner_dir / "meta.ndjson", all);
  std::ofstream(owner_dir / "attribute.txt") << attr << "\n";

  std::cerr << "uploaded " << stores.encrypted.size() << " encrypted rows ("
            << stores.fake_rows << " fake) and " << stores.plain.size() << " plaintext rows to "
            << stores_dir << "\n";
  return 0;
}

int cmd_query(const std::string& value, const std::string& layout_path,
              const std::string& stores_dir, bool naive) {
  Owner owner = load_owner(layout_path);
  EncryptedStore enc = io::read_encrypted_store(fs::path(stores_dir) / "enc_store.ndjson");
  PlaintextStore plain = io::read_plain_store(fs::path(stores_dir) / "plain_store.ndjson");

  ObservationLog log;
  QueryResult result;
  if (naive) {
    result = execute_naive(value, enc, plain, owner, &log);
  } else {
    result = execute(plan_query(owner, value), enc, plain, owner, &log);
  }

  for (const Row& row : result.rows) {
    json j;
    j["row_id"] = row.row_id;
    j["sensitive"] = row.sensitive;
    for (const auto& [k, v] : row.attributes) j[k] = v;
    std::cout << j.dump() << "\n";
  }
  std::cerr << "stats: " << stats_json(result.stats).dump() << "\n";

  // append the observation to the cloud-side view log
  fs::path av_path = fs::path(stores_dir) / "av.ndjson";
  AdversaryView av;
  if (fs::exists(av_path)) av = io::read_view(av_path);
  av.ns_values = plain.distinct_values();
  av.refs.clear();
  for (const Ciphertext& c : enc.rows()) av.refs.push_back(c.tuple_ref);
  av.s_value_count = owner.meta.s_count();
  for (const StoreObservation& obs : log.entries()) {
    StoreObservation copy = obs;
    copy.query_index = av.observations.size();
    av.observations.push_back(copy);
  }
  io::write_view(av_path, av);
  return 0;
}

int cmd_workload(const std::string& in, const std::string& attr, const std::string& mode,
                 const std::string& dist, std::size_t count, std::uint64_t seed, bool naive,
                 bool verify, bool charge_per_token, const std::string& out_dir) {
  std::vector<Row> rows = io::read_rows_auto(in);
  WorkloadSpec spec = parse_workload(dist, count, seed);
  PipelineOptions opts;
  opts.layout_mode = mode;
  opts.naive = naive;
  opts.verify = verify;
  opts.charge = charge_per_token ? ScanCharge::per_token : ScanCharge::per_query;
  PipelineResult result = run_workload(rows, attr, spec, opts, Rng(seed));

  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "results.ndjson");
    for (const QueryRecord& q : result.report.queries) {
      json j;
      j["query"] = q.index;
      j["value"] = q.value;
      j["rows"] = q.row_ids;
      j["stats"] = stats_json(q.stats);
      if (verify) j["verified"] = q.verified;
      out << j.dump() << "\n";
    }
  }
  io::write_view(fs::path(out_dir) / "av.ndjson", result.view);
  std::ofstream(fs::path(out_dir) / "bench.json") << bench_json(result.report).dump(2) << "\n";

  std::cerr << "ran " << result.report.queries.size() << " queries; encrypted store "
            << result.report.encrypted_store_size << " rows (" << result.report.fake_rows
            << " fake); verify failures " << result.report.verify_failures << "\n";
  return result.report.verify_failures == 0 ? 0 : kExitVerifyFailure;
}

int cmd_audit(const std::string& av_path, const std::string& check, const std::string& policy,
              const std::string& graph_out, double advantage_eps, std::uint64_t seed,
              std::size_t trials) {
  AdversaryView av = io::read_view(av_path);
  bool failed = false;

  if (check == "security") {
    SecurityOracleOptions opts;
    opts.policy = policy == "naive" ? ReplayPolicy::naive : ReplayPolicy::binned;
    SecurityVerdict verdict = check_partitioned_security(av, opts);
    std::cout << io::verdict_json(verdict) << "\n";
    failed = !verdict.holds();
  } else if (check == "size") {
    AttackReport report = size_attack(av);
    std::cout << io::attack_json(report) << "\n";
    failed = report.succeeded;
  } else if (check == "frequency") {
    AttackReport report = frequency_count_attack(av);
    std::cout << io::attack_json(report) << "\n";
    failed = report.succeeded;
  } else if (check == "skew") {
    std::map<Value, double> freq;  // frequencies reconstructed from the view
    double total = 0;
    for (const StoreObservation& obs : av.observations) {
      (void)obs;
      total += 1;
    }
    for (const StoreObservation& obs : av.observations) {
      for (const Value& v : obs.plain_predicates) freq[v] += 1.0 / std::max(total, 1.0);
    }
    AttackReport report = workload_skew_attack(av, freq);
    std::cout << io::attack_json(report) << "\n";
    failed = report.succeeded;
  } else {
    throw QbinError("unknown check '" + check + "'");
  }
  (void)advantage_eps;
  (void)seed;
  (void)trials;

  if (!graph_out.empty()) {
    AssociationGraph bins_graph = surviving_graph(av, Granularity::bins);
    std::ofstream(graph_out) << io::graph_csv(bins_graph);
  }
  return failed ? kExitAuditFailure : 0;
}

int cmd_model(double rho, const std::string& gammas, const std::string& alphas, double ns_values,
              double d, double beta, const std::string& calibrate) {
  if (!calibrate.empty()) {
    std::ifstream in(calibrate);
    if (!in) throw QbinError("cannot open " + calibrate);
    json j = json::parse(in);
    EmpiricalCounters c;
    c.queries = j.value("queries", 0.0);
    c.encrypted_rows_scanned = j.value("total_encrypted_rows_scanned", 0.0);
    c.rows_transferred =
        j.value("total_encrypted_fetched", 0.0) + j.value("total_plain_fetched", 0.0);
    c.total_tuples =
        j.value("encrypted_store_size", 0.0) - j.value("fake_rows", 0.0) + j.value("plain_store_size", 0.0);
    c.plain_rows = j.value("plain_store_size", 0.0);
    double alpha = c.total_tuples > 0
                       ? (j.value("encrypted_store_size", 0.0) - j.value("fake_rows", 0.0)) /
                             c.total_tuples
                       : 0.0;
    CostParams p = make_params(alpha, beta, parse_range(gammas).front(), std::max(1.0, c.total_tuples),
                               ns_values, rho);
    json out;
    out["eta_empirical"] = eta_empirical(c, p);
    out["eta_simplified"] = eta(p).simplified;
    out["alpha"] = alpha;
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::vector<CurvePoint> points =
      eta_curve(rho, parse_list(alphas), parse_range(gammas), ns_values, d, beta);
  std::cout << curve_csv(points);
  return 0;
}

int cmd_bench(std::size_t values, double alpha, const std::string& mult, std::size_t count,
              std::uint64_t seed, double beta, double gamma) {
  GenerateSpec gen;
  gen.sensitive_values = static_cast<std::size_t>(alpha * static_cast<double>(values));
  gen.nonsensitive_values = values - gen.sensitive_values;
  gen.shared_values = gen.sensitive_values / 2;
  gen.sensitive_mult = parse_multiplicity(mult);
  gen.nonsensitive_mult = parse_multiplicity(mult);
  gen.seed = seed;
  std::vector<Row> rows = generate_dataset(gen);

  WorkloadSpec spec;
  spec.kind = WorkloadSpec::Kind::uniform;
  spec.count = count;
  spec.seed = seed;
  PipelineOptions opts;
  opts.verify = true;
  PipelineResult result = run_workload(rows, "A", spec, opts, Rng(seed));

  double total_tuples = static_cast<double>(rows.size());
  double real_enc = static_cast<double>(result.report.encrypted_store_size - result.report.fake_rows);
  CostParams p = make_params(real_enc / total_tuples, beta, gamma, total_tuples,
                             static_cast<double>(result.owner.meta.ns_count()));
  EmpiricalCounters c;
  c.queries = static_cast<double>(result.report.queries.size());
  c.encrypted_rows_scanned = static_cast<double>(result.report.total_encrypted_rows_scanned);
  c.rows_transferred = static_cast<double>(result.report.total_encrypted_fetched +
                                           result.report.total_plain_fetched);
  c.total_tuples = total_tuples;
  c.plain_rows = static_cast<double>(result.report.plain_store_size);

  json out = bench_json(result.report);
  out["eta_empirical"] = eta_empirical(c, p);
  out["eta_simplified"] = eta(p).simplified;
  std::cout << out.dump(2) << "\n";
  return result.report.verify_failures == 0 ? 0 : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"query binning over partitioned sensitive/non-sensitive data"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "emit a synthetic NDJSON dataset");
  GenerateSpec gen;
  std::size_t gen_values = 0;
  double gen_alpha = -1;
  std::string gen_s_mult = "uniform:1", gen_ns_mult = "uniform:1", gen_out = "dataset.ndjson";
  std::uint64_t gen_seed = 1;
  generate->add_option("--s-values", gen.sensitive_values, "distinct sensitive values");
  generate->add_option("--ns-values", gen.nonsensitive_values, "distinct non-sensitive values");
  generate->add_option("--shared", gen.shared_values, "values with tuples on both sides");
  generate->add_option("--values", gen_values, "total distinct values (with --alpha)");
  generate->add_option("--alpha", gen_alpha, "sensitive fraction of --values");
  generate->add_option("--s-mult", gen_s_mult, "uniform:k | arith:start,step | zipf:s[,max] | list:a,b,...");
  generate->add_option("--ns-mult", gen_ns_mult, "multiplicities for the non-sensitive side");
  generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--attr", gen.attribute, "searchable attribute name");
  generate->add_flag("--tpch", gen.tpch_names, "TPC-H style column names");
  generate->add_option("--out", gen_out, "output path");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "validate and normalize a dataset");
  std::string ing_in, ing_attr = "A", ing_out = "relation.ndjson";
  ingest_cmd->add_option("--in", ing_in, "NDJSON or CSV input")->required();
  ingest_cmd->add_option("--attr", ing_attr, "searchable attribute");
  ingest_cmd->add_option("--out", ing_out, "normalized output");

  // plan
  auto* plan = app.add_subcommand("plan", "build the owner's secret bin layout");
  std::string plan_in, plan_attr = "A", plan_mode = "auto", plan_out = "layout.ndjson";
  std::uint64_t plan_seed = 1;
  bool plan_seed_given = false;
  plan->add_option("--in", plan_in, "relation NDJSON/CSV")->required();
  plan->add_option("--attr", plan_attr, "searchable attribute");
  plan->add_option("--mode", plan_mode, "auto|base|near-square|general|reversed");
  plan->add_option("--seed", plan_seed, "owner seed")->each([&](const std::string&) { plan_seed_given = true; });
  plan->add_option("--out", plan_out, "layout output path");

  // upload
  auto* upload = app.add_subcommand("upload", "encrypt and load both cloud stores");
  std::string up_in, up_attr = "A", up_layout = "layout.ndjson", up_stores = "stores";
  std::uint64_t up_seed = 1;
  bool up_seed_given = false;
  upload->add_option("--in", up_in, "relation NDJSON/CSV")->required();
  upload->add_option("--attr", up_attr, "searchable attribute");
  upload->add_option("--layout", up_layout, "owner layout file");
  upload->add_option("--seed", up_seed, "owner seed")->each([&](const std::string&) { up_seed_given = true; });
  upload->add_option("--stores", up_stores, "cloud stores directory");

  // query
  auto* query = app.add_subcommand("query", "run one selection query");
  std::string q_value, q_layout = "layout.ndjson", q_stores = "stores";
  bool q_naive = false;
  query->add_option("--value", q_value, "query value")->required();
  query->add_option("--layout", q_layout, "owner layout file");
  query->add_option("--stores", q_stores, "cloud stores directory");
  query->add_flag("--naive", q_naive, "per-value baseline without binning");

  // workload
  auto* workload = app.add_subcommand("workload", "run an end-to-end query workload");
  std::string w_in, w_attr = "A", w_mode = "auto", w_dist = "uniform", w_out = "run";
  std::size_t w_count = 100;
  std::uint64_t w_seed = 1;
  bool w_naive = false, w_verify = false, w_charge_tokens = false;
  bool w_seed_given = false;
  workload->add_option("--in", w_in, "dataset NDJSON/CSV")->required();
  workload->add_option("--attr", w_attr, "searchable attribute");
  workload->add_option("--mode", w_mode, "layout mode");
  workload->add_option("--dist", w_dist, "uniform | zipf:s | file:path");
  workload->add_option("--count", w_count, "number of queries");
  workload->add_option("--seed", w_seed, "root seed")->each([&](const std::string&) { w_seed_given = true; });
  workload->add_flag("--naive", w_naive, "per-value baseline");
  workload->add_flag("--verify", w_verify, "check answers against a brute-force scan");
  workload->add_flag("--charge-per-token", w_charge_tokens, "non-amortized scan accounting");
  workload->add_option("--out-dir", w_out, "output directory");

  // audit
  auto* audit = app.add_subcommand("audit", "analyze an adversary view");
  std::string a_av, a_check = "security", a_policy = "binned", a_graph;
  double a_eps = 0.02;
  std::uint64_t a_seed = 1;
  std::size_t a_trials = 10000;
  audit->add_option("--av", a_av, "view NDJSON")->required();
  audit->add_option("--check", a_check, "security|size|frequency|skew");
  audit->add_option("--policy", a_policy, "binned|naive replay policy");
  audit->add_option("--graph-out", a_graph, "surviving-bins graph CSV");
  audit->add_option("--advantage-eps", a_eps, "advantage threshold");
  audit->add_option("--seed", a_seed, "trial seed");
  audit->add_option("--trials", a_trials, "Monte-Carlo trials");

  // model
  auto* model = app.add_subcommand("model", "analytical cost model curves");
  double m_rho = 0.1, m_ns = 10000, m_d = 1e6, m_beta = 1000;
  std::string m_gammas = "1000:50000:1000", m_alphas = "0.1,0.3,0.5,0.7,0.9", m_calibrate;
  model->add_option("--rho", m_rho, "selectivity");
  model->add_option("--gamma-range", m_gammas, "lo:hi:step or comma list");
  model->add_option("--alphas", m_alphas, "comma list");
  model->add_option("--ns", m_ns, "|NS| distinct values");
  model->add_option("--d", m_d, "total tuples");
  model->add_option("--beta", m_beta, "C_e/C_p");
  model->add_option("--calibrate", m_calibrate, "bench.json with executor counters");

  // bench
  auto* bench = app.add_subcommand("bench", "generate, run and calibrate in one step");
  std::size_t b_values = 1000, b_count = 100;
  double b_alpha = 0.5, b_beta = 1000, b_gamma = 25000;
  std::string b_mult = "uniform:1";
  std::uint64_t b_seed = 1;
  bench->add_option("--values", b_values, "distinct values");
  bench->add_option("--alpha", b_alpha, "sensitive fraction");
  bench->add_option("--mult", b_mult, "tuple multiplicity spec");
  bench->add_option("--count", b_count, "queries");
  bench->add_option("--seed", b_seed, "root seed");
  bench->add_option("--beta", b_beta, "C_e/C_p");
  bench->add_option("--gamma", b_gamma, "C_e/C_com");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      if (gen_alpha >= 0 && gen_values > 0) {
        gen.sensitive_values = static_cast<std::size_t>(
            std::llround(gen_alpha * static_cast<double>(gen_values)));
        gen.nonsensitive_values = gen_values - gen.sensitive_values;
      }
      gen.sensitive_mult = parse_multiplicity(gen_s_mult);
      gen.nonsensitive_mult = parse_multiplicity(gen_ns_mult);
      gen.seed = gen_seed;
      return cmd_generate(gen, gen_out);
    }
    if (*ingest_cmd) return cmd_ingest(ing_in, ing_attr, ing_out);
    if (*plan) return cmd_plan(plan_in, plan_attr, plan_mode, root_seed(plan_seed, plan_seed_given), plan_out);
    if (*upload) return cmd_upload(up_in, up_attr, up_layout, root_seed(up_seed, up_seed_given), up_stores);
    if (*query) return cmd_query(q_value, q_layout, q_stores, q_naive);
    if (*workload) {
      return cmd_workload(w_in, w_attr, w_mode, w_dist, w_count, root_seed(w_seed, w_seed_given),
                          w_naive, w_verify, w_charge_tokens, w_out);
    }
    if (*audit) return cmd_audit(a_av, a_check, a_policy, a_graph, a_eps, a_seed, a_trials);
    if (*model) return cmd_model(m_rho, m_gammas, m_alphas, m_ns, m_d, m_beta, m_calibrate);
    if (*bench) return cmd_bench(b_values, b_alpha, b_mult, b_count, b_seed, b_beta, b_gamma);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
