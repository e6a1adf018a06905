#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "qbin/core.hpp"
#include "qbin/workload.hpp"

using namespace qbin;

namespace {

std::vector<std::string> ids(const std::vector<Row>& rows) {
  std::vector<std::string> out;
  for (const Row& r : rows) out.push_back(r.row_id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Value> values_of(const std::vector<ValueCount>& vcs) {
  std::vector<Value> out;
  for (const auto& vc : vcs) out.push_back(vc.value);
  return out;
}

}  // namespace

TEST_CASE("ingest splits the Employee relation by the sensitive flag") {
  PartitionedRelation rel = ingest(fixtures::employee_rows(), "EId", "employee");
  CHECK(ids(rel.sensitive_rows) == std::vector<std::string>{"t1", "t4", "t5", "t7"});
  CHECK(ids(rel.nonsensitive_rows) == std::vector<std::string>{"t2", "t3", "t6", "t8"});
}

TEST_CASE("ingest keeps a fully non-sensitive relation on the plaintext side") {
  auto rows = fixtures::employee_rows();
  for (Row& r : rows) r.sensitive = false;
  PartitionedRelation rel = ingest(rows, "EId");
  CHECK(rel.sensitive_rows.empty());
  CHECK(rel.nonsensitive_rows.size() == 8);
}

TEST_CASE("ingest of ten plus ten single-tuple values gives |S| = |NS| = 10") {
  PartitionedRelation rel = ingest(fixtures::small_universe(10, 10, 5), "A");
  OwnerMetadata meta = build_metadata(rel);
  CHECK(meta.s_count() == 10);
  CHECK(meta.ns_count() == 10);
}

TEST_CASE("ingest errors name the offending row") {
  auto rows = fixtures::employee_rows();
  rows[3].attributes.erase("EId");
  CHECK_THROWS_WITH_AS(ingest(rows, "EId"), doctest::Contains("t4"), QbinError);

  rows = fixtures::employee_rows();
  rows[5].row_id = "t1";
  CHECK_THROWS_AS(ingest(rows, "EId"), QbinError);

  CHECK_THROWS_AS(ingest({}, "EId"), QbinError);
}

TEST_CASE("metadata matches the published Employee split") {
  PartitionedRelation rel = ingest(fixtures::employee_rows(), "EId");
  OwnerMetadata meta = build_metadata(rel);
  CHECK(values_of(meta.sensitive_values) == std::vector<Value>{"E101", "E259", "E152", "E159"});
  CHECK(values_of(meta.nonsensitive_values) == std::vector<Value>{"E259", "E199", "E254", "E152"});
  CHECK(meta.associated_values == std::vector<Value>{"E259", "E152"});
  CHECK(meta.sensitive_count_of("E101") == 1);
  CHECK(meta.nonsensitive_count_of("E101") == 0);
  CHECK(meta.uniform_single_tuple());
}

TEST_CASE("one row per side with the same value associates it") {
  std::vector<Row> rows = {fixtures::make_row("a", {{"A", "v"}}, true),
                           fixtures::make_row("b", {{"A", "v"}}, false)};
  OwnerMetadata meta = build_metadata(ingest(rows, "A"));
  CHECK(meta.associated_values == std::vector<Value>{"v"});
  CHECK(meta.sensitive_count_of("v") == 1);
  CHECK(meta.nonsensitive_count_of("v") == 1);
}

TEST_CASE("the 10..90 multiplicity fixture sums to 450 sensitive tuples") {
  OwnerMetadata meta = build_metadata(ingest(fixtures::example5_rows(), "A"));
  CHECK(meta.s_count() == 9);
  CHECK(meta.sensitive_tuple_total() == 450);
  CHECK(meta.sensitive_count_of("s9") == 90);
}

TEST_CASE("re-ingesting the concatenated partition is idempotent") {
  PartitionedRelation rel = ingest(fixtures::employee_rows(), "EId");
  std::vector<Row> all = rel.sensitive_rows;
  all.insert(all.end(), rel.nonsensitive_rows.begin(), rel.nonsensitive_rows.end());
  PartitionedRelation again = ingest(all, "EId");
  CHECK(ids(again.sensitive_rows) == ids(rel.sensitive_rows));
  CHECK(ids(again.nonsensitive_rows) == ids(rel.nonsensitive_rows));
}

TEST_CASE("metadata counts agree with a linear recount on random datasets") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Rng rng(seed);
    GenerateSpec spec;
    spec.sensitive_values = 1 + rng.below(12);
    spec.nonsensitive_values = 1 + rng.below(12);
    spec.shared_values = rng.below(std::min(spec.sensitive_values, spec.nonsensitive_values) + 1);
    spec.sensitive_mult = parse_multiplicity("zipf:1.0,7");
    spec.nonsensitive_mult = parse_multiplicity("uniform:2");
    spec.seed = seed;
    std::vector<Row> rows = generate_dataset(spec);
    PartitionedRelation rel = ingest(rows, "A");
    OwnerMetadata meta = build_metadata(rel);

    std::map<Value, std::uint64_t> recount_s, recount_ns;
    for (const Row& r : rows) {
      (r.sensitive ? recount_s : recount_ns)[r.attr("A")]++;
    }
    CHECK(meta.s_count() == recount_s.size());
    CHECK(meta.ns_count() == recount_ns.size());
    for (const auto& [v, c] : recount_s) CHECK(meta.sensitive_count_of(v) == c);
    for (const auto& [v, c] : recount_ns) CHECK(meta.nonsensitive_count_of(v) == c);
    for (const auto& [v, c] : recount_s) {
      std::uint64_t total = c + (recount_ns.count(v) ? recount_ns[v] : 0);
      CHECK(meta.sensitive_count_of(v) + meta.nonsensitive_count_of(v) == total);
    }
  }
}

TEST_CASE("rng streams are reproducible and label-independent") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  Rng c(42);
  Rng d1 = c.derive("permutation");
  Rng d2 = c.derive("nonce");
  CHECK(d1.seed() != d2.seed());
  CHECK(c.derive("permutation").seed() == d1.seed());

  std::vector<int> xs{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<int> ys = xs;
  Rng s1(7), s2(7);
  s1.shuffle(xs);
  s2.shuffle(ys);
  CHECK(xs == ys);
}
