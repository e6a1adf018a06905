#pragma once

#include <map>
#include <string>
#include <vector>

#include "qbin/binning.hpp"
#include "qbin/core.hpp"

namespace qbin::fixtures {

inline Row make_row(std::string id, std::map<std::string, Value> attrs, bool sensitive) {
  Row row;
  row.row_id = std::move(id);
  row.attributes = std::move(attrs);
  row.sensitive = sensitive;
  return row;
}

// The eight-tuple Employee relation; Dept == Defense rows are sensitive.
inline std::vector<Row> employee_rows() {
  return {
      make_row("t1", {{"EId", "E101"}, {"FirstName", "Adam"}, {"LastName", "Smith"}, {"Office", "1"}, {"Dept", "Defense"}}, true),
      make_row("t2", {{"EId", "E259"}, {"FirstName", "John"}, {"LastName", "Williams"}, {"Office", "2"}, {"Dept", "Design"}}, false),
      make_row("t3", {{"EId", "E199"}, {"FirstName", "Eve"}, {"LastName", "Smith"}, {"Office", "2"}, {"Dept", "Design"}}, false),
      make_row("t4", {{"EId", "E259"}, {"FirstName", "John"}, {"LastName", "Williams"}, {"Office", "6"}, {"Dept", "Defense"}}, true),
      make_row("t5", {{"EId", "E152"}, {"FirstName", "Clark"}, {"LastName", "Cook"}, {"Office", "1"}, {"Dept", "Defense"}}, true),
      make_row("t6", {{"EId", "E254"}, {"FirstName", "David"}, {"LastName", "Watts"}, {"Office", "4"}, {"Dept", "Design"}}, false),
      make_row("t7", {{"EId", "E159"}, {"FirstName", "Lisa"}, {"LastName", "Ross"}, {"Office", "2"}, {"Dept", "Defense"}}, true),
      make_row("t8", {{"EId", "E152"}, {"FirstName", "Clark"}, {"LastName", "Cook"}, {"Office", "3"}, {"Dept", "Design"}}, false),
  };
}

// The sensitive side widened by the id/ssn table: ten encrypted rows total.
inline std::vector<Row> employee_full_sensitive_rows() {
  std::vector<Row> rows;
  const char* ids[] = {"E101", "E259", "E199", "E152", "E254", "E159"};
  const char* ssn[] = {"111", "222", "333", "444", "555", "666"};
  for (int i = 0; i < 6; ++i) {
    rows.push_back(make_row("p" + std::to_string(i + 1), {{"EId", ids[i]}, {"SSN", ssn[i]}}, true));
  }
  for (const Row& row : employee_rows()) rows.push_back(row);
  return rows;
}

// Ten sensitive values s1..s10; s1,s2,s3,s5,s6 also carry a non-sensitive
// tuple (the associated pairs); ns11..ns15 exist only in plaintext.
inline std::vector<Row> example3_rows() {
  std::vector<Row> rows;
  int seq = 0;
  for (int i = 1; i <= 10; ++i) {
    rows.push_back(make_row("s_t" + std::to_string(++seq), {{"A", "s" + std::to_string(i)}}, true));
  }
  for (int i : {1, 2, 3, 5, 6}) {
    rows.push_back(make_row("n_t" + std::to_string(++seq), {{"A", "s" + std::to_string(i)}}, false));
  }
  for (int i = 11; i <= 15; ++i) {
    rows.push_back(make_row("n_t" + std::to_string(++seq), {{"A", "ns" + std::to_string(i)}}, false));
  }
  return rows;
}

// Permutation reproducing the published 5x2 layout.
inline std::vector<Value> example3_pinned_order() {
  return {"s5", "s1", "s2", "s3", "s4", "s10", "s6", "s7", "s8", "s9"};
}

inline BinningOptions example3_pinned_options() {
  BinningOptions opts;
  opts.pinned_permutation = example3_pinned_order();
  return opts;
}

// Nine sensitive values with 10..90 tuples and nine single-tuple
// non-sensitive values.
inline std::vector<Row> example5_rows() {
  std::vector<Row> rows;
  int seq = 0;
  for (int i = 1; i <= 9; ++i) {
    for (int k = 0; k < 10 * i; ++k) {
      rows.push_back(make_row("s_t" + std::to_string(++seq), {{"A", "s" + std::to_string(i)}}, true));
    }
  }
  for (int i = 1; i <= 9; ++i) {
    rows.push_back(make_row("n_t" + std::to_string(++seq), {{"A", "n" + std::to_string(i)}}, false));
  }
  return rows;
}

// Size-attack scenario: the pinned 5x2 layout with s1 at 1000 sensitive
// tuples and its partner at 2000 plaintext tuples, everything else single.
inline std::vector<Row> size_attack_rows() {
  std::vector<Row> rows;
  int seq = 0;
  for (int i = 1; i <= 10; ++i) {
    int copies = i == 1 ? 1000 : 1;
    for (int k = 0; k < copies; ++k) {
      rows.push_back(make_row("s_t" + std::to_string(++seq), {{"A", "s" + std::to_string(i)}}, true));
    }
  }
  for (int i : {1, 2, 3, 5, 6}) {
    int copies = i == 1 ? 2000 : 1;
    for (int k = 0; k < copies; ++k) {
      rows.push_back(make_row("n_t" + std::to_string(++seq), {{"A", "s" + std::to_string(i)}}, false));
    }
  }
  for (int i = 11; i <= 15; ++i) {
    rows.push_back(make_row("n_t" + std::to_string(++seq), {{"A", "ns" + std::to_string(i)}}, false));
  }
  return rows;
}

// A small synthetic universe: |S| sensitive values, |NS| non-sensitive,
// the first `shared` of each side being the same value, one tuple each.
inline std::vector<Row> small_universe(std::size_t s, std::size_t ns, std::size_t shared) {
  std::vector<Row> rows;
  int seq = 0;
  for (std::size_t i = 0; i < s; ++i) {
    Value v = i < shared ? "v" + std::to_string(i + 1) : "s" + std::to_string(i + 1);
    rows.push_back(make_row("st" + std::to_string(++seq), {{"A", v}}, true));
  }
  for (std::size_t i = 0; i < ns; ++i) {
    Value v = i < shared ? "v" + std::to_string(i + 1) : "n" + std::to_string(i + 1);
    rows.push_back(make_row("nt" + std::to_string(++seq), {{"A", v}}, false));
  }
  return rows;
}

}  // namespace qbin::fixtures
