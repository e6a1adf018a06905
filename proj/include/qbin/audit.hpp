#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qbin/executor.hpp"

namespace qbin {

// Everything the cloud can see: the per-query observations plus auxiliary
// knowledge (the full plaintext store, store sizes, |S|). No layout seed, no
// decrypted values, no fake/real labels.
struct AdversaryView {
  std::vector<StoreObservation> observations;
  std::vector<Value> ns_values;        // adversary holds the plaintext store
  std::vector<std::string> refs;       // encrypted tuple refs (store contents)
  std::size_t s_value_count = 0;       // |S| from auxiliary information
};

AdversaryView make_view(const ObservationLog& log, const EncryptedStore& enc,
                        const PlaintextStore& plain, std::size_t s_value_count);

enum class Granularity { bins, values };

// Bins granularity: left = observed cipher predicate sets, right = observed
// plain predicate sets, edge iff fetched together at least once. Values
// granularity: a (ref, ns value) match survives unless both containing bins
// were observed and never together.
struct AssociationGraph {
  Granularity granularity = Granularity::bins;
  std::vector<std::vector<std::string>> left_members;   // refs per left node
  std::vector<std::vector<Value>> right_members;        // values per right node
  std::vector<std::vector<bool>> alive;                 // left x right

  bool complete() const;
  std::size_t edge_count() const;
  // Node lookup by a member element; nullopt when never observed.
  std::optional<std::size_t> left_of(const std::string& ref) const;
  std::optional<std::size_t> right_of(const Value& v) const;
};

AssociationGraph surviving_graph(const AdversaryView& av, Granularity granularity);

enum class ReplayPolicy { binned, naive };

struct PairShift {
  std::string ref;
  Value value;
  double before = 0;
  double after = 0;
};

struct CountShift {
  Value left;
  Value right;
  double before_eq = 0;  // prior Pr[#s(left) == #s(right)]
  double after_eq = 0;
};

struct SecurityVerdict {
  bool condition1_holds = false;  // association probabilities unchanged
  bool condition2_holds = false;  // count-relation probabilities unchanged
  std::vector<PairShift> association_witnesses;
  std::vector<CountShift> count_witnesses;
  // Per non-sensitive value: Pr[value also has a sensitive tuple].
  std::map<Value, double> prior_sensitive;
  std::map<Value, double> posterior_sensitive;
  // Full association matrices over (ref_order x value_order).
  std::vector<std::string> ref_order;
  std::vector<Value> value_order;
  std::vector<std::vector<double>> prior_pair;
  std::vector<std::vector<double>> posterior_pair;
  std::uint64_t worlds_prior = 0;
  std::uint64_t worlds_posterior = 0;
  std::string note;

  bool holds() const { return condition1_holds && condition2_holds; }
  double prior_of(const std::string& ref, const Value& v) const;
  double posterior_of(const std::string& ref, const Value& v) const;
};

struct SecurityOracleOptions {
  ReplayPolicy policy = ReplayPolicy::binned;
  // Prior over hidden associations: every partial 1:1 matching between refs
  // and non-sensitive values (open), or only perfect matchings when auxiliary
  // knowledge says every value has one tuple on each side.
  bool perfect_matching_prior = false;
  std::size_t max_s = 10;
  std::size_t max_ns = 10;
  double max_worlds = 4e8;  // enumeration budget before refusing
};

// Exhaustive check of the two partitioned-data-security conditions. Worlds
// are hidden association assignments; a world is consistent with the view iff
// replaying every observation under the stated policy and the bin structure
// visible in the view could produce exactly those fetches. Exact integer
// counting; order of observations never changes the verdict. Supports
// single-tuple-per-value universes (refuses otherwise).
SecurityVerdict check_partitioned_security(const AdversaryView& av,
                                           const SecurityOracleOptions& opts = {});

struct AttackReport {
  std::string name;
  bool succeeded = false;
  double advantage = 0.0;
  // Candidate refs the adversary would pick from; flagged bins for reports.
  std::vector<std::string> candidate_refs;
  std::optional<std::uint64_t> flagged_pair_total;
  std::string detail;
};

// Flags a sensitive bin when observed encrypted-result cardinalities differ
// across bins; reports the heaviest (cipher set, plain set) pair total.
AttackReport size_attack(const AdversaryView& av);

// Attempts to locate the refs of the most frequent sensitive value from
// result multiplicities.
AttackReport frequency_count_attack(const AdversaryView& av);

// Attempts the same from fetch frequencies under a skewed workload.
AttackReport workload_skew_attack(const AdversaryView& av,
                                  const std::map<Value, double>& query_frequencies);

struct AttackScore {
  double accuracy = 0;   // Pr[guess hits a target ref] from the candidate set
  double baseline = 0;   // blind guess over all refs
  double advantage = 0;  // accuracy - baseline
};

// Monte-Carlo scoring of a report's candidate set against the true refs of
// the targeted value.
AttackScore score_attack(const AttackReport& report, const std::vector<std::string>& all_refs,
                         const std::set<std::string>& target_refs, Rng rng, std::size_t trials);

}  // namespace qbin
