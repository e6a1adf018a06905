#include "qbin/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace qbin {

double SecurityVerdict::prior_of(const std::string& ref, const Value& v) const {
  auto r = std::find(ref_order.begin(), ref_order.end(), ref);
  auto c = std::find(value_order.begin(), value_order.end(), v);
  if (r == ref_order.end() || c == value_order.end()) return 0;
  return prior_pair[r - ref_order.begin()][c - value_order.begin()];
}

double SecurityVerdict::posterior_of(const std::string& ref, const Value& v) const {
  auto r = std::find(ref_order.begin(), ref_order.end(), ref);
  auto c = std::find(value_order.begin(), value_order.end(), v);
  if (r == ref_order.end() || c == value_order.end()) return 0;
  return posterior_pair[r - ref_order.begin()][c - value_order.begin()];
}

AdversaryView make_view(const ObservationLog& log, const EncryptedStore& enc,
                        const PlaintextStore& plain, std::size_t s_value_count) {
  AdversaryView av;
  av.observations = log.entries();
  av.ns_values = plain.distinct_values();
  av.refs.reserve(enc.size());
  for (const Ciphertext& c : enc.rows()) av.refs.push_back(c.tuple_ref);
  av.s_value_count = s_value_count;
  return av;
}

namespace {

// Distinct predicate sets in first-observed order; the cloud groups fetches
// by what it was asked for.
struct ObservedBins {
  std::vector<std::vector<std::string>> cipher_keys;   // sorted token sets
  std::vector<std::vector<std::string>> cipher_refs;   // refs returned for the set
  std::vector<std::vector<Value>> plain_keys;          // sorted value sets
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> pair_fetches;
  std::vector<std::uint64_t> cipher_card;  // returned refs per fetch of the set
  std::vector<std::uint64_t> plain_card;

  std::optional<std::size_t> cipher_index(const std::vector<std::string>& key) const {
    for (std::size_t i = 0; i < cipher_keys.size(); ++i) {
      if (cipher_keys[i] == key) return i;
    }
    return std::nullopt;
  }
  std::optional<std::size_t> plain_index(const std::vector<Value>& key) const {
    for (std::size_t i = 0; i < plain_keys.size(); ++i) {
      if (plain_keys[i] == key) return i;
    }
    return std::nullopt;
  }
};

ObservedBins group_observations(const AdversaryView& av) {
  ObservedBins bins;
  for (const StoreObservation& obs : av.observations) {
    std::optional<std::size_t> ci;
    std::optional<std::size_t> pi;
    if (!obs.cipher_predicates.empty()) {
      ci = bins.cipher_index(obs.cipher_predicates);
      if (!ci) {
        bins.cipher_keys.push_back(obs.cipher_predicates);
        bins.cipher_refs.push_back(obs.returned_refs);
        bins.cipher_card.push_back(obs.returned_refs.size());
        ci = bins.cipher_keys.size() - 1;
      } else if (bins.cipher_refs[*ci] != obs.returned_refs) {
        throw QbinError("store returned different refs for the same token set");
      }
    }
    if (!obs.plain_predicates.empty()) {
      pi = bins.plain_index(obs.plain_predicates);
      if (!pi) {
        bins.plain_keys.push_back(obs.plain_predicates);
        bins.plain_card.push_back(obs.returned_row_ids.size());
        pi = bins.plain_keys.size() - 1;
      }
    }
    if (ci && pi) bins.pair_fetches[{*ci, *pi}]++;
  }
  return bins;
}

}  // namespace

bool AssociationGraph::complete() const {
  for (const auto& row : alive) {
    for (bool a : row) {
      if (!a) return false;
    }
  }
  return true;
}

std::size_t AssociationGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& row : alive) n += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
  return n;
}

std::optional<std::size_t> AssociationGraph::left_of(const std::string& ref) const {
  for (std::size_t i = 0; i < left_members.size(); ++i) {
    if (std::find(left_members[i].begin(), left_members[i].end(), ref) != left_members[i].end()) {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> AssociationGraph::right_of(const Value& v) const {
  for (std::size_t i = 0; i < right_members.size(); ++i) {
    if (std::find(right_members[i].begin(), right_members[i].end(), v) != right_members[i].end()) {
      return i;
    }
  }
  return std::nullopt;
}

AssociationGraph surviving_graph(const AdversaryView& av, Granularity granularity) {
  ObservedBins bins = group_observations(av);
  AssociationGraph g;
  g.granularity = granularity;

  if (granularity == Granularity::bins) {
    g.left_members = bins.cipher_refs;
    g.right_members = bins.plain_keys;
    g.alive.assign(g.left_members.size(), std::vector<bool>(g.right_members.size(), false));
    for (const auto& [pair, count] : bins.pair_fetches) {
      (void)count;
      g.alive[pair.first][pair.second] = true;
    }
    return g;
  }

  // Values granularity: a (ref, value) match is dead only when both bins were
  // observed and never fetched together.
  std::unordered_map<std::string, std::size_t> ref_bin;
  for (std::size_t i = 0; i < bins.cipher_refs.size(); ++i) {
    for (const std::string& r : bins.cipher_refs[i]) ref_bin[r] = i;
  }
  std::unordered_map<Value, std::size_t> value_bin;
  for (std::size_t i = 0; i < bins.plain_keys.size(); ++i) {
    for (const Value& v : bins.plain_keys[i]) value_bin[v] = i;
  }

  g.left_members.reserve(av.refs.size());
  for (const std::string& r : av.refs) g.left_members.push_back({r});
  g.right_members.reserve(av.ns_values.size());
  for (const Value& v : av.ns_values) g.right_members.push_back({v});
  g.alive.assign(av.refs.size(), std::vector<bool>(av.ns_values.size(), true));

  for (std::size_t i = 0; i < av.refs.size(); ++i) {
    auto rb = ref_bin.find(av.refs[i]);
    if (rb == ref_bin.end()) continue;
    for (std::size_t j = 0; j < av.ns_values.size(); ++j) {
      auto vb = value_bin.find(av.ns_values[j]);
      if (vb == value_bin.end()) continue;
      if (!bins.pair_fetches.count({rb->second, vb->second})) g.alive[i][j] = false;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Partitioned-data-security oracle.
//
// A hidden world is a partial 1:1 matching between encrypted refs and the
// non-sensitive values (which value, if any, a ref shares), extended with a
// binding of unmatched refs to query tokens seen outside the plaintext store.
// Prior and posterior are exact world counts; the posterior keeps the worlds
// whose replay under the stated policy could have produced every observation.
// ---------------------------------------------------------------------------

namespace {

struct OracleProblem {
  std::vector<std::string> refs;
  std::vector<Value> ns_values;
  std::vector<std::string> tokens;  // observed predicates outside the store
  bool impossible = false;          // no world survives the constraints
  std::string note;

  // posterior constraints (naive policy); empty means unconstrained
  std::vector<int> forced_value;         // per ref: ns index or -1
  std::vector<char> must_be_unmatched;   // per ref
  std::vector<int> forced_token;         // per ref: token index or -1
  std::vector<char> value_unmatched;     // per ns value: no ref shares it
  std::vector<std::vector<char>> token_allowed;  // token x ref
};

struct WorldCounts {
  unsigned long long total = 0;
  std::vector<std::vector<unsigned long long>> pair;  // ref x ns value
  std::vector<unsigned long long> mask_count;         // sensitivity indicator masks
  std::size_t domain_size = 0;
};

class Enumerator {
 public:
  Enumerator(const OracleProblem& p, bool constrained, bool perfect_matching)
      : p_(p), constrained_(constrained), perfect_(perfect_matching) {
    r_ = p.refs.size();
    n_ = p.ns_values.size();
    t_ = p.tokens.size();
    counts_.pair.assign(r_, std::vector<unsigned long long>(n_, 0));
    counts_.domain_size = n_ + t_;
    counts_.mask_count.assign(std::size_t{1} << counts_.domain_size, 0);
    match_.assign(r_, -1);
    bind_.assign(r_, -1);
    value_used_.assign(n_, 0);
    token_used_.assign(t_, 0);
  }

  WorldCounts run() {
    if (!(constrained_ && p_.impossible)) recurse(0, 0);
    return counts_;
  }

 private:
  void leaf(std::uint32_t mask) {
    counts_.total++;
    for (std::size_t r = 0; r < r_; ++r) {
      if (match_[r] >= 0) counts_.pair[r][match_[r]]++;
    }
    counts_.mask_count[mask]++;
  }

  void recurse(std::size_t r, std::uint32_t mask) {
    if (r == r_) {
      leaf(mask);
      return;
    }
    const bool forced_unmatch = constrained_ && p_.must_be_unmatched[r];
    const int fv = constrained_ ? p_.forced_value[r] : -1;
    const int ft = constrained_ ? p_.forced_token[r] : -1;

    if (!forced_unmatch) {
      for (std::size_t v = 0; v < n_; ++v) {
        if (value_used_[v]) continue;
        if (fv >= 0 && static_cast<int>(v) != fv) continue;
        if (fv < 0 && constrained_ && p_.value_unmatched[v]) continue;
        value_used_[v] = 1;
        match_[r] = static_cast<int>(v);
        recurse(r + 1, mask | (1u << v));
        match_[r] = -1;
        value_used_[v] = 0;
      }
    }
    if (fv >= 0) return;  // a forced match leaves no unmatched option

    if (!perfect_) {
      if (ft >= 0) {
        if (!token_used_[ft]) {
          token_used_[ft] = 1;
          bind_[r] = ft;
          recurse(r + 1, mask | (1u << (n_ + ft)));
          bind_[r] = -1;
          token_used_[ft] = 0;
        }
        return;
      }
      // fresh value outside the known domain
      recurse(r + 1, mask);
      for (std::size_t t = 0; t < t_; ++t) {
        if (token_used_[t]) continue;
        if (constrained_ && !p_.token_allowed[t][r]) continue;
        token_used_[t] = 1;
        bind_[r] = static_cast<int>(t);
        recurse(r + 1, mask | (1u << (n_ + t)));
        bind_[r] = -1;
        token_used_[t] = 0;
      }
    }
  }

  const OracleProblem& p_;
  bool constrained_;
  bool perfect_;
  std::size_t r_ = 0, n_ = 0, t_ = 0;
  std::vector<int> match_;
  std::vector<int> bind_;
  std::vector<char> value_used_;
  std::vector<char> token_used_;
  WorldCounts counts_;
};

bool fraction_equal(unsigned long long a, unsigned long long b, unsigned long long c,
                    unsigned long long d) {
  // a/b == c/d with exact arithmetic; zero denominators only compare equal.
  if (b == 0 || d == 0) return (b == 0) == (d == 0);
  return static_cast<unsigned __int128>(a) * d == static_cast<unsigned __int128>(c) * b;
}

double fraction(unsigned long long num, unsigned long long den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::size_t index_of(const std::vector<std::string>& xs, const std::string& x) {
  return static_cast<std::size_t>(std::find(xs.begin(), xs.end(), x) - xs.begin());
}

void build_naive_constraints(const AdversaryView& av, OracleProblem& p) {
  std::unordered_map<Value, std::size_t> ns_index;
  for (std::size_t i = 0; i < p.ns_values.size(); ++i) ns_index[p.ns_values[i]] = i;

  // Collect tokens (observed predicates outside the plaintext store) first.
  for (const StoreObservation& obs : av.observations) {
    if (obs.plain_predicates.size() != 1) {
      throw QbinError("naive-policy oracle expects single-value plain predicates");
    }
    const Value& w = obs.plain_predicates[0];
    if (!ns_index.count(w) &&
        std::find(p.tokens.begin(), p.tokens.end(), w) == p.tokens.end()) {
      p.tokens.push_back(w);
    }
  }

  std::size_t r_count = p.refs.size();
  p.forced_value.assign(r_count, -1);
  p.must_be_unmatched.assign(r_count, 0);
  p.forced_token.assign(r_count, -1);
  p.value_unmatched.assign(p.ns_values.size(), 0);
  p.token_allowed.assign(p.tokens.size(), std::vector<char>(r_count, 1));

  for (const StoreObservation& obs : av.observations) {
    const Value& w = obs.plain_predicates[0];
    if (obs.returned_refs.size() > 1 || obs.cipher_predicates.size() > 1) {
      throw QbinError("naive-policy oracle expects single-tuple universes");
    }
    bool has_ref = !obs.returned_refs.empty();
    if (!obs.cipher_predicates.empty() && !has_ref) {
      p.impossible = true;  // a sent token always matches its row
    }
    auto it = ns_index.find(w);
    if (it != ns_index.end()) {
      std::size_t v = it->second;
      if (has_ref) {
        std::size_t r = index_of(p.refs, obs.returned_refs[0]);
        if (r >= r_count) throw QbinError("observation returned an unknown ref");
        if (p.must_be_unmatched[r] ||
            (p.forced_value[r] >= 0 && p.forced_value[r] != static_cast<int>(v))) {
          p.impossible = true;
        }
        if (p.value_unmatched[v]) p.impossible = true;
        p.forced_value[r] = static_cast<int>(v);
      } else {
        p.value_unmatched[v] = 1;
        for (std::size_t r = 0; r < r_count; ++r) {
          if (p.forced_value[r] == static_cast<int>(v)) p.impossible = true;
        }
      }
    } else {
      std::size_t t = index_of(p.tokens, w);
      if (has_ref) {
        std::size_t r = index_of(p.refs, obs.returned_refs[0]);
        if (r >= r_count) throw QbinError("observation returned an unknown ref");
        if (p.forced_value[r] >= 0 ||
            (p.forced_token[r] >= 0 && p.forced_token[r] != static_cast<int>(t))) {
          p.impossible = true;
        }
        p.must_be_unmatched[r] = 1;
        p.forced_token[r] = static_cast<int>(t);
        std::fill(p.token_allowed[t].begin(), p.token_allowed[t].end(), char{0});
        p.token_allowed[t][r] = 1;
      } else {
        // the value has no sensitive tuple: nobody may carry it
        std::fill(p.token_allowed[t].begin(), p.token_allowed[t].end(), char{0});
        for (std::size_t r = 0; r < r_count; ++r) {
          if (p.forced_token[r] == static_cast<int>(t)) p.impossible = true;
        }
      }
    }
  }
}

// One candidate bin geometry: how many bins each side may show and with which
// size multisets.
struct BinShape {
  std::size_t sb_count = 0;
  std::vector<std::size_t> cipher_sizes;  // available sensitive-bin sizes
  std::vector<std::size_t> plain_sizes;   // available non-sensitive bin sizes
};

std::optional<BinShape> base_bin_shape(std::size_t s, std::size_t ns) {
  Factorization f = approx_square_factors(ns);
  std::size_t x = static_cast<std::size_t>(f.x);
  if (s < x) return std::nullopt;
  BinShape shape;
  shape.sb_count = x;
  for (std::size_t b = 0; b < x; ++b) shape.cipher_sizes.push_back(s / x + (b < s % x ? 1 : 0));
  shape.plain_sizes.assign(static_cast<std::size_t>(f.y), x);
  return shape;
}

std::optional<BinShape> near_bin_shape(std::size_t s, std::size_t ns) {
  std::size_t m = static_cast<std::size_t>(std::sqrt(static_cast<double>(ns)));
  while (m > 0 && m * m > ns) --m;
  while ((m + 1) * (m + 1) <= ns) ++m;
  if (m < 1 || s < m || s > m * m) return std::nullopt;
  BinShape shape;
  shape.sb_count = m;
  for (std::size_t b = 0; b < m; ++b) shape.cipher_sizes.push_back(s / m + (b < s % m ? 1 : 0));
  std::size_t spill = ns - m * m;
  for (std::size_t b = 0; b < m; ++b) {
    shape.plain_sizes.push_back(m + spill / m + (b < spill % m ? 1 : 0));
  }
  return shape;
}

bool multiset_fits(std::vector<std::size_t> available, const std::vector<std::size_t>& needed) {
  for (std::size_t n : needed) {
    auto it = std::find(available.begin(), available.end(), n);
    if (it == available.end()) return false;
    available.erase(it);
  }
  return true;
}

// Structural feasibility of the view as a set of bin fetches: disjoint bins
// matching a geometry the bin-creation step could have produced. Positions
// and bin indexes are never observable, so any matching survives replay once
// the structure fits; a view that cannot be a bin sequence has no consistent
// world at all.
void build_binned_constraints(const AdversaryView& av, OracleProblem& p) {
  std::size_t s = p.refs.size();
  std::size_t ns = p.ns_values.size();
  if (s > ns) {
    throw QbinError("binned-policy oracle covers |S| <= |NS| universes");
  }

  ObservedBins bins = group_observations(av);

  std::unordered_set<Value> ns_set(p.ns_values.begin(), p.ns_values.end());
  std::unordered_set<Value> seen_values;
  for (const auto& key : bins.plain_keys) {
    for (const Value& v : key) {
      if (!ns_set.count(v)) {
        p.impossible = true;
        p.note = "plain predicates outside the plaintext store";
        return;
      }
      if (!seen_values.insert(v).second) {
        p.impossible = true;
        p.note = "plain bins overlap";
        return;
      }
    }
  }

  std::unordered_set<std::string> seen_refs;
  std::vector<std::size_t> cipher_sizes, plain_sizes;
  for (std::size_t i = 0; i < bins.cipher_keys.size(); ++i) {
    const auto& refs = bins.cipher_refs[i];
    if (bins.cipher_keys[i].size() != refs.size()) {
      p.impossible = true;
      p.note = "token and result cardinalities disagree with a single-tuple universe";
      return;
    }
    for (const std::string& ref : refs) {
      if (!seen_refs.insert(ref).second) {
        p.impossible = true;
        p.note = "cipher bins overlap";
        return;
      }
    }
    cipher_sizes.push_back(refs.size());
  }
  for (const auto& key : bins.plain_keys) plain_sizes.push_back(key.size());

  auto fits = [&](const std::optional<BinShape>& shape) {
    return shape && multiset_fits(shape->cipher_sizes, cipher_sizes) &&
           multiset_fits(shape->plain_sizes, plain_sizes);
  };
  if (!fits(base_bin_shape(s, ns)) && !fits(near_bin_shape(s, ns))) {
    p.impossible = true;
    p.note = "observed predicate sets do not fit any bin geometry for this universe";
  }
}

}  // namespace

SecurityVerdict check_partitioned_security(const AdversaryView& av,
                                           const SecurityOracleOptions& opts) {
  if (av.refs.size() > opts.max_s || av.ns_values.size() > opts.max_ns) {
    throw QbinError(
        "universe too large for exact enumeration; shrink it or raise the oracle limits");
  }
  if (av.s_value_count != av.refs.size()) {
    throw QbinError(
        "oracle supports single-tuple universes only (|S| must equal the encrypted row count); "
        "use the attack simulators for multiplicity analysis");
  }
  if (opts.perfect_matching_prior && av.refs.size() != av.ns_values.size()) {
    throw QbinError("perfect-matching prior needs |S| == |NS|");
  }

  OracleProblem p;
  p.refs = av.refs;
  p.ns_values = av.ns_values;
  if (opts.policy == ReplayPolicy::naive) {
    build_naive_constraints(av, p);
  } else {
    build_binned_constraints(av, p);
  }
  if (p.ns_values.size() + p.tokens.size() > 20) {
    throw QbinError("domain too large for the count-relation enumeration");
  }
  if (opts.perfect_matching_prior && !p.tokens.empty()) {
    throw QbinError("perfect-matching prior cannot host values outside the store");
  }

  std::size_t r_count = p.refs.size();
  if (p.forced_value.empty()) {
    p.forced_value.assign(r_count, -1);
    p.must_be_unmatched.assign(r_count, 0);
    p.forced_token.assign(r_count, -1);
    p.value_unmatched.assign(p.ns_values.size(), 0);
    p.token_allowed.assign(p.tokens.size(), std::vector<char>(r_count, 1));
  }

  // Unconstrained world count, to refuse blowups before they start:
  // matchings(R, N) times the binding combinations over the observed tokens.
  auto partial_matchings = [](std::size_t a, std::size_t b) {
    double total = 0;
    double term = 1;  // C(a,k) C(b,k) k!
    for (std::size_t k = 0; k <= std::min(a, b); ++k) {
      if (k > 0) {
        term *= static_cast<double>(a - k + 1) * static_cast<double>(b - k + 1) /
                static_cast<double>(k);
      }
      total += term;
    }
    return total;
  };
  double estimate = opts.perfect_matching_prior
                        ? std::tgamma(static_cast<double>(r_count) + 1)
                        : partial_matchings(r_count, p.ns_values.size()) *
                              partial_matchings(r_count, p.tokens.size());
  if (estimate > opts.max_worlds) {
    throw QbinError("the enumeration would visit about " + std::to_string(estimate) +
                    " worlds; shrink the universe or the observed query set");
  }

  WorldCounts prior = Enumerator(p, /*constrained=*/false, opts.perfect_matching_prior).run();
  WorldCounts post = Enumerator(p, /*constrained=*/true, opts.perfect_matching_prior).run();

  SecurityVerdict verdict;
  verdict.worlds_prior = prior.total;
  verdict.worlds_posterior = post.total;
  verdict.note = p.note;
  verdict.ref_order = p.refs;
  verdict.value_order = p.ns_values;
  verdict.prior_pair.assign(r_count, std::vector<double>(p.ns_values.size(), 0));
  verdict.posterior_pair = verdict.prior_pair;

  verdict.condition1_holds = post.total > 0;
  for (std::size_t r = 0; r < r_count; ++r) {
    for (std::size_t v = 0; v < p.ns_values.size(); ++v) {
      verdict.prior_pair[r][v] = fraction(prior.pair[r][v], prior.total);
      verdict.posterior_pair[r][v] = fraction(post.pair[r][v], post.total);
      if (!fraction_equal(prior.pair[r][v], prior.total, post.pair[r][v], post.total)) {
        verdict.condition1_holds = false;
        verdict.association_witnesses.push_back(
            {p.refs[r], p.ns_values[v], fraction(prior.pair[r][v], prior.total),
             fraction(post.pair[r][v], post.total)});
      }
    }
  }
  if (post.total == 0 && verdict.association_witnesses.empty()) {
    verdict.note += (verdict.note.empty() ? "" : "; ");
    verdict.note += "no hidden association is consistent with this view";
  }

  // Count-relation condition over the observed domain: the per-value
  // sensitive-tuple indicator distributions, compared pairwise for <, =, >.
  std::size_t d = prior.domain_size;
  auto rel_counts = [&](const WorldCounts& w, std::size_t a, std::size_t b) {
    std::array<unsigned long long, 3> out{0, 0, 0};  // lt, eq, gt
    for (std::size_t mask = 0; mask < w.mask_count.size(); ++mask) {
      if (w.mask_count[mask] == 0) continue;
      int va = (mask >> a) & 1, vb = (mask >> b) & 1;
      out[va < vb ? 0 : (va == vb ? 1 : 2)] += w.mask_count[mask];
    }
    return out;
  };
  verdict.condition2_holds = post.total > 0;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      if (a == b) continue;
      auto before = rel_counts(prior, a, b);
      auto after = rel_counts(post, a, b);
      bool same = true;
      for (int k = 0; k < 3; ++k) {
        if (!fraction_equal(before[k], prior.total, after[k], post.total)) same = false;
      }
      if (!same) {
        verdict.condition2_holds = false;
        auto name = [&](std::size_t i) {
          return i < p.ns_values.size() ? p.ns_values[i] : p.tokens[i - p.ns_values.size()];
        };
        verdict.count_witnesses.push_back({name(a), name(b), fraction(before[1], prior.total),
                                           fraction(after[1], post.total)});
      }
    }
  }

  auto marginal = [&](const WorldCounts& w, std::size_t bit) {
    unsigned long long hit = 0;
    for (std::size_t mask = 0; mask < w.mask_count.size(); ++mask) {
      if ((mask >> bit) & 1) hit += w.mask_count[mask];
    }
    return fraction(hit, w.total);
  };
  for (std::size_t v = 0; v < p.ns_values.size(); ++v) {
    verdict.prior_sensitive[p.ns_values[v]] = marginal(prior, v);
    verdict.posterior_sensitive[p.ns_values[v]] = marginal(post, v);
  }
  for (std::size_t t = 0; t < p.tokens.size(); ++t) {
    verdict.prior_sensitive[p.tokens[t]] = marginal(prior, p.ns_values.size() + t);
    verdict.posterior_sensitive[p.tokens[t]] = marginal(post, p.ns_values.size() + t);
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Attack simulators.
// ---------------------------------------------------------------------------

namespace {

std::string card_summary(const ObservedBins& bins) {
  std::ostringstream os;
  os << "cipher bin cardinalities:";
  for (std::uint64_t c : bins.cipher_card) os << " " << c;
  return os.str();
}

std::vector<std::string> all_observed_refs(const ObservedBins& bins) {
  std::vector<std::string> out;
  for (const auto& refs : bins.cipher_refs) out.insert(out.end(), refs.begin(), refs.end());
  return out;
}

}  // namespace

AttackReport size_attack(const AdversaryView& av) {
  ObservedBins bins = group_observations(av);
  AttackReport report;
  report.name = "size";
  if (bins.cipher_card.empty()) {
    report.detail = "no encrypted fetches observed";
    report.candidate_refs = av.refs;
    return report;
  }
  bool uneven = std::adjacent_find(bins.cipher_card.begin(), bins.cipher_card.end(),
                                   std::not_equal_to<>()) != bins.cipher_card.end();
  report.succeeded = uneven;
  report.detail = card_summary(bins);

  std::uint64_t best_total = 0;
  for (const auto& [pair, count] : bins.pair_fetches) {
    (void)count;
    std::uint64_t total = bins.cipher_card[pair.first] + bins.plain_card[pair.second];
    if (total > best_total) best_total = total;
  }
  if (!bins.pair_fetches.empty()) report.flagged_pair_total = best_total;

  if (uneven) {
    std::size_t heavy = static_cast<std::size_t>(
        std::max_element(bins.cipher_card.begin(), bins.cipher_card.end()) -
        bins.cipher_card.begin());
    report.candidate_refs = bins.cipher_refs[heavy];
  } else {
    report.candidate_refs = av.refs;
  }
  return report;
}

AttackReport frequency_count_attack(const AdversaryView& av) {
  ObservedBins bins = group_observations(av);
  AttackReport report;
  report.name = "frequency";
  if (bins.cipher_card.empty()) {
    report.detail = "no encrypted fetches observed";
    report.candidate_refs = av.refs;
    return report;
  }
  // Every token matches exactly one row, so multiplicity shows up only in the
  // per-bin totals; ranking is possible iff those differ.
  bool uneven = std::adjacent_find(bins.cipher_card.begin(), bins.cipher_card.end(),
                                   std::not_equal_to<>()) != bins.cipher_card.end();
  report.succeeded = uneven;
  report.detail = card_summary(bins);
  if (uneven) {
    std::size_t heavy = static_cast<std::size_t>(
        std::max_element(bins.cipher_card.begin(), bins.cipher_card.end()) -
        bins.cipher_card.begin());
    report.candidate_refs = bins.cipher_refs[heavy];
  } else {
    report.candidate_refs = av.refs.empty() ? all_observed_refs(bins) : av.refs;
  }
  return report;
}

AttackReport workload_skew_attack(const AdversaryView& av,
                                  const std::map<Value, double>& query_frequencies) {
  ObservedBins bins = group_observations(av);
  AttackReport report;
  report.name = "workload-skew";
  double hot_share = 0;
  for (const auto& [value, freq] : query_frequencies) {
    (void)value;
    hot_share = std::max(hot_share, freq);
  }
  if (bins.cipher_keys.empty()) {
    report.detail = "no encrypted fetches observed";
    report.candidate_refs = av.refs;
    return report;
  }
  std::vector<std::uint64_t> fetches(bins.cipher_keys.size(), 0);
  std::uint64_t total = 0;
  for (const auto& [pair, count] : bins.pair_fetches) {
    fetches[pair.first] += count;
    total += count;
  }
  std::size_t hot = static_cast<std::size_t>(
      std::max_element(fetches.begin(), fetches.end()) - fetches.begin());
  double hot_observed = 0;
  if (total > 0) hot_observed = static_cast<double>(fetches[hot]) / static_cast<double>(total);
  double uniform = 1.0 / static_cast<double>(bins.cipher_keys.size());
  report.succeeded =
      bins.cipher_keys.size() >= 2 && hot_observed >= uniform * 1.5 && hot_observed >= hot_share * 0.5;
  std::ostringstream os;
  os << "hot bin fetch share " << hot_observed << " over " << bins.cipher_keys.size() << " bins";
  report.detail = os.str();
  report.candidate_refs = report.succeeded ? bins.cipher_refs[hot] : av.refs;
  return report;
}

AttackScore score_attack(const AttackReport& report, const std::vector<std::string>& all_refs,
                         const std::set<std::string>& target_refs, Rng rng, std::size_t trials) {
  AttackScore score;
  if (all_refs.empty() || target_refs.empty() || trials == 0) return score;
  score.baseline = static_cast<double>(target_refs.size()) / static_cast<double>(all_refs.size());
  const std::vector<std::string>& candidates =
      report.candidate_refs.empty() ? all_refs : report.candidate_refs;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const std::string& guess = candidates[rng.below(candidates.size())];
    if (target_refs.count(guess)) ++hits;
  }
  score.accuracy = static_cast<double>(hits) / static_cast<double>(trials);
  score.advantage = score.accuracy - score.baseline;
  return score;
}

}  // namespace qbin
