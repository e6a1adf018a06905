#include "qbin/binning.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace qbin {

Factorization approx_square_factors(std::uint64_t n) {
  if (n == 0) throw QbinError("approx_square_factors: n must be positive");
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while ((root + 1) * (root + 1) <= n) ++root;
  while (root * root > n) --root;
  for (std::uint64_t y = root; y >= 1; --y) {
    if (n % y == 0) return {n / y, y, n};
  }
  return {n, 1, n};  // unreachable, y == 1 always divides
}

const char* to_string(BinMode mode) {
  switch (mode) {
    case BinMode::base: return "base";
    case BinMode::near_square: return "near_square";
    case BinMode::general: return "general";
    case BinMode::reversed: return "reversed";
  }
  return "base";
}

BinMode bin_mode_from_string(const std::string& s) {
  if (s == "base") return BinMode::base;
  if (s == "near_square") return BinMode::near_square;
  if (s == "general") return BinMode::general;
  if (s == "reversed") return BinMode::reversed;
  throw QbinError("unknown bin mode '" + s + "'");
}

std::optional<BinLayout::Slot> BinLayout::find_sensitive(const Value& v) const {
  for (std::size_t b = 0; b < sensitive_bins.size(); ++b) {
    for (std::size_t p = 0; p < sensitive_bins[b].size(); ++p) {
      if (sensitive_bins[b][p] == v) return Slot{b, p};
    }
  }
  return std::nullopt;
}

std::optional<BinLayout::Slot> BinLayout::find_nonsensitive(const Value& v) const {
  for (std::size_t b = 0; b < nonsensitive_bins.size(); ++b) {
    for (std::size_t p = 0; p < nonsensitive_bins[b].size(); ++p) {
      if (nonsensitive_bins[b][p] && *nonsensitive_bins[b][p] == v) return Slot{b, p};
    }
  }
  return std::nullopt;
}

std::vector<Value> BinLayout::nonsensitive_bin_values(std::size_t bin) const {
  std::vector<Value> out;
  for (const auto& slot : nonsensitive_bins.at(bin)) {
    if (slot) out.push_back(*slot);
  }
  return out;
}

std::uint64_t BinLayout::fake_share(std::size_t bin, const Value& v) const {
  if (bin >= fake_counts.size()) return 0;
  const auto& values = sensitive_bins[bin];
  auto it = std::find(values.begin(), values.end(), v);
  if (it == values.end()) return 0;
  std::uint64_t idx = static_cast<std::uint64_t>(it - values.begin());
  std::uint64_t fc = fake_counts[bin];
  std::uint64_t n = values.size();
  return fc / n + (idx < fc % n ? 1 : 0);
}

std::uint64_t BinLayout::real_bin_total(std::size_t bin, const OwnerMetadata& meta) const {
  std::uint64_t total = 0;
  for (const Value& v : sensitive_bins.at(bin)) total += meta.sensitive_count_of(v);
  return total;
}

std::uint64_t BinLayout::padded_bin_total(std::size_t bin, const OwnerMetadata& meta) const {
  return real_bin_total(bin, meta) + (bin < fake_counts.size() ? fake_counts[bin] : 0);
}

std::uint64_t BinLayout::total_fakes() const {
  std::uint64_t total = 0;
  for (std::uint64_t f : fake_counts) total += f;
  return total;
}

namespace {

// How the matrix is cut: the sensitive side always gets `sb_count` bins of at
// most `sb_cap` values filled row-major; the non-sensitive side gets
// `nsb_count` bins whose slot counts are listed explicitly.
struct Shape {
  std::size_t sb_count = 1;
  std::size_t sb_cap = 1;
  std::size_t nsb_count = 1;
  std::vector<std::size_t> nsb_slots;
  BinMode mode = BinMode::base;
};

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

Shape base_shape(std::size_t factored) {
  Factorization f = approx_square_factors(factored);
  Shape shape;
  shape.sb_count = static_cast<std::size_t>(f.x);
  shape.sb_cap = static_cast<std::size_t>(f.y);
  shape.nsb_count = static_cast<std::size_t>(f.y);
  shape.nsb_slots.assign(shape.nsb_count, static_cast<std::size_t>(f.x));
  shape.mode = BinMode::base;
  return shape;
}

// Side length of the largest square not exceeding n. Choosing the square from
// below keeps every non-sensitive bin filled to at least m values, which the
// retrieval sweep needs to touch every bin pair.
std::size_t floor_sqrt(std::size_t n) {
  std::size_t m = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while ((m + 1) * (m + 1) <= n) ++m;
  while (m > 0 && m * m > n) --m;
  return m;
}

std::optional<Shape> near_square_shape(std::size_t factored, std::size_t mod_side_count,
                                       bool reversed) {
  std::size_t m = floor_sqrt(factored);
  if (m < 1) return std::nullopt;
  Shape shape;
  shape.sb_count = m;
  shape.mode = BinMode::near_square;
  std::size_t spill = factored - m * m;
  if (reversed) {
    // The factored count is |S|; spill lands on the sensitive side and the
    // non-sensitive slots must reach the wrapped rows.
    shape.sb_cap = ceil_div(mod_side_count, m);
    shape.nsb_count = m;
    shape.nsb_slots.assign(m, shape.sb_cap);
  } else {
    if (mod_side_count > m * m) return std::nullopt;  // rows would outrun the bins
    shape.sb_cap = ceil_div(mod_side_count, m);
    shape.nsb_count = m;
    shape.nsb_slots.assign(m, m + spill / m);
    for (std::size_t j = 0; j < spill % m; ++j) shape.nsb_slots[j]++;
  }
  return shape;
}

std::size_t shape_cost(const Shape& shape, std::size_t factored) {
  // Retrieved-value proxy: one bin of each side per query.
  if (shape.mode == BinMode::near_square) {
    return shape.sb_count + ceil_div(factored, shape.sb_count);
  }
  return shape.sb_count + shape.sb_cap;  // x + y
}

std::vector<Value> permuted_sensitive(const OwnerMetadata& meta, const Rng& perm_rng,
                                      const BinningOptions& opts) {
  std::vector<Value> order;
  order.reserve(meta.s_count());
  for (const ValueCount& vc : meta.sensitive_values) order.push_back(vc.value);
  if (opts.pinned_permutation) {
    const auto& pinned = *opts.pinned_permutation;
    if (std::multiset<Value>(pinned.begin(), pinned.end()) !=
        std::multiset<Value>(order.begin(), order.end())) {
      throw QbinError("pinned permutation does not cover the sensitive values");
    }
    return pinned;
  }
  Rng rng = perm_rng;
  rng.shuffle(order);
  return order;
}

void check_sides(const OwnerMetadata& meta, bool reversed) {
  std::size_t s = meta.s_count();
  std::size_t ns = meta.ns_count();
  if (s == 0 || ns == 0) throw QbinError("binning needs values on both sides");
  if (!reversed && s > ns) {
    throw QbinError("|S| > |NS|: use create_bins_reversed");
  }
  if (reversed && s <= ns) {
    throw QbinError("|S| <= |NS|: use the standard path, not create_bins_reversed");
  }
}

bool shape_fits(const OwnerMetadata& meta, const Shape& shape) {
  std::size_t s = meta.s_count();
  return s >= shape.sb_count && ceil_div(s, shape.sb_count) <= shape.sb_cap;
}

void check_preconditions(const OwnerMetadata& meta, const Shape& shape, bool reversed) {
  check_sides(meta, reversed);
  std::size_t s = meta.s_count();
  if (s < shape.sb_count) {
    throw QbinError("|S| = " + std::to_string(s) + " is below the required x = " +
                    std::to_string(shape.sb_count) + " sensitive bins");
  }
  if (ceil_div(s, shape.sb_count) > shape.sb_cap) {
    throw QbinError("sensitive values exceed bin capacity for this shape");
  }
  // Associations must be 1:1 at value level: guaranteed by distinct-value
  // metadata, nothing to check beyond both sides being distinct lists.
}

// Places the non-sensitive values: partners of SB[i][j] go to bin j (mod bin
// count) at a slot index congruent to i, everything else fills the remaining
// slots in metadata order.
std::vector<std::vector<std::optional<Value>>> place_nonsensitive(
    const OwnerMetadata& meta, const Shape& shape,
    const std::vector<std::vector<Value>>& sbins) {
  std::vector<std::vector<std::optional<Value>>> nsbins(shape.nsb_count);
  for (std::size_t j = 0; j < shape.nsb_count; ++j) {
    nsbins[j].assign(shape.nsb_slots[j], std::nullopt);
  }
  std::unordered_set<Value> placed;
  for (std::size_t i = 0; i < sbins.size(); ++i) {
    for (std::size_t j = 0; j < sbins[i].size(); ++j) {
      const Value& v = sbins[i][j];
      if (!meta.is_associated(v)) continue;
      std::size_t target = j % shape.nsb_count;
      auto& bin = nsbins[target];
      bool done = false;
      for (std::size_t p = i; p < bin.size(); p += shape.sb_count) {
        if (!bin[p]) {
          bin[p] = v;
          done = true;
          break;
        }
      }
      if (!done) {
        throw QbinError("no slot congruent to " + std::to_string(i) +
                        " free in non-sensitive bin " + std::to_string(target));
      }
      placed.insert(v);
    }
  }
  std::size_t bin_at = 0, slot_at = 0;
  for (const ValueCount& vc : meta.nonsensitive_values) {
    if (placed.count(vc.value)) continue;
    while (bin_at < nsbins.size() && slot_at >= nsbins[bin_at].size()) {
      ++bin_at;
      slot_at = 0;
    }
    while (bin_at < nsbins.size() && nsbins[bin_at][slot_at]) {
      ++slot_at;
      while (bin_at < nsbins.size() && slot_at >= nsbins[bin_at].size()) {
        ++bin_at;
        slot_at = 0;
      }
    }
    if (bin_at >= nsbins.size()) throw QbinError("ran out of non-sensitive slots");
    nsbins[bin_at][slot_at] = vc.value;
  }
  return nsbins;
}

BinLayout assemble(const OwnerMetadata& meta, const Shape& shape,
                   const std::vector<Value>& order, std::uint64_t perm_seed, BinMode mode) {
  BinLayout layout;
  layout.mode = mode;
  layout.permutation_seed = perm_seed;
  layout.sensitive_bins.assign(shape.sb_count, {});
  for (std::size_t i = 0; i < order.size(); ++i) {
    layout.sensitive_bins[i % shape.sb_count].push_back(order[i]);
  }
  layout.nonsensitive_bins = place_nonsensitive(meta, shape, layout.sensitive_bins);
  layout.fake_counts.assign(shape.sb_count, 0);
  return layout;
}

BinLayout build_with_shape(const OwnerMetadata& meta, const Shape& shape, const Rng& rng,
                           const BinningOptions& opts, bool reversed, BinMode mode) {
  check_preconditions(meta, shape, reversed);
  Rng perm = rng.derive("permutation");
  std::vector<Value> order = permuted_sensitive(meta, perm, opts);
  return assemble(meta, shape, order, perm.seed(), mode);
}

// Ties go to the exact factorization; a shape the sensitive side cannot fill
// is only chosen when no alternative fits (its precondition error then names
// the problem).
Shape pick_cheaper_shape(const OwnerMetadata& meta, std::size_t factored, std::size_t mod_count,
                         bool reversed) {
  Shape base = base_shape(factored);
  std::optional<Shape> near = near_square_shape(factored, mod_count, reversed);
  if (!near) return base;
  bool base_ok = shape_fits(meta, base);
  bool near_ok = shape_fits(meta, *near);
  if (base_ok && near_ok) {
    return shape_cost(*near, factored) < shape_cost(base, factored) ? *near : base;
  }
  if (near_ok) return *near;
  return base;
}

}  // namespace

BinLayout create_bins_base(const OwnerMetadata& meta, const Rng& rng, const BinningOptions& opts) {
  Shape shape = base_shape(meta.ns_count());
  return build_with_shape(meta, shape, rng, opts, /*reversed=*/false, BinMode::base);
}

BinLayout create_bins_near_square(const OwnerMetadata& meta, const Rng& rng,
                                  const BinningOptions& opts) {
  Shape shape = pick_cheaper_shape(meta, meta.ns_count(), meta.s_count(), /*reversed=*/false);
  return build_with_shape(meta, shape, rng, opts, /*reversed=*/false, shape.mode);
}

BinLayout create_bins_general(const OwnerMetadata& meta, const Rng& rng,
                              const BinningOptions& opts) {
  Shape shape = pick_cheaper_shape(meta, meta.ns_count(), meta.s_count(), /*reversed=*/false);
  check_preconditions(meta, shape, /*reversed=*/false);

  Rng perm = rng.derive("permutation");
  std::vector<Value> order = permuted_sensitive(meta, perm, opts);
  // Heaviest values first; equal counts keep the permuted order.
  std::stable_sort(order.begin(), order.end(), [&](const Value& a, const Value& b) {
    return meta.sensitive_count_of(a) > meta.sensitive_count_of(b);
  });

  BinLayout layout;
  layout.mode = BinMode::general;
  layout.permutation_seed = perm.seed();
  layout.sensitive_bins.assign(shape.sb_count, {});
  std::vector<std::uint64_t> totals(shape.sb_count, 0);

  std::size_t next = 0;
  for (; next < shape.sb_count && next < order.size(); ++next) {
    layout.sensitive_bins[next].push_back(order[next]);
    totals[next] += meta.sensitive_count_of(order[next]);
  }
  for (; next < order.size(); ++next) {
    std::size_t best = shape.sb_count;  // lowest total among bins with room, lowest index wins
    for (std::size_t b = 0; b < shape.sb_count; ++b) {
      if (layout.sensitive_bins[b].size() >= shape.sb_cap) continue;
      if (best == shape.sb_count || totals[b] < totals[best]) best = b;
    }
    if (best == shape.sb_count) throw QbinError("general binning ran out of bin capacity");
    layout.sensitive_bins[best].push_back(order[next]);
    totals[best] += meta.sensitive_count_of(order[next]);
  }

  std::uint64_t max_total = *std::max_element(totals.begin(), totals.end());
  layout.fake_counts.assign(shape.sb_count, 0);
  for (std::size_t b = 0; b < shape.sb_count; ++b) {
    layout.fake_counts[b] = max_total - totals[b];
  }
  layout.nonsensitive_bins = place_nonsensitive(meta, shape, layout.sensitive_bins);
  return layout;
}

BinLayout create_bins_reversed(const OwnerMetadata& meta, const Rng& rng,
                               const BinningOptions& opts) {
  Shape shape = pick_cheaper_shape(meta, meta.s_count(), meta.s_count(), /*reversed=*/true);
  return build_with_shape(meta, shape, rng, opts, /*reversed=*/true, BinMode::reversed);
}

BinLayout create_bins_auto(const OwnerMetadata& meta, const Rng& rng, const BinningOptions& opts) {
  if (meta.s_count() > meta.ns_count()) return create_bins_reversed(meta, rng, opts);
  if (!meta.uniform_single_tuple()) return create_bins_general(meta, rng, opts);
  return create_bins_near_square(meta, rng, opts);
}

void validate_layout(const BinLayout& layout, const OwnerMetadata& meta) {
  std::unordered_set<Value> seen;
  std::size_t placed = 0;
  for (const auto& bin : layout.sensitive_bins) {
    for (const Value& v : bin) {
      if (!meta.has_sensitive(v)) throw QbinError("sensitive bin holds unknown value " + v);
      if (!seen.insert(v).second) throw QbinError("sensitive value " + v + " appears twice");
      ++placed;
    }
  }
  if (placed != meta.s_count()) throw QbinError("sensitive bins do not cover all values");

  seen.clear();
  placed = 0;
  for (const auto& bin : layout.nonsensitive_bins) {
    for (const auto& slot : bin) {
      if (!slot) continue;
      if (!meta.has_nonsensitive(*slot)) {
        throw QbinError("non-sensitive bin holds unknown value " + *slot);
      }
      if (!seen.insert(*slot).second) {
        throw QbinError("non-sensitive value " + *slot + " appears twice");
      }
      ++placed;
    }
  }
  if (placed != meta.ns_count()) throw QbinError("non-sensitive bins do not cover all values");

  if (layout.fake_counts.size() != layout.sensitive_bins.size()) {
    throw QbinError("fake_counts does not match the sensitive bin count");
  }

  std::size_t sb_count = layout.sensitive_bin_count();
  std::size_t nsb_count = layout.nonsensitive_bin_count();
  for (const Value& v : meta.associated_values) {
    auto s = layout.find_sensitive(v);
    auto n = layout.find_nonsensitive(v);
    if (!s || !n) throw QbinError("associated value " + v + " missing from a side");
    if (n->bin != s->pos % nsb_count || n->pos % sb_count != s->bin) {
      throw QbinError("positional association violated for value " + v);
    }
  }

  if (layout.mode == BinMode::general) {
    std::optional<std::uint64_t> expected;
    for (std::size_t b = 0; b < sb_count; ++b) {
      std::uint64_t total = layout.padded_bin_total(b, meta);
      if (!expected) expected = total;
      if (total != *expected) throw QbinError("padded bin totals are not equal");
    }
  }
}

}  // namespace qbin
