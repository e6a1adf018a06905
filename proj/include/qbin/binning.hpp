#pragma once

#include <optional>

#include "qbin/core.hpp"

namespace qbin {

// Exact factor pair x * y == n with x >= y and |x - y| minimal.
struct Factorization {
  std::uint64_t x = 1;
  std::uint64_t y = 1;
  std::uint64_t n = 1;
};

Factorization approx_square_factors(std::uint64_t n);

enum class BinMode { base, near_square, general, reversed };

const char* to_string(BinMode mode);
BinMode bin_mode_from_string(const std::string& s);

// The owner's secret bin layout. Sensitive bins are dense (value index ==
// position); non-sensitive bins keep explicit slots because positions carry
// the retrieval rules and reversed layouts can leave slots unoccupied.
struct BinLayout {
  BinMode mode = BinMode::base;
  std::uint64_t permutation_seed = 0;
  std::vector<std::vector<Value>> sensitive_bins;
  std::vector<std::vector<std::optional<Value>>> nonsensitive_bins;
  std::vector<std::uint64_t> fake_counts;  // per sensitive bin

  struct Slot {
    std::size_t bin = 0;
    std::size_t pos = 0;
    bool operator==(const Slot&) const = default;
  };

  std::optional<Slot> find_sensitive(const Value& v) const;
  std::optional<Slot> find_nonsensitive(const Value& v) const;

  std::vector<Value> nonsensitive_bin_values(std::size_t bin) const;

  std::size_t sensitive_bin_count() const { return sensitive_bins.size(); }
  std::size_t nonsensitive_bin_count() const { return nonsensitive_bins.size(); }

  // Fake tuples of a bin are spread round-robin over its values in position
  // order; the owner regenerates the same split when deriving search tokens.
  std::uint64_t fake_share(std::size_t bin, const Value& v) const;
  std::uint64_t real_bin_total(std::size_t bin, const OwnerMetadata& meta) const;
  std::uint64_t padded_bin_total(std::size_t bin, const OwnerMetadata& meta) const;
  std::uint64_t total_fakes() const;
};

struct BinningOptions {
  // Fixture hook: replaces the seeded secret shuffle with an explicit order.
  // Owner-side only; never part of any uploaded artifact.
  std::optional<std::vector<Value>> pinned_permutation;
};

BinLayout create_bins_base(const OwnerMetadata& meta, const Rng& rng,
                           const BinningOptions& opts = {});
BinLayout create_bins_near_square(const OwnerMetadata& meta, const Rng& rng,
                                  const BinningOptions& opts = {});
BinLayout create_bins_general(const OwnerMetadata& meta, const Rng& rng,
                              const BinningOptions& opts = {});
BinLayout create_bins_reversed(const OwnerMetadata& meta, const Rng& rng,
                               const BinningOptions& opts = {});

// general when multiplicities are non-uniform, reversed when |S| > |NS|,
// otherwise the cheaper of the exact-factor and near-square layouts.
BinLayout create_bins_auto(const OwnerMetadata& meta, const Rng& rng,
                           const BinningOptions& opts = {});

// Structural checks shared by tests and the CLI: completeness, disjointness,
// shape bounds and the positional association rule. Throws on violation.
void validate_layout(const BinLayout& layout, const OwnerMetadata& meta);

}  // namespace qbin
