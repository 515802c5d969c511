#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "privmine/catalog.hpp"
#include "privmine/errors.hpp"
#include "privmine/miner.hpp"
#include "privmine/randomizer.hpp"
#include "privmine/rational.hpp"

namespace privmine {

/// Parameters needed to undo the distortion. Must equal the values used at
/// randomization time (read from the key file, never re-estimated).
/// Support reconstruction is defined for the uniform fake-length model only.
struct ReconstructionParams {
  Rational w;
  std::uint32_t l = 0;
  std::uint32_t n = 0;
  std::uint64_t key_i = 0;
};

struct ReconstructedSupport {
  Rational raw;      // the debiasing formula's output, may leave [0,1]
  Rational clamped;  // min(1, max(0, raw))
  bool was_clamped = false;
};

inline void validate_params(const ReconstructionParams& params) {
  if (params.w <= 0) throw ValidationError("w must be positive");
  if (params.l < 1) throw ValidationError("l must be at least 1");
  if (params.n < 1) throw ValidationError("n must be at least 1");
  if (2ull * params.l - 1 > params.n)
    throw ValidationError("reconstruction needs 2l-1 <= n (uniform fake-length model)");
}

/// Expected fraction of fake transactions containing a fixed k-itemset:
/// the fake length Y is uniform on {1..2l-1} and the Y items are a uniform
/// Y-subset of 1..n, so the probability is the average over Y of
/// C(Y,k)/C(n,k), i.e. sum_{Y=k}^{2l-1} C(Y,k) / (C(n,k) * (2l-1)).
inline Rational fake_support_expectation(std::uint32_t n, std::uint32_t k, std::uint32_t l) {
  if (k == 0) throw ValidationError("k must be at least 1");
  if (k > n) throw ValidationError("k exceeds the number of items");
  if (l < 1) throw ValidationError("l must be at least 1");
  BigInt sum = 0;
  for (std::uint32_t y = k; y <= 2 * l - 1; ++y) sum += binomial(y, k);
  return Rational(sum, binomial(n, k) * BigInt(2 * l - 1));
}

/// Recovers the real-database support S of a k-itemset from its mixed-database
/// support S*: S = S*(1+w) - w * t(k), with t(k) the fake containment
/// expectation above. Exact in expectation; clamped to [0,1] against sampling
/// noise.
inline ReconstructedSupport reconstruct_support(const Rational& s_star, std::uint32_t k,
                                                const ReconstructionParams& params) {
  validate_params(params);
  if (s_star < 0 || s_star > 1)
    throw ValidationError("mixed support must lie in [0, 1], got " + format_exact(s_star));
  ReconstructedSupport out;
  out.raw = s_star * (1 + params.w) -
            params.w * fake_support_expectation(params.n, k, params.l);
  out.clamped = std::min(Rational(1), std::max(Rational(0), out.raw));
  out.was_clamped = out.clamped != out.raw;
  return out;
}

/// Mixed-database support threshold equivalent to s_min on the real database:
/// the algebraic inverse of reconstruct_support, s* = (s_min + w*t(k))/(1+w).
/// Non-increasing in k.
inline Rational invert_threshold(const Rational& s_min, std::uint32_t k,
                                 const ReconstructionParams& params) {
  validate_params(params);
  if (s_min <= 0 || s_min > 1)
    throw ValidationError("minimum support must lie in (0, 1], got " + format_exact(s_min));
  return (s_min + params.w * fake_support_expectation(params.n, k, params.l)) / (1 + params.w);
}

/// Exact inverse of shift_item; maps a distorted id back to the original.
inline ItemId deshift_item(ItemId r, std::uint64_t key_i, std::uint32_t n) {
  if (n == 0) throw ValidationError("catalog size must be positive");
  if (r == 0 || r > n)
    throw ValidationError("item id " + std::to_string(r) + " out of range 1.." + std::to_string(n));
  return static_cast<ItemId>((r - 1 + n - key_i % n) % n + 1);
}

struct RecoveredItemset {
  Itemset items;             // original-space ids
  std::int64_t mixed_count = 0;
  Rational mixed_support;    // exact support in the mixed database
  ReconstructedSupport support;
};

struct RecoveryResult {
  std::vector<RecoveredItemset> itemsets;
  std::vector<std::string> warnings;
};

/// End-to-end recovery: mines the mixed database with per-level inverted
/// thresholds, de-shifts every frequent itemset back to original ids and
/// keeps those whose reconstructed support still reaches s_min.
inline RecoveryResult recover_frequent_itemsets(const TransactionDb& mixed,
                                                const ReconstructionParams& params,
                                                const Rational& s_min) {
  validate_params(params);
  if (mixed.catalog.size() > params.n)
    throw ValidationError("mixed database has item ids beyond n=" + std::to_string(params.n));
  if (mixed.transactions.empty()) throw ValidationError("mixed database is empty");

  RecoveryResult result;

  // Sanity: the mixed row count should be N + round(w*N) for some N.
  {
    const std::size_t total = mixed.transactions.size();
    Rational real_estimate = Rational(total) / (1 + params.w);
    BigInt n_est = (2 * numerator(real_estimate) + denominator(real_estimate)) /
                   (2 * denominator(real_estimate));
    std::size_t n_real = n_est.convert_to<std::size_t>();
    if (n_real == 0 || n_real + fake_total(params.w, n_real) != total)
      result.warnings.push_back("mixed transaction count " + std::to_string(total) +
                                " is inconsistent with w = " + format_exact(params.w) +
                                "; was this database produced with these parameters?");
  }

  std::size_t max_len = 0;
  for (const Transaction& t : mixed.transactions) max_len = std::max(max_len, t.size());
  std::vector<Rational> thresholds;
  thresholds.reserve(max_len);
  for (std::size_t k = 1; k <= max_len; ++k)
    thresholds.push_back(invert_threshold(s_min, static_cast<std::uint32_t>(k), params));

  // The mixed db may use a synthesized catalog smaller than n; rebind so the
  // shifted id space is fully addressable.
  const TransactionDb* db = &mixed;
  TransactionDb widened;
  if (mixed.catalog.size() < params.n) {
    widened.catalog = ItemCatalog::numbered(params.n);
    widened.transactions = mixed.transactions;
    db = &widened;
  }

  for (const FrequentItemset& f : frequent_itemsets(*db, thresholds)) {
    RecoveredItemset rec;
    rec.items.reserve(f.items.size());
    for (ItemId id : f.items) rec.items.push_back(deshift_item(id, params.key_i, params.n));
    std::sort(rec.items.begin(), rec.items.end());
    rec.mixed_count = f.count;
    rec.mixed_support = f.support;
    rec.support =
        reconstruct_support(f.support, static_cast<std::uint32_t>(f.items.size()), params);
    if (rec.support.clamped >= s_min) result.itemsets.push_back(std::move(rec));
  }

  std::sort(result.itemsets.begin(), result.itemsets.end(),
            [](const RecoveredItemset& a, const RecoveredItemset& b) {
              if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
              return a.items < b.items;
            });
  return result;
}

}  // namespace privmine
