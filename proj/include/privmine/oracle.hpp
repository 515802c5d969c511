#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "privmine/catalog.hpp"
#include "privmine/errors.hpp"
#include "privmine/miner.hpp"
#include "privmine/randomizer.hpp"
#include "privmine/reconstructor.hpp"

namespace privmine {

/// Reference miner: enumerates every nonempty subset of the item space and
/// counts it directly. Exponential, usable only for small catalogs; exists to
/// cross-check the level-wise miner on inputs where both are feasible.
inline std::vector<FrequentItemset> brute_force_frequent(const TransactionDb& db,
                                                         const Rational& s_min) {
  const std::uint32_t n = static_cast<std::uint32_t>(db.catalog.size());
  if (n > 20) throw ValidationError("brute-force miner limited to 20 items");
  detail::validate_threshold(s_min, "minimum support");
  if (db.transactions.empty()) throw ValidationError("database is empty");

  std::vector<std::uint32_t> rows;
  rows.reserve(db.transactions.size());
  for (const Transaction& t : db.transactions) {
    std::uint32_t mask = 0;
    for (ItemId id : t) mask |= 1u << (id - 1);
    rows.push_back(mask);
  }

  const Rational total(db.transactions.size());
  std::vector<FrequentItemset> out;
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    std::int64_t count = 0;
    for (std::uint32_t row : rows)
      if ((row & m) == m) ++count;
    Rational support = Rational(count) / total;
    if (support >= s_min) {
      FrequentItemset f;
      for (std::uint32_t b = 0; b < n; ++b)
        if (m & (1u << b)) f.items.push_back(static_cast<ItemId>(b + 1));
      f.count = count;
      f.support = support;
      out.push_back(std::move(f));
    }
  }
  std::sort(out.begin(), out.end(), [](const FrequentItemset& a, const FrequentItemset& b) {
    if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
    return a.items < b.items;
  });
  return out;
}

/// Independent route to the fake containment expectation: enumerates every
/// possible fake transaction literally (each length, each item subset of that
/// length) and averages the indicator of containing the k-set {1..k}. By
/// symmetry the answer is the same for any k-set. Feasible for small n only.
inline Rational exact_fake_expectation_enum(std::uint32_t n, std::uint32_t k, std::uint32_t l) {
  if (n == 0 || n > 20) throw ValidationError("enumeration limited to 1..20 items");
  if (k == 0 || k > n) throw ValidationError("k must lie in 1..n");
  if (l < 1) throw ValidationError("l must be at least 1");
  const std::uint32_t max_len = 2 * l - 1;
  if (max_len > n) throw ValidationError("enumeration needs 2l-1 <= n");

  const std::uint32_t target = (k == 32) ? ~0u : ((1u << k) - 1);  // items {1..k}
  std::vector<std::int64_t> containing(max_len + 1, 0);
  std::vector<std::int64_t> of_length(max_len + 1, 0);
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    const std::uint32_t len = static_cast<std::uint32_t>(std::popcount(m));
    if (len > max_len) continue;
    ++of_length[len];
    if ((m & target) == target) ++containing[len];
  }

  // Each length is equally likely; within a length each subset is equally
  // likely. Average the per-length containment probabilities.
  Rational sum = 0;
  for (std::uint32_t len = 1; len <= max_len; ++len)
    sum += Rational(containing[len], of_length[len]);
  return sum / max_len;
}

struct OracleCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct OracleReport {
  std::vector<OracleCheck> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const OracleCheck& c) { return c.passed; });
  }
  void print(std::ostream& os) const {
    std::size_t width = 0;
    for (const OracleCheck& c : checks) width = std::max(width, c.name.size());
    for (const OracleCheck& c : checks) {
      os << (c.passed ? "PASS" : "FAIL") << "  " << std::left << std::setw(static_cast<int>(width))
         << c.name;
      if (!c.detail.empty()) os << "  " << c.detail;
      os << '\n';
    }
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Uniform random database for cross-checking miners: each transaction picks
/// a length uniformly in 1..n, then that many distinct items.
inline TransactionDb random_db(std::uint32_t n, std::size_t rows, std::uint64_t seed) {
  if (n == 0) throw ValidationError("catalog size must be positive");
  if (rows == 0) throw ValidationError("row count must be positive");
  TransactionDb db;
  db.catalog = ItemCatalog::numbered(n);
  Rng rng(seed);
  std::uniform_int_distribution<std::uint32_t> len_dist(1, n);
  std::vector<ItemId> universe(n);
  std::iota(universe.begin(), universe.end(), ItemId{1});
  for (std::size_t i = 0; i < rows; ++i) {
    Transaction t;
    std::sample(universe.begin(), universe.end(), std::back_inserter(t), len_dist(rng), rng);
    db.transactions.push_back(std::move(t));
  }
  return db;
}

/// Statistical self-check of the whole randomize-then-reconstruct loop.
/// Runs the pipeline `runs` times with derived seeds and verifies, for each
/// target itemset:
///   - identity: on every run, counting the shifted itemset over the rows the
///     mask flags as real reproduces the true count exactly (no tolerance);
///   - unbiasedness: the mean reconstructed support lies within
///     `se_mult` standard errors of the true support.
inline OracleReport mc_reconstruction_check(const TransactionDb& real_db,
                                            const RandomizationParams& base_params,
                                            std::span<const Itemset> itemsets, int runs,
                                            double se_mult = 3.0) {
  if (runs < 30) throw ValidationError("need at least 30 runs for a stable standard error");
  if (itemsets.empty()) throw ValidationError("no target itemsets given");
  validate_params(base_params, real_db.catalog);

  const std::uint32_t n = static_cast<std::uint32_t>(real_db.catalog.size());
  ReconstructionParams rec{base_params.w, base_params.l, n, base_params.key_i};

  std::vector<Rational> true_support;
  std::vector<Itemset> shifted;
  for (const Itemset& items : itemsets) {
    true_support.push_back(support(real_db, items).support);
    Itemset s;
    for (ItemId id : items) s.push_back(shift_item(id, base_params.key_i, n));
    std::sort(s.begin(), s.end());
    shifted.push_back(std::move(s));
  }

  std::vector<std::vector<double>> recon(itemsets.size());
  bool identity_ok = true;
  std::string identity_detail;

  for (int r = 0; r < runs; ++r) {
    RandomizationParams p = base_params;
    p.seed = detail::splitmix64(base_params.seed + static_cast<std::uint64_t>(r));
    MixResult mixed = randomize_pipeline(real_db, p);

    for (std::size_t j = 0; j < itemsets.size(); ++j) {
      std::int64_t masked_count = 0;
      std::int64_t mixed_count = 0;
      for (std::size_t row = 0; row < mixed.db.transactions.size(); ++row) {
        if (!detail::contains_all(mixed.db.transactions[row], shifted[j])) continue;
        ++mixed_count;
        if (mixed.mask.is_real[row]) ++masked_count;
      }
      const std::int64_t want =
          (true_support[j] * Rational(real_db.transactions.size())).convert_to<std::int64_t>();
      if (masked_count != want && identity_ok) {
        identity_ok = false;
        identity_detail = "run " + std::to_string(r) + ": masked count " +
                          std::to_string(masked_count) + " != real count " + std::to_string(want);
      }
      Rational s_star(mixed_count, static_cast<std::int64_t>(mixed.db.transactions.size()));
      recon[j].push_back(reconstruct_support(s_star, static_cast<std::uint32_t>(shifted[j].size()), rec)
                             .raw.convert_to<double>());
    }
  }

  OracleReport report;
  report.checks.push_back(
      {"masked counts match real counts exactly", identity_ok, identity_detail});

  for (std::size_t j = 0; j < itemsets.size(); ++j) {
    double mean = 0;
    for (double v : recon[j]) mean += v;
    mean /= static_cast<double>(runs);
    double var = 0;
    for (double v : recon[j]) var += (v - mean) * (v - mean);
    var /= static_cast<double>(runs - 1);
    const double se = std::sqrt(var / static_cast<double>(runs));
    const double truth = true_support[j].convert_to<double>();
    const double dev = std::fabs(mean - truth);
    // Degenerate case: zero variance means every run reconstructed the same
    // value, so require exact agreement.
    const bool ok = se > 0 ? dev <= se_mult * se : dev == 0;

    std::string name = "unbiased reconstruction of {";
    for (std::size_t i = 0; i < itemsets[j].size(); ++i) {
      if (i) name += ' ';
      name += std::to_string(itemsets[j][i]);
    }
    name += "}";
    std::ostringstream detail;
    detail << std::setprecision(6) << "mean " << mean << ", true " << truth << ", se " << se;
    report.checks.push_back({std::move(name), ok, detail.str()});
  }
  return report;
}

}  // namespace privmine
