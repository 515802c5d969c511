#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "privmine/catalog.hpp"
#include "privmine/errors.hpp"
#include "privmine/rational.hpp"

namespace privmine {

using Rng = std::mt19937_64;

/// Distribution of fake-transaction lengths.
struct LengthModel {
  enum class Kind { uniform, normal };

  Kind kind = Kind::uniform;
  double mean = 0.0;      // normal only
  double variance = 0.0;  // normal only

  static LengthModel uniform() { return {}; }

  static LengthModel normal(double mean, double variance) {
    if (variance < 0) throw ValidationError("length variance must be non-negative");
    return {Kind::normal, mean, variance};
  }
};

/// The privacy knobs: fake-to-real ratio w, mean fake length l, shift key i,
/// RNG seed and the fake-length model.
struct RandomizationParams {
  Rational w;              // fake transactions per real transaction, > 0
  std::uint32_t l = 0;     // mean fake length, >= 1
  std::uint64_t key_i = 0; // shift key, reduced mod n before use
  std::uint64_t seed = 0;
  LengthModel length_model;
};

/// Marks which rows of a mixed database are real. Oracle/debug only; never
/// part of production output.
struct MixMask {
  std::vector<bool> is_real;

  std::size_t real_count() const {
    return static_cast<std::size_t>(std::count(is_real.begin(), is_real.end(), true));
  }
};

struct MixResult {
  TransactionDb db;
  MixMask mask;
  std::size_t fake_count = 0;
};

/// Total number of fakes for a database of N real transactions: round(w*N),
/// half up.
inline std::size_t fake_total(const Rational& w, std::size_t n_real) {
  BigInt num = numerator(w) * BigInt(n_real);
  BigInt den = denominator(w);
  BigInt rounded = (2 * num + den) / (2 * den);
  return rounded.convert_to<std::size_t>();
}

inline void validate_params(const RandomizationParams& params, const ItemCatalog& catalog) {
  if (params.w <= 0) throw ValidationError("w must be positive");
  if (params.l < 1) throw ValidationError("l must be at least 1");
  if (params.length_model.kind == LengthModel::Kind::uniform &&
      2ull * params.l - 1 > catalog.size())
    throw ValidationError("fake length range needs 2l-1 <= n (l=" + std::to_string(params.l) +
                          ", n=" + std::to_string(catalog.size()) + ")");
}

namespace detail {

inline std::uint32_t draw_fake_length(const RandomizationParams& params, std::uint32_t n,
                                      Rng& rng) {
  if (params.length_model.kind == LengthModel::Kind::uniform) {
    std::uniform_int_distribution<std::uint32_t> dist(1, 2 * params.l - 1);
    return dist(rng);
  }
  std::normal_distribution<double> dist(params.length_model.mean,
                                        std::sqrt(params.length_model.variance));
  long long y = std::llround(dist(rng));
  return static_cast<std::uint32_t>(std::clamp<long long>(y, 1, n));
}

}  // namespace detail

/// Generates one fake transaction: length Y from the configured model, then Y
/// distinct items drawn uniformly from 1..n.
inline Transaction gen_fake_transaction(const RandomizationParams& params,
                                        const ItemCatalog& catalog, Rng& rng) {
  validate_params(params, catalog);
  std::uint32_t n = catalog.size();
  std::uint32_t y = detail::draw_fake_length(params, n, rng);
  std::vector<ItemId> ids(n);
  std::iota(ids.begin(), ids.end(), ItemId{1});
  Transaction t;
  t.reserve(y);
  std::sample(ids.begin(), ids.end(), std::back_inserter(t), y, rng);
  return t;  // selection sampling keeps ids ascending
}

/// Interleaves round(w*N) fakes among the real transactions. Each fake is
/// assigned a uniformly random gap among the N+1 gaps; real order is kept.
inline MixResult mix_fake(const TransactionDb& db, const RandomizationParams& params, Rng& rng) {
  validate_params(params, db.catalog);
  const std::size_t n_real = db.transactions.size();
  if (n_real == 0) throw ValidationError("database is empty");
  const std::size_t n_fake = fake_total(params.w, n_real);
  if (n_fake == 0)
    throw ValidationError("round(w*N) is zero: no fake transactions would be added");

  std::vector<std::size_t> gap_counts(n_real + 1, 0);
  std::uniform_int_distribution<std::size_t> gap_dist(0, n_real);
  for (std::size_t f = 0; f < n_fake; ++f) ++gap_counts[gap_dist(rng)];

  MixResult result;
  result.db.catalog = db.catalog;
  result.db.transactions.reserve(n_real + n_fake);
  result.mask.is_real.reserve(n_real + n_fake);
  result.fake_count = n_fake;
  for (std::size_t gap = 0; gap <= n_real; ++gap) {
    for (std::size_t f = 0; f < gap_counts[gap]; ++f) {
      result.db.transactions.push_back(gen_fake_transaction(params, db.catalog, rng));
      result.mask.is_real.push_back(false);
    }
    if (gap < n_real) {
      result.db.transactions.push_back(db.transactions[gap]);
      result.mask.is_real.push_back(true);
    }
  }
  return result;
}

/// A fake transaction pinned to a fixed position: `gap` is the number of real
/// transactions already emitted before it (0..N).
struct PinnedFake {
  std::size_t gap = 0;
  Transaction items;
};

/// Parses the --fakes-from hook file: per line, first token is the gap index,
/// the rest are item ids.
inline std::vector<PinnedFake> load_pinned_fakes(std::istream& in, const ItemCatalog& catalog) {
  std::vector<PinnedFake> fakes;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::strip_cr(std::move(raw));
    if (detail::is_comment_or_blank(line)) continue;
    auto tokens = detail::split_any(line, " \t,");
    if (tokens.size() < 2)
      throw ValidationError("fakes file line " + std::to_string(line_no) +
                            " needs a gap index and at least one item");
    PinnedFake fake;
    std::uint64_t gap = 0;
    for (char c : tokens[0]) {
      if (c < '0' || c > '9')
        throw ValidationError("bad gap index on fakes file line " + std::to_string(line_no));
      gap = gap * 10 + static_cast<std::uint64_t>(c - '0');
    }
    fake.gap = static_cast<std::size_t>(gap);
    for (std::size_t i = 1; i < tokens.size(); ++i)
      fake.items.push_back(detail::parse_item_id(tokens[i], line_no));
    std::sort(fake.items.begin(), fake.items.end());
    fake.items.erase(std::unique(fake.items.begin(), fake.items.end()), fake.items.end());
    if (fake.items.back() > catalog.size())
      throw ValidationError("fake item id exceeds catalog size on line " + std::to_string(line_no));
    fakes.push_back(std::move(fake));
  }
  return fakes;
}

/// Deterministic mix with a pinned fake list. The list length must equal
/// round(w*N) so the reconstruction algebra still applies.
inline MixResult mix_pinned(const TransactionDb& db, const std::vector<PinnedFake>& fakes,
                            const RandomizationParams& params) {
  validate_params(params, db.catalog);
  const std::size_t n_real = db.transactions.size();
  const std::size_t expected = fake_total(params.w, n_real);
  if (expected == 0)
    throw ValidationError("round(w*N) is zero: no fake transactions would be added");
  if (fakes.size() != expected)
    throw ValidationError("pinned fake list has " + std::to_string(fakes.size()) +
                          " transactions, round(w*N) requires " + std::to_string(expected));
  std::vector<std::vector<const Transaction*>> per_gap(n_real + 1);
  for (const PinnedFake& fake : fakes) {
    if (fake.gap > n_real)
      throw ValidationError("pinned fake gap " + std::to_string(fake.gap) + " exceeds N=" +
                            std::to_string(n_real));
    per_gap[fake.gap].push_back(&fake.items);
  }
  MixResult result;
  result.db.catalog = db.catalog;
  result.fake_count = fakes.size();
  for (std::size_t gap = 0; gap <= n_real; ++gap) {
    for (const Transaction* t : per_gap[gap]) {
      result.db.transactions.push_back(*t);
      result.mask.is_real.push_back(false);
    }
    if (gap < n_real) {
      result.db.transactions.push_back(db.transactions[gap]);
      result.mask.is_real.push_back(true);
    }
  }
  return result;
}

/// Keyed modular shift of one item id; a bijection on 1..n.
inline ItemId shift_item(ItemId a, std::uint64_t key_i, std::uint32_t n) {
  if (n == 0) throw ValidationError("catalog size must be positive");
  if (a == 0 || a > n)
    throw ValidationError("item id " + std::to_string(a) + " out of range 1.." + std::to_string(n));
  return static_cast<ItemId>((a - 1 + key_i % n) % n + 1);
}

/// Applies the shift to every item of every transaction. Row order and
/// per-transaction lengths are unchanged.
inline TransactionDb shift_db(const TransactionDb& db, std::uint64_t key_i) {
  TransactionDb out;
  out.catalog = db.catalog;
  out.transactions.reserve(db.transactions.size());
  const std::uint32_t n = db.catalog.size();
  for (const Transaction& t : db.transactions) {
    Transaction shifted;
    shifted.reserve(t.size());
    for (ItemId a : t) shifted.push_back(shift_item(a, key_i, n));
    std::sort(shifted.begin(), shifted.end());
    out.transactions.push_back(std::move(shifted));
  }
  return out;
}

/// Full distortion pipeline: fake injection first, then the item shift.
/// The mask refers to mixed row order (the shift does not permute rows).
inline MixResult randomize_pipeline(const TransactionDb& db, const RandomizationParams& params) {
  Rng rng(params.seed);
  MixResult mixed = mix_fake(db, params, rng);
  mixed.db = shift_db(mixed.db, params.key_i);
  return mixed;
}

/// Pipeline variant with pinned fakes (test hook).
inline MixResult randomize_pipeline(const TransactionDb& db, const RandomizationParams& params,
                                    const std::vector<PinnedFake>& fakes) {
  MixResult mixed = mix_pinned(db, fakes, params);
  mixed.db = shift_db(mixed.db, params.key_i);
  return mixed;
}

}  // namespace privmine
