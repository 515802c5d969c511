#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "privmine/catalog.hpp"
#include "privmine/errors.hpp"
#include "privmine/rational.hpp"

namespace privmine {

/// Non-empty set of item ids, sorted ascending.
using Itemset = std::vector<ItemId>;

struct FrequentItemset {
  Itemset items;
  std::int64_t count = 0;
  Rational support;  // count / N, exact

  bool operator==(const FrequentItemset& other) const {
    return items == other.items && count == other.count && support == other.support;
  }
};

struct AssociationRule {
  Itemset antecedent;   // X
  Itemset consequent;   // Y, disjoint from X
  std::int64_t count = 0;  // transactions containing X and Y
  Rational support;     // supp(X u Y)
  Rational confidence;  // supp(X u Y) / supp(X)
};

struct SupportCount {
  std::int64_t count = 0;
  Rational support;
};

namespace detail {

inline void validate_itemset(const Itemset& items, std::uint32_t n) {
  if (items.empty()) throw ValidationError("itemset must be non-empty");
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i] == 0 || items[i] > n)
      throw ValidationError("item id " + std::to_string(items[i]) + " out of range 1.." +
                            std::to_string(n));
    if (i > 0 && items[i] <= items[i - 1])
      throw ValidationError("itemset ids must be strictly ascending");
  }
}

inline bool contains_all(const Transaction& t, const Itemset& items) {
  return std::includes(t.begin(), t.end(), items.begin(), items.end());
}

inline void validate_threshold(const Rational& value, const char* what) {
  if (value <= 0 || value > 1)
    throw ValidationError(std::string(what) + " must lie in (0, 1], got " + format_exact(value));
}

}  // namespace detail

/// Fraction of transactions containing the itemset, as exact count / N.
inline SupportCount support(const TransactionDb& db, const Itemset& items) {
  detail::validate_itemset(items, db.catalog.size());
  if (db.transactions.empty()) throw ValidationError("database is empty");
  std::int64_t count = 0;
  for (const Transaction& t : db.transactions)
    if (detail::contains_all(t, items)) ++count;
  return {count, Rational(count, db.transactions.size())};
}

/// Apriori with per-level thresholds. `level_thresholds[k-1]` is the support
/// threshold for k-itemsets; levels past the end reuse the last entry.
///
/// Pruning must stay sound when thresholds decrease with k (a k-set below its
/// own threshold can still have a superset above the lower level-(k+1)
/// threshold), so candidate expansion at level k filters by the suffix
/// minimum of the thresholds while emission re-filters each level against its
/// own threshold.
inline std::vector<FrequentItemset> frequent_itemsets(const TransactionDb& db,
                                                      std::span<const Rational> level_thresholds) {
  if (level_thresholds.empty()) throw ValidationError("no thresholds given");
  for (const Rational& t : level_thresholds) detail::validate_threshold(t, "support threshold");
  if (db.transactions.empty()) throw ValidationError("database is empty");

  const std::int64_t n_trans = static_cast<std::int64_t>(db.transactions.size());
  std::size_t max_len = 0;
  for (const Transaction& t : db.transactions) max_len = std::max(max_len, t.size());
  if (max_len == 0) return {};

  auto threshold_at = [&](std::size_t k) -> const Rational& {
    return level_thresholds[std::min(k, level_thresholds.size()) - 1];
  };
  // floor_at(k) = min over k' >= k of threshold(k'), down to the deepest
  // reachable level (no itemset can outgrow the longest transaction).
  std::vector<Rational> floors(max_len + 1);
  floors[max_len] = threshold_at(max_len);
  for (std::size_t k = max_len - 1; k >= 1; --k)
    floors[k] = std::min(threshold_at(k), floors[k + 1]);
  auto meets = [&](std::int64_t count, const Rational& thr) {
    return Rational(count, n_trans) >= thr;
  };

  std::vector<FrequentItemset> result;

  // Level 1.
  std::vector<std::int64_t> item_counts(db.catalog.size() + 1, 0);
  for (const Transaction& t : db.transactions)
    for (ItemId id : t) ++item_counts[id];
  std::vector<Itemset> expand;
  std::vector<std::int64_t> expand_counts;
  for (ItemId id = 1; id <= db.catalog.size(); ++id) {
    if (item_counts[id] <= 0 || !meets(item_counts[id], floors[1])) continue;
    expand.push_back({id});
    expand_counts.push_back(item_counts[id]);
  }
  for (std::size_t i = 0; i < expand.size(); ++i)
    if (meets(expand_counts[i], threshold_at(1)))
      result.push_back({expand[i], expand_counts[i], Rational(expand_counts[i], n_trans)});

  // Levels k -> k+1 until no candidates survive the floor.
  for (std::size_t k = 1; k < max_len && !expand.empty(); ++k) {
    // Prefix join: pairs sharing the first k-1 items, then subset pruning.
    std::vector<Itemset> candidates;
    for (std::size_t i = 0; i < expand.size(); ++i) {
      for (std::size_t j = i + 1; j < expand.size(); ++j) {
        if (!std::equal(expand[i].begin(), expand[i].end() - 1, expand[j].begin(),
                        expand[j].end() - 1))
          break;  // expand is sorted; once prefixes diverge they stay diverged
        Itemset candidate = expand[i];
        candidate.push_back(expand[j].back());
        bool all_subsets_present = true;
        for (std::size_t drop = 0; drop < candidate.size() && all_subsets_present; ++drop) {
          Itemset sub;
          sub.reserve(candidate.size() - 1);
          for (std::size_t p = 0; p < candidate.size(); ++p)
            if (p != drop) sub.push_back(candidate[p]);
          all_subsets_present = std::binary_search(expand.begin(), expand.end(), sub);
        }
        if (all_subsets_present) candidates.push_back(std::move(candidate));
      }
    }
    if (candidates.empty()) break;

    std::vector<std::int64_t> counts(candidates.size(), 0);
    for (const Transaction& t : db.transactions) {
      if (t.size() < k + 1) continue;
      for (std::size_t c = 0; c < candidates.size(); ++c)
        if (detail::contains_all(t, candidates[c])) ++counts[c];
    }

    std::vector<Itemset> next_expand;
    std::vector<std::int64_t> next_counts;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (!meets(counts[c], floors[k + 1])) continue;
      if (meets(counts[c], threshold_at(k + 1)))
        result.push_back({candidates[c], counts[c], Rational(counts[c], n_trans)});
      next_expand.push_back(std::move(candidates[c]));
      next_counts.push_back(counts[c]);
    }
    expand = std::move(next_expand);
    expand_counts = std::move(next_counts);
  }

  std::sort(result.begin(), result.end(), [](const FrequentItemset& a, const FrequentItemset& b) {
    if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
    return a.items < b.items;
  });
  return result;
}

/// Classic single-threshold mining.
inline std::vector<FrequentItemset> frequent_itemsets(const TransactionDb& db,
                                                      const Rational& s_min) {
  detail::validate_threshold(s_min, "minimum support");
  const Rational thresholds[1] = {s_min};
  return frequent_itemsets(db, thresholds);
}

/// Emits X => Z\X for every frequent Z (|Z| >= 2) and non-empty proper subset
/// X whose confidence reaches c_min. The frequent list must be subset-closed
/// (Apriori output at one global threshold is).
inline std::vector<AssociationRule> association_rules(
    const std::vector<FrequentItemset>& frequent, const TransactionDb& db, const Rational& s_min,
    const Rational& c_min) {
  detail::validate_threshold(s_min, "minimum support");
  detail::validate_threshold(c_min, "minimum confidence");
  if (db.transactions.empty()) throw ValidationError("database is empty");
  const std::int64_t n_trans = static_cast<std::int64_t>(db.transactions.size());

  std::map<Itemset, std::int64_t> counts;
  for (const FrequentItemset& f : frequent) counts[f.items] = f.count;

  std::vector<AssociationRule> rules;
  for (const FrequentItemset& f : frequent) {
    const std::size_t m = f.items.size();
    if (m < 2) continue;
    if (m > 30) throw ValidationError("itemset too large for rule enumeration");
    const std::uint64_t full = (1ull << m) - 1;
    for (std::uint64_t mask = 1; mask < full; ++mask) {
      Itemset antecedent, consequent;
      for (std::size_t b = 0; b < m; ++b)
        ((mask >> b) & 1 ? antecedent : consequent).push_back(f.items[b]);
      auto it = counts.find(antecedent);
      if (it == counts.end())
        throw ValidationError("frequent list is not subset-closed (missing antecedent)");
      Rational confidence(f.count, it->second);
      if (confidence < c_min) continue;
      rules.push_back({std::move(antecedent), std::move(consequent), f.count,
                       Rational(f.count, n_trans), std::move(confidence)});
    }
  }

  std::sort(rules.begin(), rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
    if (a.support != b.support) return a.support > b.support;
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
    return a.consequent < b.consequent;
  });
  return rules;
}

}  // namespace privmine
