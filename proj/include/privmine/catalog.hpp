#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "privmine/errors.hpp"
#include "privmine/rational.hpp"

namespace privmine {

/// Item identifier. Ids are 1-based and contiguous within a catalog.
using ItemId = std::uint32_t;

/// A transaction is a non-empty set of item ids, stored sorted ascending.
using Transaction = std::vector<ItemId>;

/// Bijection between item names and ids 1..n. Immutable once built.
class ItemCatalog {
 public:
  /// Builds a catalog from distinct names; ids are assigned in list order
  /// starting at 1. Names are whitespace-trimmed first.
  static ItemCatalog from_names(const std::vector<std::string>& names) {
    if (names.empty()) throw ValidationError("catalog needs at least one item name");
    ItemCatalog catalog;
    catalog.names_.reserve(names.size());
    for (const auto& raw : names) {
      std::string name(trim(raw));
      if (name.empty()) throw ValidationError("blank item name in catalog");
      auto [it, inserted] =
          catalog.index_.emplace(name, static_cast<ItemId>(catalog.names_.size() + 1));
      if (!inserted) throw ValidationError("duplicate item name '" + name + "'");
      catalog.names_.push_back(std::move(name));
    }
    return catalog;
  }

  /// Catalog for purely numeric data: names are the decimal ids "1".."n".
  static ItemCatalog numbered(std::uint32_t n) {
    if (n == 0) throw ValidationError("catalog needs at least one item");
    std::vector<std::string> names;
    names.reserve(n);
    for (std::uint32_t id = 1; id <= n; ++id) names.push_back(std::to_string(id));
    return from_names(names);
  }

  std::uint32_t size() const { return static_cast<std::uint32_t>(names_.size()); }

  const std::string& name_of(ItemId id) const {
    if (id == 0 || id > names_.size())
      throw ValidationError("item id " + std::to_string(id) + " out of range 1.." +
                            std::to_string(names_.size()));
    return names_[id - 1];
  }

  std::optional<ItemId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? std::nullopt : std::optional<ItemId>(it->second);
  }

  ItemId id_of(std::string_view name) const {
    auto id = find(name);
    if (!id) throw ValidationError("unknown item name '" + std::string(name) + "'");
    return *id;
  }

  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const ItemCatalog& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ItemId> index_;
};

/// Ordered sequence of transactions over one catalog.
struct TransactionDb {
  ItemCatalog catalog;
  std::vector<Transaction> transactions;

  std::size_t size() const { return transactions.size(); }
};

namespace detail {

inline std::vector<std::string_view> split_any(std::string_view line, std::string_view seps) {
  std::vector<std::string_view> tokens;
  std::size_t start = 0;
  while (start < line.size()) {
    std::size_t end = line.find_first_of(seps, start);
    if (end == std::string_view::npos) end = line.size();
    if (end > start) tokens.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

inline std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.emplace_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.emplace_back(trim(current));
  return fields;
}

inline ItemId parse_item_id(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  if (token.empty()) throw ValidationError("empty item token on line " + std::to_string(line_no));
  for (char c : token) {
    if (c < '0' || c > '9')
      throw ValidationError("non-integer item '" + std::string(token) + "' on line " +
                            std::to_string(line_no));
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
    if (value > 0xffffffffULL)
      throw ValidationError("item id '" + std::string(token) + "' too large on line " +
                            std::to_string(line_no));
  }
  if (value == 0) throw ValidationError("item id must be positive on line " + std::to_string(line_no));
  return static_cast<ItemId>(value);
}

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

inline bool is_comment_or_blank(std::string_view line) {
  std::string_view t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace detail

struct BasketLoadResult {
  TransactionDb db;
  /// Number of duplicate ids collapsed while forming transaction sets.
  std::size_t duplicates_collapsed = 0;
};

/// Reads a basket file: one transaction per line, ids separated by spaces,
/// tabs or commas; '#' lines and blank lines are skipped. Duplicate ids on a
/// line collapse into the set and are counted. Without an explicit catalog,
/// one is synthesized as 1..max-id.
inline BasketLoadResult load_basket_file(std::istream& in,
                                         std::optional<ItemCatalog> catalog = std::nullopt) {
  BasketLoadResult result;
  std::vector<Transaction> transactions;
  ItemId max_id = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::strip_cr(std::move(raw));
    if (detail::is_comment_or_blank(line)) continue;
    Transaction t;
    for (std::string_view token : detail::split_any(line, " \t,"))
      t.push_back(detail::parse_item_id(token, line_no));
    if (t.empty()) continue;
    std::sort(t.begin(), t.end());
    auto last = std::unique(t.begin(), t.end());
    result.duplicates_collapsed += static_cast<std::size_t>(t.end() - last);
    t.erase(last, t.end());
    max_id = std::max(max_id, t.back());
    transactions.push_back(std::move(t));
  }
  if (transactions.empty()) throw ValidationError("basket file holds no transactions");
  if (catalog) {
    if (max_id > catalog->size())
      throw ValidationError("item id " + std::to_string(max_id) + " exceeds catalog size " +
                            std::to_string(catalog->size()));
    result.db.catalog = std::move(*catalog);
  } else {
    result.db.catalog = ItemCatalog::numbered(max_id);
  }
  result.db.transactions = std::move(transactions);
  return result;
}

/// Writes transactions one per line, ids ascending, space-separated.
inline void write_basket_file(std::ostream& out, const TransactionDb& db) {
  for (const Transaction& t : db.transactions) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out << ' ';
      out << t[i];
    }
    out << '\n';
  }
}

/// Reads an attribute table (CSV, header row of attribute names) and
/// binarizes it: every distinct "attr=value" becomes an item, assigned ids in
/// first-encounter order scanning rows top-to-bottom, columns left-to-right.
/// Each row becomes a transaction with exactly one item per selected
/// attribute. An empty selection means all attributes.
inline TransactionDb load_attribute_table(std::istream& in,
                                          std::span<const std::string> selected = {}) {
  std::string raw;
  if (!std::getline(in, raw)) throw ValidationError("attribute table is empty");
  std::vector<std::string> header = detail::split_csv(detail::strip_cr(std::move(raw)));

  std::vector<std::size_t> columns;
  if (selected.empty()) {
    columns.resize(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) columns[i] = i;
  } else {
    std::vector<bool> wanted(header.size(), false);
    for (const std::string& name : selected) {
      auto it = std::find(header.begin(), header.end(), std::string(trim(name)));
      if (it == header.end())
        throw ValidationError("unknown attribute '" + name + "' (not in header)");
      wanted[static_cast<std::size_t>(it - header.begin())] = true;
    }
    for (std::size_t i = 0; i < header.size(); ++i)
      if (wanted[i]) columns.push_back(i);  // keep header order
  }

  std::vector<std::string> item_names;
  std::unordered_map<std::string, ItemId> item_index;
  std::vector<Transaction> transactions;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::strip_cr(std::move(raw));
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = detail::split_csv(line);
    if (fields.size() != header.size())
      throw ValidationError("row on line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, header has " +
                            std::to_string(header.size()));
    Transaction t;
    t.reserve(columns.size());
    for (std::size_t col : columns) {
      std::string item = header[col] + "=" + fields[col];
      auto [it, inserted] = item_index.emplace(item, static_cast<ItemId>(item_names.size() + 1));
      if (inserted) item_names.push_back(item);
      t.push_back(it->second);
    }
    std::sort(t.begin(), t.end());
    transactions.push_back(std::move(t));
  }
  if (transactions.empty()) throw ValidationError("attribute table holds no data rows");

  TransactionDb db;
  db.catalog = ItemCatalog::from_names(item_names);
  db.transactions = std::move(transactions);
  return db;
}

struct AverageLength {
  Rational exact;            // sum of lengths / N
  std::uint32_t rounded = 0;  // nearest integer, half up, floor 1
};

/// Average transaction length, exact and rounded to the fake-length knob l.
inline AverageLength average_real_length(const TransactionDb& db) {
  if (db.transactions.empty()) throw ValidationError("database is empty");
  std::uint64_t sum = 0;
  for (const Transaction& t : db.transactions) sum += t.size();
  AverageLength avg;
  avg.exact = Rational(sum, db.transactions.size());
  BigInt rounded = (2 * BigInt(sum) + BigInt(db.transactions.size())) /
                   (2 * BigInt(db.transactions.size()));
  avg.rounded = std::max<std::uint32_t>(1, rounded.convert_to<std::uint32_t>());
  return avg;
}

/// Catalog file: one "id<TAB>name" line per item, ids 1..n in order.
inline void write_catalog_file(std::ostream& out, const ItemCatalog& catalog) {
  for (std::uint32_t id = 1; id <= catalog.size(); ++id)
    out << id << '\t' << catalog.name_of(id) << '\n';
}

inline ItemCatalog read_catalog_file(std::istream& in) {
  std::vector<std::string> names;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::strip_cr(std::move(raw));
    if (detail::is_comment_or_blank(line)) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ValidationError("catalog line " + std::to_string(line_no) + " lacks an id<TAB>name pair");
    ItemId id = detail::parse_item_id(trim(line.substr(0, tab)), line_no);
    if (id != names.size() + 1)
      throw ValidationError("catalog ids must be contiguous from 1; got " + std::to_string(id) +
                            " on line " + std::to_string(line_no));
    names.emplace_back(trim(line.substr(tab + 1)));
  }
  return ItemCatalog::from_names(names);
}

/// Decodes a transaction back to its name set (encoding round-trip helper).
inline std::vector<std::string> decode_transaction(const ItemCatalog& catalog,
                                                   const Transaction& t) {
  std::vector<std::string> names;
  names.reserve(t.size());
  for (ItemId id : t) names.push_back(catalog.name_of(id));
  return names;
}

}  // namespace privmine
