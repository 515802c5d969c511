#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "privmine/catalog.hpp"
#include "privmine/errors.hpp"
#include "privmine/miner.hpp"
#include "privmine/rational.hpp"
#include "privmine/reconstructor.hpp"

namespace privmine {

enum class ReportFormat { tsv, csv };

inline ReportFormat parse_format(std::string_view text) {
  if (text == "tsv") return ReportFormat::tsv;
  if (text == "csv") return ReportFormat::csv;
  throw ValidationError("unknown report format '" + std::string(text) + "' (use tsv or csv)");
}

namespace detail {

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_row(std::ostream& os, ReportFormat format,
                      std::initializer_list<std::string> fields) {
  bool first = true;
  for (const std::string& f : fields) {
    if (!first) os << (format == ReportFormat::csv ? ',' : '\t');
    os << (format == ReportFormat::csv ? csv_quote(f) : f);
    first = false;
  }
  os << '\n';
}

inline std::string ids_field(const Itemset& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(items[i]);
  }
  return out;
}

inline std::string names_field(const ItemCatalog& catalog, const Itemset& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += catalog.name_of(items[i]);
  }
  return out;
}

}  // namespace detail

inline void write_frequent_report(std::ostream& os, const ItemCatalog& catalog,
                                  const std::vector<FrequentItemset>& itemsets,
                                  ReportFormat format) {
  detail::write_row(os, format, {"k", "items", "item_names", "count", "support"});
  for (const FrequentItemset& f : itemsets)
    detail::write_row(os, format,
                      {std::to_string(f.items.size()), detail::ids_field(f.items),
                       detail::names_field(catalog, f.items), std::to_string(f.count),
                       format_decimal(f.support)});
}

inline void write_rules_report(std::ostream& os, const ItemCatalog& catalog,
                               const std::vector<AssociationRule>& rules, ReportFormat format) {
  detail::write_row(os, format,
                    {"antecedent", "consequent", "antecedent_names", "consequent_names", "support",
                     "confidence"});
  for (const AssociationRule& r : rules)
    detail::write_row(os, format,
                      {detail::ids_field(r.antecedent), detail::ids_field(r.consequent),
                       detail::names_field(catalog, r.antecedent),
                       detail::names_field(catalog, r.consequent), format_decimal(r.support),
                       format_decimal(r.confidence)});
}

inline void write_recovery_report(std::ostream& os, const ItemCatalog& catalog,
                                  const RecoveryResult& recovery, ReportFormat format) {
  detail::write_row(
      os, format,
      {"k", "items", "item_names", "mixed_support", "reconstructed_support", "clamped"});
  for (const RecoveredItemset& r : recovery.itemsets)
    detail::write_row(os, format,
                      {std::to_string(r.items.size()), detail::ids_field(r.items),
                       detail::names_field(catalog, r.items), format_decimal(r.mixed_support),
                       format_decimal(r.support.clamped), r.support.was_clamped ? "yes" : "no"});
}

struct CompareRow {
  Itemset items;
  Rational real_support;
  Rational reconstructed;
};

inline void write_compare_report(std::ostream& os, const ItemCatalog& catalog,
                                 const std::vector<CompareRow>& rows, ReportFormat format) {
  detail::write_row(
      os, format,
      {"k", "items", "item_names", "real_support", "reconstructed_support", "abs_diff"});
  for (const CompareRow& row : rows) {
    Rational diff = row.real_support - row.reconstructed;
    if (diff < 0) diff = -diff;
    detail::write_row(os, format,
                      {std::to_string(row.items.size()), detail::ids_field(row.items),
                       detail::names_field(catalog, row.items), format_decimal(row.real_support),
                       format_decimal(row.reconstructed), format_decimal(diff)});
  }
}

/// Two-column scatter data (real vs reconstructed support), one row per
/// itemset, for plotting how tight the reconstruction is.
inline void write_closeness_csv(std::ostream& os, const std::vector<CompareRow>& rows) {
  os << "real_support,reconstructed_support\n";
  for (const CompareRow& row : rows)
    os << format_decimal(row.real_support) << ',' << format_decimal(row.reconstructed) << '\n';
}

}  // namespace privmine
