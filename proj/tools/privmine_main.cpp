#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "privmine/catalog.hpp"
#include "privmine/errors.hpp"
#include "privmine/keyfile.hpp"
#include "privmine/miner.hpp"
#include "privmine/oracle.hpp"
#include "privmine/randomizer.hpp"
#include "privmine/rational.hpp"
#include "privmine/reconstructor.hpp"
#include "privmine/report.hpp"

namespace {

using namespace privmine;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
  } else {
    std::ofstream out = open_output(path);
    fn(out);
    if (!out) throw IoError("write to '" + path + "' failed");
  }
}

// Shared input surface: a basket file (optionally named by a catalog file) or
// an attribute table to be itemized.
struct InputOptions {
  std::string basket;
  std::string table;
  std::vector<std::string> attributes;
  std::string catalog;
};

void add_input_options(CLI::App* cmd, InputOptions& opts) {
  auto* basket =
      cmd->add_option("--input", opts.basket, "basket file, one transaction of item ids per line");
  auto* table = cmd->add_option("--table", opts.table,
                                "attribute table (CSV with header); each row becomes the "
                                "transaction of its attribute=value items");
  cmd->add_option("--attributes", opts.attributes,
                  "with --table: keep only these columns (comma separated)")
      ->delimiter(',');
  cmd->add_option("--catalog", opts.catalog, "item catalog file (id<TAB>name) for the input ids");
  basket->excludes(table);
  table->excludes(basket);
}

TransactionDb load_input(const InputOptions& opts) {
  if (!opts.table.empty()) {
    std::ifstream in = open_input(opts.table);
    return load_attribute_table(in, opts.attributes);
  }
  if (opts.basket.empty())
    throw ValidationError("an input database is required (--input or --table)");
  std::optional<ItemCatalog> catalog;
  if (!opts.catalog.empty()) {
    std::ifstream c = open_input(opts.catalog);
    catalog = read_catalog_file(c);
  }
  std::ifstream in = open_input(opts.basket);
  BasketLoadResult loaded = load_basket_file(in, catalog);
  if (loaded.duplicates_collapsed > 0)
    std::cerr << "note: collapsed repeated items in " << loaded.duplicates_collapsed
              << " transaction(s)\n";
  return std::move(loaded.db);
}

Itemset parse_itemset_arg(const std::string& text, const ItemCatalog& catalog) {
  Itemset items;
  for (std::string_view token : detail::split_any(text, " ,"))
    items.push_back(detail::parse_item_id(token, 0));
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  if (items.empty()) throw ValidationError("--itemset needs at least one item id");
  if (items.back() > catalog.size())
    throw ValidationError("--itemset mentions item " + std::to_string(items.back()) +
                          " but the database has only " + std::to_string(catalog.size()) +
                          " items");
  return items;
}

struct RandomizeArgs {
  InputOptions in;
  std::string output;
  std::string catalog_out;
  std::string w_text;
  std::uint32_t l = 0;
  std::uint64_t key = 0;
  std::uint64_t seed = 0;
  std::string length_model = "uniform";
  std::string key_file;
  std::string fakes_from;
};

int run_randomize(const RandomizeArgs& args) {
  TransactionDb db = load_input(args.in);
  const std::uint32_t n = db.catalog.size();

  RandomizationParams params;
  params.w = parse_rational(args.w_text);
  params.l = args.l != 0 ? args.l : average_real_length(db).rounded;
  params.key_i = args.key;
  params.seed = args.seed;
  params.length_model = parse_length_model(args.length_model);

  if (params.key_i % n == 0)
    std::cerr << "warning: key is a multiple of the item count, so the item shift is the "
                 "identity mapping\n";

  MixResult result;
  if (!args.fakes_from.empty()) {
    std::ifstream f = open_input(args.fakes_from);
    result = randomize_pipeline(db, params, load_pinned_fakes(f, db.catalog));
  } else {
    result = randomize_pipeline(db, params);
  }

  with_output(args.output, [&](std::ostream& out) { write_basket_file(out, result.db); });
  if (!args.catalog_out.empty()) {
    std::ofstream c = open_output(args.catalog_out);
    write_catalog_file(c, db.catalog);
  }
  if (!args.key_file.empty()) {
    KeyFile key{params.key_i, params.seed, params.w, params.l, n, params.length_model};
    std::ofstream k = open_output(args.key_file);
    write_key_file(k, key);
    std::cerr << "note: '" << args.key_file
              << "' holds the randomization secret; never ship it with the mixed database\n";
  }

  std::cout << "real transactions: " << db.size() << '\n'
            << "fake transactions: " << result.fake_count << '\n'
            << "mixed transactions: " << result.db.size() << '\n'
            << "items: " << n << '\n'
            << "fake length parameter: " << params.l << '\n';
  return 0;
}

struct MineArgs {
  InputOptions in;
  std::string min_support;
  std::string itemset;
  std::string output;
  std::string format = "tsv";
};

int run_mine(const MineArgs& args) {
  TransactionDb db = load_input(args.in);
  if (!args.itemset.empty()) {
    Itemset items = parse_itemset_arg(args.itemset, db.catalog);
    SupportCount sc = support(db, items);
    with_output(args.output,
                [&](std::ostream& out) { out << format_decimal(sc.support) << '\n'; });
    return 0;
  }
  if (args.min_support.empty()) throw ValidationError("--min-support is required");
  Rational s_min = parse_rational(args.min_support);
  std::vector<FrequentItemset> frequent = frequent_itemsets(db, s_min);
  ReportFormat fmt = parse_format(args.format);
  with_output(args.output,
              [&](std::ostream& out) { write_frequent_report(out, db.catalog, frequent, fmt); });
  return 0;
}

struct RulesArgs {
  InputOptions in;
  std::string min_support;
  std::string min_confidence;
  std::string output;
  std::string format = "tsv";
};

int run_rules(const RulesArgs& args) {
  TransactionDb db = load_input(args.in);
  Rational s_min = parse_rational(args.min_support);
  Rational c_min = parse_rational(args.min_confidence);
  std::vector<FrequentItemset> frequent = frequent_itemsets(db, s_min);
  std::vector<AssociationRule> rules = association_rules(frequent, db, s_min, c_min);
  ReportFormat fmt = parse_format(args.format);
  with_output(args.output,
              [&](std::ostream& out) { write_rules_report(out, db.catalog, rules, fmt); });
  return 0;
}

KeyFile load_key(const std::string& path) {
  std::ifstream in = open_input(path);
  KeyFile key = read_key_file(in);
  if (key.length_model.kind != LengthModel::Kind::uniform)
    throw ValidationError(
        "support reconstruction is defined for the uniform fake length model only");
  return key;
}

// The recovered ids live in the original item space; name them with the
// original catalog when one is supplied.
ItemCatalog recovered_catalog(const std::string& catalog_path, std::uint32_t n) {
  if (catalog_path.empty()) return ItemCatalog::numbered(n);
  std::ifstream c = open_input(catalog_path);
  ItemCatalog catalog = read_catalog_file(c);
  if (catalog.size() != n)
    throw ValidationError("catalog has " + std::to_string(catalog.size()) +
                          " items but the key file says n = " + std::to_string(n));
  return catalog;
}

struct ReconstructArgs {
  std::string input;
  std::string key_file;
  std::string catalog;
  std::string min_support;
  std::string output;
  std::string format = "tsv";
};

int run_reconstruct(const ReconstructArgs& args) {
  KeyFile key = load_key(args.key_file);
  std::ifstream in = open_input(args.input);
  BasketLoadResult loaded = load_basket_file(in, ItemCatalog::numbered(key.n));
  Rational s_min = parse_rational(args.min_support);

  ReconstructionParams params{key.w, key.l, key.n, key.key_i};
  RecoveryResult recovery = recover_frequent_itemsets(loaded.db, params, s_min);
  for (const std::string& w : recovery.warnings) std::cerr << "warning: " << w << '\n';

  ItemCatalog names = recovered_catalog(args.catalog, key.n);
  ReportFormat fmt = parse_format(args.format);
  with_output(args.output,
              [&](std::ostream& out) { write_recovery_report(out, names, recovery, fmt); });
  return 0;
}

struct CompareArgs {
  InputOptions in;  // the real database
  std::string mixed;
  std::string key_file;
  std::string min_support;
  std::string output;
  std::string closeness;
  std::string format = "tsv";
};

int run_compare(const CompareArgs& args) {
  TransactionDb real = load_input(args.in);
  KeyFile key = load_key(args.key_file);
  if (real.catalog.size() != key.n)
    throw ValidationError("real database has " + std::to_string(real.catalog.size()) +
                          " items but the key file says n = " + std::to_string(key.n));

  std::ifstream mixed_in = open_input(args.mixed);
  BasketLoadResult mixed = load_basket_file(mixed_in, ItemCatalog::numbered(key.n));
  Rational s_min = parse_rational(args.min_support);
  ReconstructionParams params{key.w, key.l, key.n, key.key_i};

  RecoveryResult recovery = recover_frequent_itemsets(mixed.db, params, s_min);
  for (const std::string& w : recovery.warnings) std::cerr << "warning: " << w << '\n';

  // Union of what is truly frequent and what the reconstruction reports, so
  // both false positives and false negatives show up in the table.
  std::map<Itemset, CompareRow> rows;
  for (const FrequentItemset& f : frequent_itemsets(real, s_min)) {
    CompareRow row;
    row.items = f.items;
    row.real_support = f.support;
    rows.emplace(f.items, std::move(row));
  }
  for (const RecoveredItemset& r : recovery.itemsets) {
    auto [it, inserted] = rows.try_emplace(r.items);
    if (inserted) {
      it->second.items = r.items;
      it->second.real_support = support(real, r.items).support;
    }
    it->second.reconstructed = r.support.clamped;
  }
  // Truly frequent itemsets the recovery missed still get their reconstructed
  // value, computed from the mixed support of their shifted image.
  for (auto& [items, row] : rows) {
    if (!row.reconstructed.is_zero()) continue;
    Itemset shifted;
    for (ItemId id : items) shifted.push_back(shift_item(id, key.key_i, key.n));
    std::sort(shifted.begin(), shifted.end());
    Rational s_star = support(mixed.db, shifted).support;
    row.reconstructed =
        reconstruct_support(s_star, static_cast<std::uint32_t>(items.size()), params).clamped;
  }

  std::vector<CompareRow> ordered;
  ordered.reserve(rows.size());
  for (auto& [items, row] : rows) ordered.push_back(std::move(row));
  std::sort(ordered.begin(), ordered.end(), [](const CompareRow& a, const CompareRow& b) {
    if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
    return a.items < b.items;
  });

  ReportFormat fmt = parse_format(args.format);
  with_output(args.output, [&](std::ostream& out) {
    write_compare_report(out, real.catalog, ordered, fmt);
  });
  if (!args.closeness.empty()) {
    std::ofstream c = open_output(args.closeness);
    write_closeness_csv(c, ordered);
  }
  return 0;
}

struct OracleArgs {
  std::uint32_t n = 8;
  std::uint32_t dbs = 25;
  int runs = 200;
  std::uint64_t seed = 1;
  std::string w_text = "1";
  std::uint32_t l = 2;
  std::string min_support = "1/4";
};

int run_oracle(const OracleArgs& args) {
  if (args.n < 3 || args.n > 12)
    throw ValidationError("oracle battery expects --n between 3 and 12");
  OracleReport report;

  {
    bool ok = true;
    std::string detail;
    std::size_t cases = 0;
    for (std::uint32_t n = 2; n <= args.n && ok; ++n)
      for (std::uint32_t l = 1; l <= 4 && ok; ++l) {
        if (2 * l - 1 > n) continue;
        for (std::uint32_t k = 1; k <= n && ok; ++k) {
          ++cases;
          Rational formula = fake_support_expectation(n, k, l);
          Rational enumerated = exact_fake_expectation_enum(n, k, l);
          if (formula != enumerated) {
            ok = false;
            detail = "n=" + std::to_string(n) + " k=" + std::to_string(k) +
                     " l=" + std::to_string(l) + ": " + format_exact(formula) +
                     " != " + format_exact(enumerated);
          }
        }
      }
    if (ok) detail = std::to_string(cases) + " cases";
    report.checks.push_back({"fake containment formula matches enumeration", ok, detail});
  }

  {
    bool ok = true;
    std::string detail;
    Rational s_min = parse_rational(args.min_support);
    for (std::uint32_t d = 0; d < args.dbs && ok; ++d) {
      TransactionDb db = random_db(args.n, 30, detail::splitmix64(args.seed + 1000 + d));
      auto fast = frequent_itemsets(db, s_min);
      auto brute = brute_force_frequent(db, s_min);
      if (fast != brute) {
        ok = false;
        detail = "database " + std::to_string(d) + " disagrees";
      }
    }
    if (ok) detail = std::to_string(args.dbs) + " random databases";
    report.checks.push_back({"level-wise miner matches brute force", ok, detail});
  }

  {
    TransactionDb db = random_db(args.n, 40, detail::splitmix64(args.seed + 5000));
    RandomizationParams params{parse_rational(args.w_text), args.l, 3, args.seed,
                               LengthModel::uniform()};
    std::vector<Itemset> targets{{1}, {2}, {1, 2}};
    OracleReport mc = mc_reconstruction_check(db, params, targets, args.runs);
    report.checks.insert(report.checks.end(), mc.checks.begin(), mc.checks.end());
  }

  report.print(std::cout);
  return report.all_passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fake-transaction randomization and exact support reconstruction "
               "for itemset mining"};
  app.require_subcommand(1);

  RandomizeArgs randomize_args;
  auto* randomize = app.add_subcommand(
      "randomize", "inject fake transactions and shift item ids with a secret key");
  add_input_options(randomize, randomize_args.in);
  randomize->add_option("--output", randomize_args.output, "mixed basket file to write");
  randomize->add_option("--catalog-out", randomize_args.catalog_out,
                        "write the input's item catalog (id<TAB>name) here");
  randomize->add_option("--w", randomize_args.w_text, "fake-to-real ratio, e.g. 3/2 or 1.5")
      ->required();
  randomize->add_option("--l", randomize_args.l,
                        "fake length parameter (default: rounded average real length)");
  randomize->add_option("--key", randomize_args.key, "secret shift key")->required();
  randomize->add_option("--seed", randomize_args.seed, "random seed (default 0)");
  randomize->add_option("--length-model", randomize_args.length_model,
                        "uniform | normal(mean, variance)");
  randomize->add_option("--key-file", randomize_args.key_file,
                        "write the reconstruction secret here");
  randomize->add_option("--fakes-from", randomize_args.fakes_from,
                        "use these fixed fake transactions (gap then items per line) instead of "
                        "drawing them");

  MineArgs mine_args;
  auto* mine = app.add_subcommand("mine", "find all frequent itemsets");
  add_input_options(mine, mine_args.in);
  mine->add_option("--min-support", mine_args.min_support, "support threshold in (0,1]");
  mine->add_option("--itemset", mine_args.itemset,
                   "print the exact support of this itemset (ids, space or comma separated) "
                   "instead of mining");
  mine->add_option("--output", mine_args.output, "report file (default stdout)");
  mine->add_option("--format", mine_args.format, "tsv | csv");

  RulesArgs rules_args;
  auto* rules = app.add_subcommand("rules", "derive association rules from frequent itemsets");
  add_input_options(rules, rules_args.in);
  rules->add_option("--min-support", rules_args.min_support, "support threshold in (0,1]")
      ->required();
  rules->add_option("--min-confidence", rules_args.min_confidence,
                    "confidence threshold in (0,1]")
      ->required();
  rules->add_option("--output", rules_args.output, "report file (default stdout)");
  rules->add_option("--format", rules_args.format, "tsv | csv");

  ReconstructArgs reconstruct_args;
  auto* reconstruct = app.add_subcommand(
      "reconstruct", "mine a mixed database and recover real supports with the key");
  reconstruct->add_option("--input", reconstruct_args.input, "mixed basket file")->required();
  reconstruct->add_option("--key-file", reconstruct_args.key_file, "key file from randomize")
      ->required();
  reconstruct->add_option("--catalog", reconstruct_args.catalog,
                          "original item catalog, to name the recovered items");
  reconstruct
      ->add_option("--min-support", reconstruct_args.min_support,
                   "support threshold on the real database, in (0,1]")
      ->required();
  reconstruct->add_option("--output", reconstruct_args.output, "report file (default stdout)");
  reconstruct->add_option("--format", reconstruct_args.format, "tsv | csv");

  CompareArgs compare_args;
  auto* compare = app.add_subcommand(
      "compare", "reconstructed supports side by side with the real ones");
  add_input_options(compare, compare_args.in);
  compare->add_option("--mixed", compare_args.mixed, "mixed basket file")->required();
  compare->add_option("--key-file", compare_args.key_file, "key file from randomize")->required();
  compare
      ->add_option("--min-support", compare_args.min_support,
                   "support threshold on the real database, in (0,1]")
      ->required();
  compare->add_option("--output", compare_args.output, "report file (default stdout)");
  compare->add_option("--closeness", compare_args.closeness,
                      "also write real,reconstructed support pairs to this CSV");
  compare->add_option("--format", compare_args.format, "tsv | csv");

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand(
      "oracle", "self-check: independent reference implementations cross-check the pipeline");
  oracle->add_option("--n", oracle_args.n, "item count for the generated databases (3..12)");
  oracle->add_option("--dbs", oracle_args.dbs, "random databases for the miner cross-check");
  oracle->add_option("--runs", oracle_args.runs, "randomization runs for the statistical check");
  oracle->add_option("--seed", oracle_args.seed, "seed for the generated inputs");
  oracle->add_option("--w", oracle_args.w_text, "fake-to-real ratio for the statistical check");
  oracle->add_option("--l", oracle_args.l, "fake length parameter for the statistical check");
  oracle->add_option("--min-support", oracle_args.min_support,
                     "threshold for the miner cross-check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (randomize->parsed()) return run_randomize(randomize_args);
    if (mine->parsed()) return run_mine(mine_args);
    if (rules->parsed()) return run_rules(rules_args);
    if (reconstruct->parsed()) return run_reconstruct(reconstruct_args);
    if (compare->parsed()) return run_compare(compare_args);
    if (oracle->parsed()) return run_oracle(oracle_args);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
