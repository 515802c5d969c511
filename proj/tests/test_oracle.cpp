#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "privmine/catalog.hpp"
#include "privmine/errors.hpp"
#include "privmine/miner.hpp"
#include "privmine/oracle.hpp"
#include "support/test_util.hpp"

using namespace privmine;

namespace {

TransactionDb golden_db() {
  std::ifstream in(testutil::data_dir() / "market_real.basket");
  REQUIRE(in.good());
  return load_basket_file(in, std::nullopt).db;
}

}  // namespace

TEST_CASE("brute force miner reproduces the golden frequent itemsets") {
  TransactionDb db = golden_db();
  std::vector<FrequentItemset> got = brute_force_frequent(db, Rational(1, 5));
  REQUIRE(got.size() == 8);
  CHECK(got[0].items == Itemset{1});
  CHECK(got[4].support == Rational(3, 8));
  CHECK(got[7].items == Itemset{3, 5});
  CHECK(got == frequent_itemsets(db, Rational(1, 5)));
}

TEST_CASE("brute force miner rejects oversized catalogs") {
  TransactionDb db;
  db.catalog = ItemCatalog::numbered(21);
  db.transactions.push_back(Transaction{1});
  CHECK_THROWS_AS(brute_force_frequent(db, Rational(1, 2)), ValidationError);
}

TEST_CASE("containment enumeration agrees with the closed formula") {
  for (std::uint32_t n = 2; n <= 9; ++n)
    for (std::uint32_t l = 1; l <= 4; ++l) {
      if (2 * l - 1 > n) continue;
      for (std::uint32_t k = 1; k <= n; ++k)
        CHECK(exact_fake_expectation_enum(n, k, l) == fake_support_expectation(n, k, l));
    }
}

TEST_CASE("containment enumeration validates its domain") {
  CHECK_THROWS_AS(exact_fake_expectation_enum(5, 1, 4), ValidationError);  // 2l-1 > n
  CHECK_THROWS_AS(exact_fake_expectation_enum(5, 0, 2), ValidationError);
  CHECK_THROWS_AS(exact_fake_expectation_enum(25, 1, 2), ValidationError);
}

TEST_CASE("generated random databases are valid and deterministic") {
  TransactionDb a = random_db(8, 25, 555);
  TransactionDb b = random_db(8, 25, 555);
  TransactionDb c = random_db(8, 25, 556);
  CHECK(a.transactions == b.transactions);
  CHECK(a.transactions != c.transactions);
  REQUIRE(a.size() == 25);
  for (const Transaction& t : a.transactions) {
    REQUIRE(!t.empty());
    CHECK(std::is_sorted(t.begin(), t.end()));
    CHECK(std::adjacent_find(t.begin(), t.end()) == t.end());
    CHECK(t.back() <= 8);
  }
}

TEST_CASE("statistical pipeline check passes on the golden database") {
  TransactionDb db = golden_db();
  RandomizationParams params{Rational(3, 2), 2, 4, 2024, LengthModel::uniform()};
  std::vector<Itemset> targets{{1}, {2}, {3}, {4}, {5}};
  OracleReport report = mc_reconstruction_check(db, params, targets, 200);
  INFO([&] {
    std::ostringstream ss;
    report.print(ss);
    return ss.str();
  }());
  CHECK(report.all_passed());
  REQUIRE(report.checks.size() == 6);
  CHECK(report.checks[0].name.find("masked counts") != std::string::npos);
}

TEST_CASE("statistical check requires enough runs and targets") {
  TransactionDb db = golden_db();
  RandomizationParams params{Rational(3, 2), 2, 4, 1, LengthModel::uniform()};
  std::vector<Itemset> targets{{1}};
  CHECK_THROWS_AS(mc_reconstruction_check(db, params, targets, 10), ValidationError);
  CHECK_THROWS_AS(mc_reconstruction_check(db, params, {}, 100), ValidationError);
}

TEST_CASE("oracle report formatting") {
  OracleReport report;
  report.checks.push_back({"alpha", true, "fine"});
  report.checks.push_back({"beta check", false, "broke"});
  CHECK_FALSE(report.all_passed());
  std::ostringstream ss;
  report.print(ss);
  CHECK(ss.str() ==
        "PASS  alpha       fine\n"
        "FAIL  beta check  broke\n");
}
