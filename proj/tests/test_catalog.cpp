#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "privmine/catalog.hpp"
#include "privmine/errors.hpp"
#include "support/test_util.hpp"

using namespace privmine;

TEST_CASE("catalog from names assigns contiguous ids") {
  ItemCatalog c = ItemCatalog::from_names({"bread", "butter", "milk"});
  REQUIRE(c.size() == 3);
  CHECK(c.name_of(1) == "bread");
  CHECK(c.name_of(3) == "milk");
  CHECK(c.id_of("butter") == 2);
  CHECK(c.find("beer") == std::nullopt);
}

TEST_CASE("catalog rejects bad name lists") {
  CHECK_THROWS_AS(ItemCatalog::from_names({}), ValidationError);
  CHECK_THROWS_AS(ItemCatalog::from_names({"a", "a"}), ValidationError);
  CHECK_THROWS_AS(ItemCatalog::from_names({"a", "  "}), ValidationError);
}

TEST_CASE("numbered catalog names items by their id") {
  ItemCatalog c = ItemCatalog::numbered(4);
  REQUIRE(c.size() == 4);
  CHECK(c.name_of(1) == "1");
  CHECK(c.name_of(4) == "4");
}

TEST_CASE("basket files parse with mixed separators and comments") {
  std::istringstream in("# comment line\n1 5\n3,2\n\n  4\t1\n");
  BasketLoadResult r = load_basket_file(in, std::nullopt);
  REQUIRE(r.db.size() == 3);
  CHECK(r.db.catalog.size() == 5);
  CHECK(r.db.transactions[0] == Transaction{1, 5});
  CHECK(r.db.transactions[1] == Transaction{2, 3});
  CHECK(r.db.transactions[2] == Transaction{1, 4});
  CHECK(r.duplicates_collapsed == 0);
}

TEST_CASE("basket rows are sorted and duplicates collapsed") {
  std::istringstream in("3 1 3 2\n");
  BasketLoadResult r = load_basket_file(in, std::nullopt);
  CHECK(r.db.transactions[0] == Transaction{1, 2, 3});
  CHECK(r.duplicates_collapsed == 1);
}

TEST_CASE("basket parse errors") {
  auto load = [](const char* text) {
    std::istringstream in(text);
    return load_basket_file(in, std::nullopt);
  };
  CHECK_THROWS_AS(load("1 x 3\n"), ValidationError);
  CHECK_THROWS_AS(load("0 2\n"), ValidationError);
  CHECK_THROWS_AS(load("-4\n"), ValidationError);
  CHECK_THROWS_AS(load(""), ValidationError);
  CHECK_THROWS_AS(load("# only comments\n"), ValidationError);
}

TEST_CASE("basket ids must fit the supplied catalog") {
  std::istringstream in("1 4\n");
  CHECK_THROWS_AS(load_basket_file(in, ItemCatalog::numbered(3)), ValidationError);
}

TEST_CASE("basket write is canonical and round-trips") {
  std::istringstream in("5 1\n2\n");
  BasketLoadResult r = load_basket_file(in, std::nullopt);
  std::ostringstream out;
  write_basket_file(out, r.db);
  CHECK(out.str() == "1 5\n2\n");
  std::istringstream back(out.str());
  BasketLoadResult again = load_basket_file(back, r.db.catalog);
  CHECK(again.db.transactions == r.db.transactions);
}

TEST_CASE("attribute tables become attribute=value transactions") {
  std::istringstream in(
      "color,size\n"
      "red,small\n"
      "blue,small\n"
      "red,large\n");
  TransactionDb db = load_attribute_table(in);
  REQUIRE(db.size() == 3);
  REQUIRE(db.catalog.size() == 4);
  CHECK(db.catalog.name_of(1) == "color=red");
  CHECK(db.catalog.name_of(2) == "size=small");
  CHECK(db.catalog.name_of(3) == "color=blue");
  CHECK(db.catalog.name_of(4) == "size=large");
  CHECK(db.transactions[0] == Transaction{1, 2});
  CHECK(db.transactions[1] == Transaction{2, 3});
  CHECK(db.transactions[2] == Transaction{1, 4});
}

TEST_CASE("attribute table column selection") {
  std::istringstream in(
      "color,size,shape\n"
      "red,small,round\n"
      "blue,large,square\n");
  std::vector<std::string> keep{"shape", "color"};
  TransactionDb db = load_attribute_table(in, keep);
  REQUIRE(db.catalog.size() == 4);
  CHECK(db.catalog.find("size=small") == std::nullopt);
  CHECK(db.catalog.id_of("color=red") >= 1);
  CHECK(db.transactions[0].size() == 2);
}

TEST_CASE("attribute table errors") {
  {
    std::istringstream in("a,b\n1\n");
    CHECK_THROWS_AS(load_attribute_table(in), ValidationError);
  }
  {
    std::istringstream in("a,b\n1,2\n");
    std::vector<std::string> keep{"missing"};
    CHECK_THROWS_AS(load_attribute_table(in, keep), ValidationError);
  }
  {
    std::istringstream in("");
    CHECK_THROWS_AS(load_attribute_table(in), ValidationError);
  }
}

TEST_CASE("average transaction length rounds half up") {
  std::istringstream in("1 2\n3\n");  // lengths 2,1 -> avg 1.5
  TransactionDb db = load_basket_file(in, std::nullopt).db;
  AverageLength avg = average_real_length(db);
  CHECK(avg.exact == Rational(3, 2));
  CHECK(avg.rounded == 2);
}

TEST_CASE("catalog file round trip") {
  ItemCatalog c = ItemCatalog::from_names({"bread", "beer with lime"});
  std::ostringstream out;
  write_catalog_file(out, c);
  CHECK(out.str() == "1\tbread\n2\tbeer with lime\n");
  std::istringstream in(out.str());
  CHECK(read_catalog_file(in) == c);
}

TEST_CASE("catalog file ids must be contiguous from 1") {
  std::istringstream in("1\ta\n3\tb\n");
  CHECK_THROWS_AS(read_catalog_file(in), ValidationError);
}

TEST_CASE("golden market fixture loads") {
  std::ifstream in(testutil::data_dir() / "market_real.basket");
  REQUIRE(in.good());
  BasketLoadResult r = load_basket_file(in, std::nullopt);
  CHECK(r.db.size() == 8);
  CHECK(r.db.catalog.size() == 5);
  CHECK(r.db.transactions[7] == Transaction{1, 3, 5});
}

TEST_CASE("decode transaction to names") {
  ItemCatalog c = ItemCatalog::from_names({"a", "b", "c"});
  std::vector<std::string> names = decode_transaction(c, Transaction{1, 3});
  CHECK(names == std::vector<std::string>{"a", "c"});
}
