#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "privmine/catalog.hpp"
#include "privmine/errors.hpp"
#include "privmine/keyfile.hpp"
#include "privmine/randomizer.hpp"
#include "support/test_util.hpp"

using namespace privmine;

namespace {

TransactionDb golden_db() {
  std::ifstream in(testutil::data_dir() / "market_real.basket");
  REQUIRE(in.good());
  return load_basket_file(in, std::nullopt).db;
}

std::vector<PinnedFake> golden_fakes(const ItemCatalog& catalog) {
  std::ifstream in(testutil::data_dir() / "market_fakes.txt");
  REQUIRE(in.good());
  return load_pinned_fakes(in, catalog);
}

}  // namespace

TEST_CASE("fake total is round(w*N) half up") {
  CHECK(fake_total(Rational(3, 2), 8) == 12);
  CHECK(fake_total(Rational(1, 2), 5) == 3);   // 2.5 rounds up
  CHECK(fake_total(Rational(1, 3), 3) == 1);
  CHECK(fake_total(Rational(1, 10), 4) == 0);  // 0.4 rounds down
  CHECK(fake_total(Rational(2), 8124) == 16248);
}

TEST_CASE("parameter validation") {
  ItemCatalog c = ItemCatalog::numbered(5);
  RandomizationParams p{Rational(1), 2, 1, 0, LengthModel::uniform()};
  CHECK_NOTHROW(validate_params(p, c));
  p.w = Rational(0);
  CHECK_THROWS_AS(validate_params(p, c), ValidationError);
  p.w = Rational(-1, 2);
  CHECK_THROWS_AS(validate_params(p, c), ValidationError);
  p.w = Rational(1);
  p.l = 0;
  CHECK_THROWS_AS(validate_params(p, c), ValidationError);
  p.l = 4;  // 2l-1 = 7 > 5 items
  CHECK_THROWS_AS(validate_params(p, c), ValidationError);
  p.length_model = LengthModel::normal(4.0, 1.0);  // normal model has no such cap
  CHECK_NOTHROW(validate_params(p, c));
}

TEST_CASE("uniform fake lengths cover 1..2l-1 with mean l") {
  ItemCatalog c = ItemCatalog::numbered(9);
  RandomizationParams p{Rational(1), 3, 1, 7, LengthModel::uniform()};
  Rng rng(p.seed);
  std::map<std::size_t, int> seen;
  double total = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    Transaction t = gen_fake_transaction(p, c, rng);
    REQUIRE(!t.empty());
    REQUIRE(t.size() <= 5);
    REQUIRE(std::is_sorted(t.begin(), t.end()));
    REQUIRE(std::adjacent_find(t.begin(), t.end()) == t.end());
    REQUIRE(t.back() <= 9);
    ++seen[t.size()];
    total += static_cast<double>(t.size());
  }
  for (std::size_t len = 1; len <= 5; ++len) CHECK(seen[len] > 0);
  CHECK_THAT(total / draws, Catch::Matchers::WithinAbs(3.0, 0.05));
}

TEST_CASE("normal fake lengths are clamped to 1..n") {
  ItemCatalog c = ItemCatalog::numbered(4);
  RandomizationParams p{Rational(1), 10, 1, 11, LengthModel::normal(10.0, 25.0)};
  Rng rng(p.seed);
  for (int i = 0; i < 2000; ++i) {
    Transaction t = gen_fake_transaction(p, c, rng);
    REQUIRE(!t.empty());
    REQUIRE(t.size() <= 4);
  }
}

TEST_CASE("mix keeps real transactions in order and marks them") {
  TransactionDb db = golden_db();
  RandomizationParams p{Rational(3, 2), 2, 4, 123, LengthModel::uniform()};
  Rng rng(p.seed);
  MixResult mixed = mix_fake(db, p, rng);
  REQUIRE(mixed.fake_count == 12);
  REQUIRE(mixed.db.size() == 20);
  REQUIRE(mixed.mask.is_real.size() == 20);
  CHECK(mixed.mask.real_count() == 8);
  CHECK(mixed.db.catalog == db.catalog);

  std::vector<Transaction> reals;
  for (std::size_t i = 0; i < mixed.db.size(); ++i)
    if (mixed.mask.is_real[i]) reals.push_back(mixed.db.transactions[i]);
  CHECK(reals == db.transactions);
}

TEST_CASE("mixing refuses to add zero fakes") {
  TransactionDb db = golden_db();
  RandomizationParams p{Rational(1, 100), 2, 4, 1, LengthModel::uniform()};
  Rng rng(p.seed);
  CHECK_THROWS_AS(mix_fake(db, p, rng), ValidationError);
}

TEST_CASE("pinned fakes reproduce the golden mixed database") {
  TransactionDb db = golden_db();
  RandomizationParams p{Rational(3, 2), 2, 4, 0, LengthModel::uniform()};
  MixResult mixed = mix_pinned(db, golden_fakes(db.catalog), p);

  std::ifstream in(testutil::data_dir() / "market_mixed.basket");
  TransactionDb want = load_basket_file(in, db.catalog).db;
  CHECK(mixed.db.transactions == want.transactions);

  const std::vector<std::size_t> real_rows{0, 1, 5, 6, 10, 11, 14, 15};
  for (std::size_t i = 0; i < mixed.mask.is_real.size(); ++i) {
    bool expect_real =
        std::find(real_rows.begin(), real_rows.end(), i) != real_rows.end();
    CHECK(mixed.mask.is_real[i] == expect_real);
  }
}

TEST_CASE("pinned fake list must match round(w*N)") {
  TransactionDb db = golden_db();
  RandomizationParams p{Rational(1), 2, 4, 0, LengthModel::uniform()};  // needs 8 fakes
  CHECK_THROWS_AS(mix_pinned(db, golden_fakes(db.catalog), p), ValidationError);
}

TEST_CASE("pinned fake parsing rejects bad lines") {
  ItemCatalog c = ItemCatalog::numbered(5);
  {
    std::istringstream in("2\n");  // gap without items
    CHECK_THROWS_AS(load_pinned_fakes(in, c), ValidationError);
  }
  {
    std::istringstream in("1 9\n");  // item beyond catalog
    CHECK_THROWS_AS(load_pinned_fakes(in, c), ValidationError);
  }
}

TEST_CASE("item shift matches the worked five-item mapping") {
  // key 4 over five items: 1->5, 2->1, 3->2, 4->3, 5->4
  CHECK(shift_item(1, 4, 5) == 5);
  CHECK(shift_item(2, 4, 5) == 1);
  CHECK(shift_item(3, 4, 5) == 2);
  CHECK(shift_item(4, 4, 5) == 3);
  CHECK(shift_item(5, 4, 5) == 4);
}

TEST_CASE("shift with key multiple of n is the identity") {
  for (ItemId a = 1; a <= 7; ++a) {
    CHECK(shift_item(a, 0, 7) == a);
    CHECK(shift_item(a, 14, 7) == a);
  }
}

TEST_CASE("shift is a bijection for every key") {
  for (std::uint32_t n : {1u, 2u, 5u, 17u, 64u}) {
    for (std::uint64_t key : {0ull, 1ull, 3ull, 1000000007ull}) {
      std::set<ItemId> image;
      for (ItemId a = 1; a <= n; ++a) image.insert(shift_item(a, key, n));
      CHECK(image.size() == n);
      CHECK(*image.begin() == 1);
      CHECK(*image.rbegin() == n);
    }
  }
}

TEST_CASE("shift rejects out-of-range items") {
  CHECK_THROWS_AS(shift_item(0, 1, 5), ValidationError);
  CHECK_THROWS_AS(shift_item(6, 1, 5), ValidationError);
}

TEST_CASE("shifted databases keep transactions sorted") {
  TransactionDb db = golden_db();
  TransactionDb shifted = shift_db(db, 4);
  REQUIRE(shifted.size() == db.size());
  for (const Transaction& t : shifted.transactions) {
    CHECK(std::is_sorted(t.begin(), t.end()));
    CHECK(std::adjacent_find(t.begin(), t.end()) == t.end());
  }
  // row {1,5} with map 1->5, 5->4 becomes {4,5}
  CHECK(shifted.transactions[0] == Transaction{4, 5});
}

TEST_CASE("pipeline is deterministic in the seed") {
  TransactionDb db = golden_db();
  RandomizationParams p{Rational(3, 2), 2, 4, 99, LengthModel::uniform()};
  MixResult a = randomize_pipeline(db, p);
  MixResult b = randomize_pipeline(db, p);
  CHECK(a.db.transactions == b.db.transactions);
  CHECK(a.mask.is_real == b.mask.is_real);

  p.seed = 100;
  MixResult c = randomize_pipeline(db, p);
  CHECK(a.db.transactions != c.db.transactions);
}

TEST_CASE("key files round trip") {
  KeyFile key{4, 42, Rational(3, 2), 2, 5, LengthModel::uniform()};
  std::ostringstream out;
  write_key_file(out, key);
  std::istringstream in(out.str());
  KeyFile back = read_key_file(in);
  CHECK(back.key_i == 4);
  CHECK(back.seed == 42);
  CHECK(back.w == Rational(3, 2));
  CHECK(back.l == 2);
  CHECK(back.n == 5);
  CHECK(back.length_model.kind == LengthModel::Kind::uniform);
}

TEST_CASE("key files round trip the normal model") {
  KeyFile key{1, 2, Rational(1), 3, 9, LengthModel::normal(3.25, 1.5)};
  std::ostringstream out;
  write_key_file(out, key);
  std::istringstream in(out.str());
  KeyFile back = read_key_file(in);
  CHECK(back.length_model.kind == LengthModel::Kind::normal);
  CHECK(back.length_model.mean == 3.25);
  CHECK(back.length_model.variance == 1.5);
}

TEST_CASE("key file parsing is strict") {
  auto read = [](const char* text) {
    std::istringstream in(text);
    return read_key_file(in);
  };
  CHECK_THROWS_AS(read("key_i = 1\nseed = 0\nw = 1\nl = 2\nn = 5\n"), ValidationError);
  CHECK_THROWS_AS(read("key_i = 1\nkey_i = 2\nseed = 0\nw = 1\nl = 2\nn = 5\n"
                       "length_model = uniform\n"),
                  ValidationError);
  CHECK_THROWS_AS(read("key_i = 1\nseed = 0\nw = 1\nl = 2\nn = 5\nbogus = 3\n"
                       "length_model = uniform\n"),
                  ValidationError);
  CHECK_THROWS_AS(read("key_i = 1\nseed = 0\nw = 0\nl = 2\nn = 5\n"
                       "length_model = uniform\n"),
                  ValidationError);
  CHECK_THROWS_AS(read("key_i = 1\nseed = 0\nw = 1\nl = 2\nn = 5\n"
                       "length_model = triangular\n"),
                  ValidationError);
}

TEST_CASE("length model text forms") {
  CHECK(parse_length_model("uniform").kind == LengthModel::Kind::uniform);
  LengthModel m = parse_length_model(" normal( 4.5 , 2 ) ");
  CHECK(m.kind == LengthModel::Kind::normal);
  CHECK(m.mean == 4.5);
  CHECK(m.variance == 2.0);
  CHECK_THROWS_AS(parse_length_model("normal(4)"), ValidationError);
  CHECK_THROWS_AS(parse_length_model("normal(a, b)"), ValidationError);
  CHECK_THROWS_AS(parse_length_model("poisson(3)"), ValidationError);
}
