#include <random>
#include <sstream>

#include "doctest.h"

#include "bmclass/database.hpp"
#include "bmclass/errors.hpp"

using namespace bmclass;

TEST_CASE("load_database examples")
{
  auto db = parse_database("# A5\n60|5|5|A5|(1,2,3,4,5);(1,2,3)\n");
  REQUIRE(db.records().size() == 1);
  CHECK(db.records()[0].group().order() == 60);
  CHECK(db.find({60, 5})->name() == "A5");

  auto empty = parse_database("");
  CHECK(empty.records().empty());
  CHECK(empty.coverage().empty());

  std::string c30 = "(";
  for (int i = 1; i <= 30; ++i)
    c30 += std::to_string(i) + (i < 30 ? "," : ")");
  CHECK_THROWS_AS(parse_database("60|1|30||" + c30 + "\n"), OrderMismatch);
  CHECK_NOTHROW(parse_database("60|1|30||" + c30 + "\n", {.trust = true}));
}

TEST_CASE("load_database errors")
{
  CHECK_THROWS_AS(parse_database("6|1|3|S3|(1,2);(1,2,3)\n6|1|3|S3|(1,2)(1,3)\n"), ParseError);
  CHECK_THROWS_AS(parse_database("6|1|3|S3|(1,2);(1,2,3)\n6|1|3|S3b|(1,2);(1,3)\n"), DuplicateId);
  CHECK_THROWS_AS(parse_database("6|1|3|S3\n"), ParseError);
  CHECK_THROWS_AS(parse_database("x|1|3|S3|(1,2)\n"), ParseError);
  CHECK_THROWS_AS(parse_database("!frobnicate order=3\n"), ParseError);

  try {
    parse_database("# c\n\n6|1|3|S3|(1,4)\n");
    FAIL("expected a parse error");
  } catch (ParseError const &e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("pragmas and flags")
{
  auto db = parse_database("!complete order=6\n!nilpotent order=6 count=1\n"
                           "6|1|3|S3|(1,2);(1,2,3)|solvable=1,nilpotent=0\n",
                           {.strict = true});
  CHECK(db.covers(6));
  CHECK(db.nilpotent_tally().at(6) == 1);
  CHECK(db.records()[0].flags().nilpotent == false);

  CHECK_THROWS_AS(parse_database("6|1|3|S3|(1,2);(1,2,3)|nilpotent=1\n", {.strict = true}),
                  DataError);
}

TEST_CASE("write then load preserves records exactly")
{
  for (char const *path : {BMCLASS_DATA_DIR "/nonsolvable_500.db", BMCLASS_DATA_DIR "/nonnilpotent_191.db"}) {
    Database db = load_database(path, {.trust = true});
    std::ostringstream out;
    write_database(out, db);
    Database again = parse_database(out.str(), {.trust = true});

    REQUIRE(again.records().size() == db.records().size());
    for (std::size_t i = 0; i < db.records().size(); ++i) {
      auto const &a = db.records()[i];
      auto const &b = again.records()[i];
      CHECK(a.id() == b.id());
      CHECK(a.name() == b.name());
      CHECK(a.degree() == b.degree());
      CHECK(a.generators() == b.generators());
    }
    CHECK(again.coverage() == db.coverage());
    CHECK(again.nilpotent_tally() == db.nilpotent_tally());
  }
}

TEST_CASE("single-character corruptions of generator cycles are caught")
{
  Database db = load_database(BMCLASS_DATA_DIR "/nonsolvable_500.db", {.trust = true});
  std::mt19937 rng(2024);
  std::string const alphabet = "0123456789(),;";
  std::size_t rejected = 0, flagged = 0, same_order = 0;

  for (int trial = 0; trial < 1000; ++trial) {
    auto const &rec = db.records()[rng() % db.records().size()];
    std::string line = rec.line();
    std::size_t gens_at = line.rfind('|') + 1;
    std::size_t pos = gens_at + rng() % (line.size() - gens_at);
    char c;
    do {
      c = alphabet[rng() % alphabet.size()];
    } while (c == line[pos]);
    line[pos] = c;

    std::size_t computed = 0;
    bool parsed = true;
    try {
      auto gens = parse_generators(rec.degree(), line.substr(gens_at));
      try {
        computed = close_generators(rec.degree(), gens, 65535).order();
      } catch (ElementCapExceeded const &) {
        computed = SIZE_MAX;
      }
    } catch (InvalidPermutation const &) {
      parsed = false;
    }

    try {
      parse_database(line + "\n");
      // accepted: only possible when the corruption kept the stated order
      CHECK(parsed);
      CHECK(computed == rec.id().order);
      ++same_order;
    } catch (OrderMismatch const &) {
      CHECK(parsed);
      CHECK(computed != rec.id().order);
      ++flagged;
    } catch (ParseError const &) {
      CHECK_FALSE(parsed);
      ++rejected;
    }
  }
  MESSAGE("rejected " << rejected << ", order mismatch " << flagged
                      << ", order-preserving " << same_order);
  CHECK(rejected + flagged + same_order == 1000);
}
