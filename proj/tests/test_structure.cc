#include <random>
#include <set>

#include "doctest.h"

#include "bmclass/catalog.hpp"
#include "bmclass/database.hpp"
#include "bmclass/errors.hpp"
#include "bmclass/structure.hpp"
#include "oracles.hpp"

using namespace bmclass;

namespace
{

std::multiset<std::size_t> orders(std::vector<Subgroup> const &v)
{
  std::multiset<std::size_t> out;
  for (auto const &s : v)
    out.insert(s.order());
  return out;
}

Database const &tier2()
{
  static Database db = load_database(BMCLASS_DATA_DIR "/nonnilpotent_191.db");
  return db;
}

} // namespace

TEST_CASE("normal_subgroups examples")
{
  CHECK(orders(normal_subgroups(make_named("S4"))) == std::multiset<std::size_t>{1, 4, 12, 24});
  CHECK(orders(normal_subgroups(make_named("A5"))) == std::multiset<std::size_t>{1, 60});
  CHECK(orders(normal_subgroups(make_named("C6"))) == std::multiset<std::size_t>{1, 2, 3, 6});
}

TEST_CASE("normal_subgroups agrees with union-of-classes brute force")
{
  for (char const *name : {"S4", "D6", "Q8", "C2xS3", "SL2(3)", "C3xS3", "Dic3", "D4xC2"}) {
    PermGroup G = make_named(name);
    std::set<std::vector<Elem>> lib;
    for (auto const &N : normal_subgroups(G)) {
      CHECK(is_normal(G, N));
      lib.insert(N.elements());
    }

    std::set<std::vector<Elem>> brute;
    for (auto const &H : oracle::all_subgroups(G)) {
      if (oracle::normal_in(G, H))
        brute.insert(oracle::members(H));
    }
    CHECK_MESSAGE(lib == brute, name);
  }
}

TEST_CASE("quotient examples")
{
  PermGroup S4 = make_named("S4");
  auto NS = normal_subgroups(S4);
  CHECK(quotient(S4, NS[2]).quotient.order() == 2);

  PermGroup Q8 = make_named("Q8");
  auto Q = quotient(Q8, center(Q8)).quotient;
  CHECK(Q.order() == 4);
  for (Elem e = 1; e < Q.order(); ++e)
    CHECK(Q.element_order(e) == 2);

  auto V = quotient(S4, NS[1]).quotient;
  CHECK(V.order() == 6);
  CHECK(are_isomorphic(V, make_named("S3")));

  PermGroup S3 = make_named("S3");
  Subgroup T = generate(S3, {S3.index_of(Perm::from_cycles(3, "(1,2)"))});
  CHECK_THROWS_AS(quotient(S3, T), NotNormal);
}

TEST_CASE("quotient projection is a homomorphism with the given kernel")
{
  std::mt19937 rng(7);
  for (char const *name : {"S4", "SL2(3)", "C2xA5", "D6xC3", "GL2(3)"}) {
    PermGroup G = make_named(name);
    for (auto const &N : normal_subgroups(G)) {
      auto QG = quotient(G, N);
      CHECK(QG.quotient.order() * N.order() == G.order());
      std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(G.order() - 1));
      for (int i = 0; i < 1000 / 8; ++i) {
        Elem a = pick(rng), b = pick(rng);
        CHECK(QG.projection[G.mul(a, b)] == QG.quotient.mul(QG.projection[a], QG.projection[b]));
      }
      for (Elem e = 0; e < G.order(); ++e)
        CHECK((QG.projection[e] == 0) == N.contains(e));
    }
  }
}

TEST_CASE("find_complement examples")
{
  PermGroup S3 = make_named("S3");
  auto H = find_complement(S3, derived_subgroup(S3));
  REQUIRE(H);
  CHECK(H->order() == 2);

  PermGroup Q8 = make_named("Q8");
  CHECK_FALSE(find_complement(Q8, center(Q8)));

  PermGroup C4 = make_named("C4");
  CHECK_FALSE(find_complement(C4, generate(C4, {C4.pow(1, 2)})));
}

TEST_CASE("find_complement matches brute force on database groups of order <= 48")
{
  for (auto const &rec : tier2().records()) {
    if (rec.id().order > 48u)
      continue;
    PermGroup const &G = rec.group();
    auto subs = oracle::all_subgroups(G);
    for (auto const &N : normal_subgroups(G)) {
      auto H = find_complement(G, N);
      bool brute = oracle::has_complement_brute(G, N.membership(), subs);
      CHECK_MESSAGE(H.has_value() == brute, rec.id().str());
      if (H) {
        CHECK(H->order() * N.order() == G.order());
        CHECK(intersection(*H, N).is_trivial());
      }
    }
  }
}

TEST_CASE("solvability predicates")
{
  PermGroup S4 = make_named("S4");
  CHECK_FALSE(is_nilpotent(S4));
  CHECK(is_solvable(S4));
  CHECK_FALSE(is_abelian(S4));
  CHECK(derived_series_orders(S4) == std::vector<std::size_t>{24, 12, 4, 1});

  CHECK_FALSE(is_solvable(make_named("A5")));

  PermGroup C8 = make_named("C8");
  CHECK(is_nilpotent(C8));
  CHECK(is_solvable(C8));
  CHECK(is_abelian(C8));

  CHECK_FALSE(is_supersolvable(make_named("A4")));
  CHECK(is_supersolvable(make_named("Q8")));
  CHECK(is_supersolvable(make_named("S3")));
  CHECK(is_supersolvable(PermGroup()));
  CHECK(is_nilpotent(PermGroup()));
  CHECK(is_solvable(PermGroup()));
}

TEST_CASE("is_supersolvable matches chain search on database groups of order <= 48")
{
  std::size_t checked = 0;
  for (auto const &rec : tier2().records()) {
    if (rec.id().order > 48u)
      continue;
    CHECK_MESSAGE(is_supersolvable(rec.group()) == oracle::supersolvable_by_chain(rec.group()),
                  rec.id().str());
    ++checked;
  }
  CHECK(checked > 50u);
}

TEST_CASE("direct_product_decomposition examples")
{
  auto d = direct_product_decomposition(make_named("C6"));
  REQUIRE(d.factors.size() == 2);
  CHECK(d.factors[0].order() == 2);
  CHECK(d.factors[1].order() == 3);

  auto e = direct_product_decomposition(make_named("S3xS3"));
  REQUIRE(e.factors.size() == 2);
  CHECK(e.factors[0].order() == 6);
  CHECK(e.factors[1].order() == 6);

  CHECK(direct_product_decomposition(make_named("S4")).factors.size() == 1);
  CHECK(direct_product_decomposition(PermGroup()).factors.empty());
}

TEST_CASE("direct_product_decomposition roundtrip")
{
  for (char const *name : {"C6", "S3xS3", "C2xC2xS3", "A5xS4", "C3xSL2(3)", "Q8xC3", "D4xC2"}) {
    PermGroup G = make_named(name);
    auto d = direct_product_decomposition(G);
    std::vector<PermGroup> parts;
    std::size_t prod = 1;
    for (auto const &f : d.factors) {
      CHECK(is_normal(G, f));
      CHECK(is_indecomposable(f.as_group()));
      parts.push_back(f.as_group());
      prod *= f.order();
    }
    CHECK(prod == G.order());
    for (std::size_t i = 0; i < d.factors.size(); ++i)
      for (std::size_t j = i + 1; j < d.factors.size(); ++j)
        CHECK(intersection(d.factors[i], d.factors[j]).is_trivial());
    CHECK_MESSAGE(are_isomorphic(direct_product(parts), G), name);
  }
}

TEST_CASE("automorphism_group examples")
{
  CHECK(automorphism_group(make_named("C4")).order() == 2);

  PermGroup S3 = make_named("S3");
  PermGroup A = automorphism_group(S3);
  CHECK(A.order() == 6);
  CHECK(inner_automorphisms(S3, A).is_whole());

  CHECK(automorphism_group(make_named("Q8")).order() == 24);
  CHECK(automorphism_group(make_named("C2xC2")).order() == 6);
  CHECK(automorphism_group(make_named("A5")).order() == 120);

  CHECK_THROWS_AS(automorphism_group(make_named("S6")), BudgetExceeded);
}

TEST_CASE("is_almost_complete examples")
{
  CHECK(is_almost_complete(make_named("A5")));
  CHECK(is_almost_complete(make_named("S4")));
  CHECK(is_almost_complete(make_named("A5xA5")));
  CHECK_FALSE(is_almost_complete(make_named("Q8")));
  CHECK_FALSE(is_almost_complete(make_named("C3")));
}

TEST_CASE("almost completeness passes to powers of indecomposable groups")
{
  for (char const *name : {"S3", "S4", "A5"}) {
    PermGroup H = make_named(name);
    REQUIRE(is_indecomposable(H));
    REQUIRE(is_almost_complete(H));
    CHECK_MESSAGE(is_almost_complete(direct_product({H, H}), 600), name);
  }
}
