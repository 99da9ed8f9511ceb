#include <set>

#include "doctest.h"

#include "bmclass/errors.hpp"
#include "bmclass/perm_group.hpp"

using namespace bmclass;

namespace
{

PermGroup group(unsigned degree, char const *gens)
{
  return close_generators(degree, parse_generators(degree, gens));
}

// Commutator closure straight from the definition: all [g,h], then close.
std::size_t brute_derived_order(PermGroup const &G)
{
  std::vector<Elem> comms;
  for (Elem a = 0; a < G.order(); ++a)
    for (Elem b = 0; b < G.order(); ++b)
      comms.push_back(G.commutator(a, b));
  return generate(G, comms).order();
}

std::multiset<std::size_t> class_sizes(PermGroup const &G)
{
  std::multiset<std::size_t> out;
  for (auto const &c : conjugacy_classes(G))
    out.insert(c.size());
  return out;
}

} // namespace

TEST_CASE("perm: parsing and products")
{
  Perm p = Perm::from_cycles(5, "(1,2,3)(4,5)");
  CHECK(p[1] == 2);
  CHECK(p[3] == 1);
  CHECK(p[4] == 5);
  CHECK(p.order() == 6);
  CHECK(p.to_cycles() == "(1,2,3)(4,5)");
  CHECK((p * p.inverse()).is_identity());

  Perm a = Perm::from_cycles(3, "(1,2)");
  Perm b = Perm::from_cycles(3, "(2,3)");
  // apply a first, then b: 1 -> 2 -> 3
  CHECK((a * b)[1] == 3);

  CHECK(Perm::from_cycles(4, "()").is_identity());
  CHECK_THROWS_AS(Perm::from_cycles(3, "(1,4)"), InvalidPermutation);
  CHECK_THROWS_AS(Perm::from_cycles(3, "(1,2)(2,3)"), InvalidPermutation);
  CHECK_THROWS_AS(Perm::from_images({1, 1, 2}), InvalidPermutation);
}

TEST_CASE("close_generators examples")
{
  CHECK(group(5, "(1,2,3,4,5);(1,2,3)").order() == 60);
  CHECK(close_generators(1, {Perm(1)}).order() == 1);
  CHECK(group(5, "(1,2);(1,2,3,4,5)").order() == 120);

  PermGroup S7 = group(7, "(1,2);(1,2,3,4,5,6,7)");
  CHECK(S7.order() == 5040);
  CHECK_THROWS_AS(close_generators(7, S7.generators(), 1000), ElementCapExceeded);
}

TEST_CASE("elements are canonical and identity comes first")
{
  PermGroup G = group(4, "(1,2,3,4);(1,2)");
  CHECK(G.element(0).is_identity());
  for (Elem i = 1; i < G.order(); ++i)
    CHECK(G.element(i - 1) < G.element(i));

  for (Elem a = 0; a < G.order(); ++a) {
    CHECK(G.mul(a, G.inv(a)) == 0);
    for (Elem b = 0; b < G.order(); ++b)
      CHECK(G.element(G.mul(a, b)) == G.element(a) * G.element(b));
  }
}

TEST_CASE("closure idempotence")
{
  PermGroup G = group(5, "(1,2,3);(3,4,5)");
  PermGroup H = close_generators(5, G.elements());
  CHECK(H.elements() == G.elements());
}

TEST_CASE("derived_subgroup examples")
{
  PermGroup Q8 = group(8, "(1,2,4,7)(3,6,8,5);(1,3,4,8)(2,5,7,6)");
  REQUIRE(Q8.order() == 8);
  CHECK(derived_subgroup(Q8).order() == 2);
  CHECK(brute_derived_order(Q8) == 2);
  CHECK(derived_subgroup(Q8) == center(Q8));

  PermGroup C6 = group(6, "(1,2,3,4,5,6)");
  CHECK(derived_subgroup(C6).is_trivial());

  PermGroup S4 = group(4, "(1,2,3,4);(1,2)");
  Subgroup D = derived_subgroup(S4);
  CHECK(D.order() == 12);
  CHECK(brute_derived_order(S4) == 12);
  Subgroup A4 = generate(S4, {S4.index_of(Perm::from_cycles(4, "(1,2,3)")),
                              S4.index_of(Perm::from_cycles(4, "(2,3,4)"))});
  CHECK(D == A4);
}

TEST_CASE("center examples")
{
  PermGroup Q8 = group(8, "(1,2,4,7)(3,6,8,5);(1,3,4,8)(2,5,7,6)");
  CHECK(center(Q8).order() == 2);
  CHECK(center(group(3, "(1,2);(1,2,3)")).is_trivial());
  CHECK(center(group(4, "(1,2,3,4)")).is_whole());
}

TEST_CASE("conjugacy_classes examples")
{
  CHECK(class_sizes(group(3, "(1,2);(1,2,3)")) == std::multiset<std::size_t>{1, 2, 3});
  CHECK(class_sizes(group(5, "(1,2,3,4,5)")) == std::multiset<std::size_t>{1, 1, 1, 1, 1});
  CHECK(class_sizes(group(5, "(1,2,3,4,5);(1,2,3)")) ==
        std::multiset<std::size_t>{1, 12, 12, 15, 20});
}

TEST_CASE("element_order_histogram examples")
{
  using H = std::map<unsigned, std::size_t>;
  CHECK(element_order_histogram(group(2, "(1,2)")) == H{{1, 1}, {2, 1}});
  CHECK(element_order_histogram(group(8, "(1,2,4,7)(3,6,8,5);(1,3,4,8)(2,5,7,6)")) ==
        H{{1, 1}, {2, 1}, {4, 6}});
  CHECK(element_order_histogram(group(3, "(1,2);(1,2,3)")) == H{{1, 1}, {2, 3}, {3, 2}});
}

TEST_CASE("perm-core properties on a sample of groups")
{
  std::vector<PermGroup> sample{
    group(4, "(1,2,3,4);(1,2)"),
    group(5, "(1,2,3,4,5);(1,2,3)"),
    group(8, "(1,2,4,7)(3,6,8,5);(1,3,4,8)(2,5,7,6)"),
    group(6, "(1,2,3);(1,2);(4,5,6);(4,5)"),
    group(7, "(1,2,3,4,5,6,7);(2,3,5)(4,7,6)"),
  };

  for (auto const &G : sample) {
    // Lagrange and class sizes
    for (auto const &c : conjugacy_classes(G))
      CHECK(G.order() % c.size() == 0u);
    CHECK(conjugacy_classes(G)[0] == std::vector<Elem>{0});

    // center inside every generator centralizer
    Subgroup Z = center(G);
    for (Elem g : G.generator_indices()) {
      Subgroup C = centralizer(G, {g});
      for (Elem z : Z.elements())
        CHECK(C.contains(z));
    }

    // derived subgroup normal, with abelian quotient: every commutator lies in it
    Subgroup D = derived_subgroup(G);
    CHECK(is_normal(G, D));
    for (Elem a = 0; a < G.order(); a += 3)
      for (Elem b = 0; b < G.order(); b += 5)
        CHECK(D.contains(G.commutator(a, b)));

    std::size_t total = 0;
    for (auto const &[o, c] : element_order_histogram(G))
      total += c;
    CHECK(total == G.order());

    // small generating set really generates
    CHECK(generate(G, small_generating_set(G)).is_whole());
  }
}

TEST_CASE("regular representation and direct product")
{
  PermGroup S3 = group(3, "(1,2);(1,2,3)");
  PermGroup R = regular_representation(S3);
  CHECK(R.degree() == 6);
  CHECK(R.order() == 6);
  PermGroup P = direct_product({S3, S3});
  CHECK(P.degree() == 6);
  CHECK(P.order() == 36);
}
