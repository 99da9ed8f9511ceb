#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "bmclass/catalog.hpp"
#include "bmclass/errors.hpp"
#include "bmclass/structure.hpp"

namespace bmclass
{

namespace
{

// Closure of `gens`, abandoned as soon as it grows past `limit` elements.
std::optional<Subgroup> bounded_generate(PermGroup const &G, std::vector<Elem> const &gens,
                                         std::size_t limit)
{
  std::vector<bool> seen(G.order(), false);
  std::vector<Elem> elems{PermGroup::identity()};
  seen[0] = true;
  for (std::size_t k = 0; k < elems.size(); ++k) {
    for (Elem g : gens) {
      Elem y = G.mul(elems[k], g);
      if (!seen[y]) {
        if (elems.size() == limit)
          return std::nullopt;
        seen[y] = true;
        elems.push_back(y);
      }
    }
  }
  return Subgroup(G, std::move(elems));
}

// AB for normal subgroups A and B, as a union of cosets Ab.
Subgroup normal_product(PermGroup const &G, Subgroup const &A, Subgroup const &B)
{
  std::vector<bool> in(G.order(), false);
  std::vector<Elem> out;
  for (Elem b : B.elements()) {
    if (in[b])
      continue;
    for (Elem a : A.elements()) {
      Elem y = G.mul(a, b);
      if (!in[y]) {
        in[y] = true;
        out.push_back(y);
      }
    }
  }
  return Subgroup(G, std::move(out));
}

bool is_prime(std::size_t n)
{
  if (n < 2u)
    return false;
  for (std::size_t d = 2; d * d <= n; ++d) {
    if (n % d == 0u)
      return false;
  }
  return true;
}

std::vector<std::size_t> prime_divisors(std::size_t n)
{
  std::vector<std::size_t> out;
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p == 0u) {
      out.push_back(p);
      while (n % p == 0u)
        n /= p;
    }
  }
  if (n > 1u)
    out.push_back(n);
  return out;
}

bool trivially_meets(Subgroup const &A, Subgroup const &B)
{
  for (Elem a : A.elements()) {
    if (a != PermGroup::identity() && B.contains(a))
      return false;
  }
  return true;
}

} // namespace

Subgroup QuotientGroup::preimage(Subgroup const &Q) const
{
  std::vector<Elem> out;
  for (Elem e = 0; e < source.order(); ++e) {
    if (Q.contains(projection[e]))
      out.push_back(e);
  }
  return Subgroup(source, std::move(out));
}

Subgroup QuotientGroup::image(Subgroup const &H) const
{
  std::vector<Elem> out;
  for (Elem e : H.elements())
    out.push_back(projection[e]);
  return Subgroup(quotient, std::move(out));
}

QuotientGroup quotient(PermGroup const &G, Subgroup const &N)
{
  if (!is_normal(G, N))
    throw NotNormal("subgroup is not normal");

  std::size_t n = G.order();
  std::vector<std::uint32_t> coset_of(n, UINT32_MAX);
  std::vector<Elem> reps;
  for (Elem g = 0; g < n; ++g) {
    if (coset_of[g] != UINT32_MAX)
      continue;
    auto id = static_cast<std::uint32_t>(reps.size());
    reps.push_back(g);
    for (Elem k : N.elements())
      coset_of[G.mul(k, g)] = id;
  }

  auto m = static_cast<unsigned>(reps.size());
  std::vector<Perm> gens;
  for (Elem gi : G.generator_indices()) {
    std::vector<unsigned> img(m);
    for (unsigned c = 0; c < m; ++c)
      img[c] = coset_of[G.mul(reps[c], gi)] + 1u;
    gens.push_back(Perm::from_images(img));
  }

  QuotientGroup out{G, N, close_generators(m, std::move(gens), std::max<std::size_t>(m, PermGroup::default_cap)), {}, {}};

  PermGroup const &Q = out.quotient;
  out.projection.assign(n, 0);
  for (Elem e : G.bfs_order()) {
    if (e == PermGroup::identity())
      continue;
    out.projection[e] = Q.mul(out.projection[G.tree_parent(e)],
                              Q.generator_indices()[G.tree_gen(e)]);
  }

  out.lift.assign(Q.order(), unmapped);
  for (Elem e = 0; e < n; ++e) {
    if (out.lift[out.projection[e]] == unmapped)
      out.lift[out.projection[e]] = e;
  }
  return out;
}

ExtensionShape extension_shape(PermGroup const &G, Subgroup const &N)
{
  ExtensionShape s{G, N, quotient(G, N), false, find_complement(G, N)};
  s.split = s.complement.has_value();
  return s;
}

std::vector<Subgroup> normal_subgroups(PermGroup const &G)
{
  std::set<std::vector<Elem>> seen;
  std::vector<Subgroup> closures;
  std::vector<Elem> closure_gen;

  auto const &classes = G.classes();
  for (std::size_t c = 1; c < classes.size(); ++c) {
    Subgroup N = normal_closure(G, {classes[c][0]});
    if (seen.insert(N.elements()).second) {
      closures.push_back(N);
      closure_gen.push_back(classes[c][0]);
    }
  }

  std::vector<Subgroup> all{trivial_subgroup(G)};
  seen.insert(all[0].elements());
  for (auto const &N : closures)
    all.push_back(N);

  for (std::size_t k = 1; k < all.size(); ++k) {
    for (std::size_t b = 0; b < closures.size(); ++b) {
      if (all[k].contains(closure_gen[b]))
        continue;
      Subgroup P = normal_product(G, all[k], closures[b]);
      if (seen.insert(P.elements()).second)
        all.push_back(std::move(P));
    }
  }

  std::sort(all.begin(), all.end());
  return all;
}

std::vector<Subgroup> prime_order_normal_subgroups(PermGroup const &G)
{
  std::vector<Subgroup> out;
  for (auto const &cls : G.classes()) {
    unsigned p = G.element_order(cls[0]);
    if (!is_prime(p) || cls.size() >= p)
      continue;
    Subgroup C = normal_closure(G, {cls[0]});
    if (C.order() != p)
      continue;
    if (std::find(out.begin(), out.end(), C) == out.end())
      out.push_back(std::move(C));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Subgroup> find_complement(PermGroup const &G, Subgroup const &N)
{
  if (N.is_trivial())
    return whole_group(G);
  if (N.is_whole())
    return trivial_subgroup(G);

  QuotientGroup QG = quotient(G, N);
  PermGroup const &Q = QG.quotient;
  std::vector<Elem> qgens = small_generating_set(Q);
  std::size_t k = qgens.size();

  std::vector<std::size_t> target(k);
  for (std::size_t j = 0; j < k; ++j)
    target[j] = generate(Q, std::vector<Elem>(qgens.begin(), qgens.begin() + j + 1)).order();

  std::vector<std::vector<Elem>> cands(k);
  for (Elem g = 0; g < G.order(); ++g) {
    for (std::size_t j = 0; j < k; ++j) {
      if (QG.projection[g] == qgens[j] && G.element_order(g) == Q.element_order(qgens[j]))
        cands[j].push_back(g);
    }
  }

  // complements are permuted by conjugation with N, which fixes every coset,
  // so the first lift only matters up to N-conjugacy
  {
    std::vector<bool> done(G.order(), false);
    std::vector<Elem> reps;
    auto ngens = N.generators();
    for (Elem c : cands[0]) {
      if (done[c])
        continue;
      reps.push_back(c);
      std::vector<Elem> orbit{c};
      done[c] = true;
      for (std::size_t i = 0; i < orbit.size(); ++i) {
        for (Elem n : ngens) {
          Elem y = G.conj(orbit[i], n);
          if (!done[y]) {
            done[y] = true;
            orbit.push_back(y);
          }
        }
      }
    }
    cands[0] = std::move(reps);
  }

  std::vector<Elem> chosen;
  std::optional<Subgroup> found;
  std::function<void(std::size_t)> search = [&](std::size_t j) {
    if (found)
      return;
    if (j == k) {
      found = generate(G, chosen);
      return;
    }
    for (Elem c : cands[j]) {
      chosen.push_back(c);
      auto K = bounded_generate(G, chosen, target[j]);
      if (K && K->order() == target[j])
        search(j + 1);
      chosen.pop_back();
      if (found)
        return;
    }
  };
  search(0);
  return found;
}

bool is_abelian(PermGroup const &G)
{
  return G.is_abelian();
}

bool is_cyclic(PermGroup const &G)
{
  if (!G.is_abelian())
    return false;
  for (Elem e = 0; e < G.order(); ++e) {
    if (G.element_order(e) == G.order())
      return true;
  }
  return G.order() == 1u;
}

bool is_nilpotent(PermGroup const &G)
{
  std::size_t n = G.order();
  for (std::size_t p : prime_divisors(n)) {
    std::size_t pn = 1;
    while (n % (pn * p) == 0u)
      pn *= p;

    std::size_t count = 0;
    for (Elem e = 0; e < n; ++e) {
      if (pn % G.element_order(e) == 0u)
        ++count;
    }
    if (count != pn)
      return false;
  }
  return true;
}

bool is_solvable(PermGroup const &G)
{
  PermGroup cur = G;
  for (;;) {
    if (cur.order() == 1u || cur.is_abelian())
      return true;
    Subgroup D = derived_subgroup(cur);
    if (D.order() == cur.order())
      return false;
    cur = D.as_group();
  }
}

bool is_supersolvable(PermGroup const &G)
{
  PermGroup cur = G;
  for (;;) {
    if (cur.order() == 1u || cur.is_abelian())
      return true;
    auto C = prime_order_normal_subgroups(cur);
    if (C.empty())
      return false;
    cur = quotient(cur, C.front()).quotient;
  }
}

ProductDecomposition direct_product_decomposition(PermGroup const &G)
{
  if (G.order() == 1u)
    return {};

  auto NS = normal_subgroups(G);
  std::size_t n = G.order();
  for (auto const &A : NS) {
    if (A.is_trivial() || A.is_whole())
      continue;
    if (A.order() * A.order() > n)
      break;
    std::size_t want = n / A.order();
    for (auto const &B : NS) {
      if (B.order() != want || !trivially_meets(A, B))
        continue;

      ProductDecomposition out;
      for (auto const *part : {&A, &B}) {
        PermGroup P = part->as_group();
        auto emb = embedding(P, G);
        for (auto const &f : direct_product_decomposition(P).factors) {
          std::vector<Elem> els;
          for (Elem e : f.elements())
            els.push_back(emb[e]);
          out.factors.emplace_back(G, std::move(els));
        }
      }
      std::sort(out.factors.begin(), out.factors.end());
      return out;
    }
  }
  return {{whole_group(G)}};
}

bool is_indecomposable(PermGroup const &G)
{
  return direct_product_decomposition(G).factors.size() == 1u;
}

std::vector<std::vector<Elem>> automorphisms(PermGroup const &G, std::size_t budget)
{
  std::size_t n = G.order();
  if (n > budget)
    throw BudgetExceeded("automorphism search refused for order " + std::to_string(n) +
                         " (budget " + std::to_string(budget) + ")");

  std::vector<Elem> gens = small_generating_set(G);
  std::size_t k = gens.size();
  if (k == 0)
    return {std::vector<Elem>{0}};

  std::vector<std::size_t> target(k);
  for (std::size_t j = 0; j < k; ++j)
    target[j] = generate(G, std::vector<Elem>(gens.begin(), gens.begin() + j + 1)).order();

  std::vector<std::vector<Elem>> cands(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t cs = G.classes()[G.class_of(gens[j])].size();
    for (Elem y = 0; y < n; ++y) {
      if (G.element_order(y) == G.element_order(gens[j]) &&
          G.classes()[G.class_of(y)].size() == cs)
        cands[j].push_back(y);
    }
  }

  std::vector<std::vector<Elem>> out;
  std::vector<Elem> images, map;
  std::vector<std::size_t> stamp(n, 0);
  std::size_t epoch = 0;

  std::function<void(std::size_t)> search = [&](std::size_t j) {
    for (Elem c : cands[j]) {
      images.push_back(c);
      std::vector<Elem> prefix(gens.begin(), gens.begin() + j + 1);
      if (extend_homomorphism(G, G, prefix, images, map)) {
        ++epoch;
        std::size_t distinct = 0;
        for (Elem x = 0; x < n; ++x) {
          if (map[x] != unmapped && stamp[map[x]] != epoch) {
            stamp[map[x]] = epoch;
            ++distinct;
          }
        }
        if (distinct == target[j]) {
          if (j + 1 == k)
            out.push_back(map);
          else
            search(j + 1);
        }
      }
      images.pop_back();
    }
  };
  search(0);
  return out;
}

PermGroup automorphism_group(PermGroup const &G, std::size_t budget)
{
  auto maps = automorphisms(G, budget);
  auto n = static_cast<unsigned>(G.order());
  std::size_t cap = std::max(maps.size(), PermGroup::default_cap);

  std::vector<Perm> gens;
  PermGroup A = close_generators(n, {}, cap);
  for (auto const &m : maps) {
    std::vector<unsigned> img(n);
    for (unsigned x = 0; x < n; ++x)
      img[x] = m[x] + 1u;
    Perm p = Perm::from_images(img);
    if (A.find(p))
      continue;
    gens.push_back(std::move(p));
    A = close_generators(n, gens, cap);
  }
  if (A.order() != maps.size())
    throw std::logic_error("automorphism maps do not form a group");
  return A;
}

Subgroup inner_automorphisms(PermGroup const &G, PermGroup const &aut)
{
  auto n = static_cast<unsigned>(G.order());
  std::vector<Elem> inn;
  for (Elem g : G.generator_indices()) {
    std::vector<unsigned> img(n);
    for (Elem x = 0; x < n; ++x)
      img[x] = G.conj(x, g) + 1u;
    inn.push_back(aut.index_of(Perm::from_images(img)));
  }
  return generate(aut, inn);
}

bool is_almost_complete(PermGroup const &G, std::size_t budget)
{
  if (!center(G).is_trivial())
    return false;
  if (G.order() == 1u)
    return true;

  if (G.order() <= budget) {
    PermGroup A = automorphism_group(G, budget);
    return find_complement(A, inner_automorphisms(G, A)).has_value();
  }

  // G = H^t with H indecomposable and center-free: Aut(G) is the wreath
  // product Aut(H) wr S_t, and a section for G exists iff one exists for H.
  auto D = direct_product_decomposition(G);
  if (D.factors.size() >= 2u) {
    PermGroup H = D.factors.front().as_group();
    bool power = std::all_of(D.factors.begin() + 1, D.factors.end(), [&](Subgroup const &f) {
      return are_isomorphic(H, f.as_group());
    });
    if (power)
      return is_almost_complete(H, budget);
  }
  throw BudgetExceeded("automorphism group of order-" + std::to_string(G.order()) +
                       " group is out of budget");
}

} // namespace bmclass
