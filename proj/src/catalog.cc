#include <algorithm>
#include <functional>
#include <mutex>

#include "bmclass/catalog.hpp"
#include "bmclass/errors.hpp"
#include "bmclass/structure.hpp"

namespace bmclass
{

std::vector<std::size_t> abelian_invariants(PermGroup const &A)
{
  std::size_t n = A.order();
  std::vector<std::size_t> out;

  for (std::size_t p = 2; p <= n; ++p) {
    if (n % p != 0u)
      continue;
    bool prime = true;
    for (std::size_t d = 2; d * d <= p; ++d) {
      if (p % d == 0u)
        prime = false;
    }
    if (!prime)
      continue;

    // c[k] = log_p #{x : x^(p^k) = 1}; factors of exponent >= k number c[k] - c[k-1]
    std::size_t pn = 1;
    while (n % (pn * p) == 0u)
      pn *= p;

    std::vector<std::size_t> c{0};
    for (std::size_t pk = p; pk <= pn; pk *= p) {
      std::size_t count = 0;
      for (Elem e = 0; e < n; ++e) {
        if (pk % A.element_order(e) == 0u)
          ++count;
      }
      std::size_t lg = 0;
      for (std::size_t v = count; v > 1u; v /= p)
        ++lg;
      c.push_back(lg);
    }

    std::size_t pk = 1;
    for (std::size_t k = 1; k < c.size(); ++k) {
      pk *= p;
      std::size_t at_least_k = c[k] - c[k - 1];
      std::size_t at_least_next = k + 1 < c.size() ? c[k + 1] - c[k] : 0;
      for (std::size_t i = at_least_next; i < at_least_k; ++i)
        out.push_back(pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Fingerprint fingerprint(PermGroup const &G)
{
  Fingerprint f;
  f.order = G.order();
  f.order_histogram = element_order_histogram(G);
  for (auto const &cls : G.classes()) {
    f.class_sizes.push_back(cls.size());
    f.class_types.emplace_back(G.element_order(cls[0]), cls.size());
  }
  std::sort(f.class_sizes.begin(), f.class_sizes.end());
  std::sort(f.class_types.begin(), f.class_types.end());
  f.derived_series = derived_series_orders(G);
  f.center_order = center(G).order();
  f.abelian_invariants = abelian_invariants(quotient(G, derived_subgroup(G)).quotient);
  return f;
}

std::optional<std::vector<Elem>> find_isomorphism(PermGroup const &G, PermGroup const &H,
                                                  std::size_t node_cap)
{
  std::size_t n = G.order();
  if (H.order() != n)
    return std::nullopt;
  if (element_order_histogram(G) != element_order_histogram(H))
    return std::nullopt;
  if (fingerprint(G) != fingerprint(H))
    return std::nullopt;

  std::vector<Elem> gens = small_generating_set(G);
  std::size_t k = gens.size();
  if (k == 0)
    return std::vector<Elem>{0};

  std::vector<std::size_t> target(k);
  for (std::size_t j = 0; j < k; ++j)
    target[j] = generate(G, std::vector<Elem>(gens.begin(), gens.begin() + j + 1)).order();

  auto class_size = [](PermGroup const &X, Elem e) { return X.classes()[X.class_of(e)].size(); };

  std::vector<std::vector<Elem>> cands(k);
  for (std::size_t j = 0; j < k; ++j) {
    unsigned o = G.element_order(gens[j]);
    std::size_t cs = class_size(G, gens[j]);
    for (Elem y = 0; y < n; ++y) {
      if (H.element_order(y) != o || class_size(H, y) != cs)
        continue;
      // the first image only matters up to conjugation in H
      if (j == 0 && H.classes()[H.class_of(y)][0] != y)
        continue;
      cands[j].push_back(y);
    }
  }

  std::vector<Elem> images, map;
  std::vector<std::size_t> stamp(n, 0);
  std::size_t epoch = 0, nodes = 0;
  std::optional<std::vector<Elem>> found;

  std::function<void(std::size_t)> search = [&](std::size_t j) {
    for (Elem c : cands[j]) {
      if (++nodes > node_cap)
        throw BudgetExceeded("isomorphism search exceeded node cap");
      images.push_back(c);
      std::vector<Elem> prefix(gens.begin(), gens.begin() + j + 1);
      if (extend_homomorphism(G, H, prefix, images, map)) {
        ++epoch;
        std::size_t distinct = 0;
        for (Elem x = 0; x < n; ++x) {
          if (map[x] != unmapped && stamp[map[x]] != epoch) {
            stamp[map[x]] = epoch;
            ++distinct;
          }
        }
        if (distinct == target[j]) {
          if (j + 1 == k) {
            if (target[j] == n)
              found = map;
          } else {
            search(j + 1);
          }
        }
      }
      images.pop_back();
      if (found)
        return;
    }
  };
  search(0);
  return found;
}

bool are_isomorphic(PermGroup const &G, PermGroup const &H)
{
  return find_isomorphism(G, H).has_value();
}

std::optional<GroupId> identify(PermGroup const &G, Database const &db)
{
  auto order = static_cast<unsigned>(G.order());
  auto recs = db.of_order(order);
  if (recs.empty() && !db.covers(order))
    throw OrderNotInDatabase(order);

  Fingerprint fg = fingerprint(G);
  for (auto const *rec : recs) {
    PermGroup const &R = rec->group();
    if (fingerprint(R) != fg)
      continue;
    if (are_isomorphic(G, R))
      return rec->id();
  }
  return std::nullopt;
}

PermGroup const &named_group(std::string const &name)
{
  static std::mutex mutex;
  static std::map<std::string, PermGroup> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(name);
  if (it == cache.end())
    it = cache.emplace(name, make_named(name)).first;
  return it->second;
}

namespace
{

std::size_t factorial(unsigned n)
{
  std::size_t f = 1;
  for (unsigned i = 2; i <= n; ++i)
    f *= i;
  return f;
}

} // namespace

std::optional<unsigned> symmetric_degree(PermGroup const &G)
{
  for (unsigned n = 1; n <= 7; ++n) {
    if (factorial(n) != G.order())
      continue;
    if (n <= 2u || are_isomorphic(G, named_group("S" + std::to_string(n))))
      return n;
  }
  return std::nullopt;
}

std::optional<PowerProductShape> recognize_symmetric_or_A5_power_product(PermGroup const &N)
{
  PowerProductShape shape;
  std::map<unsigned, unsigned> sym;
  for (auto const &f : direct_product_decomposition(N).factors) {
    PermGroup F = f.as_group();
    if (F.order() == 60u && are_isomorphic(F, named_group("A5"))) {
      ++shape.t0;
      continue;
    }
    auto n = symmetric_degree(F);
    if (!n || *n == 2u || *n == 6u)
      return std::nullopt;
    ++sym[*n];
  }
  for (auto const &[n, t] : sym)
    shape.symmetric.emplace_back(n, t);
  return shape;
}

} // namespace bmclass
