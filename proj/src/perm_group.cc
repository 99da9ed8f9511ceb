#include <algorithm>
#include <deque>
#include <mutex>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "bmclass/errors.hpp"
#include "bmclass/perm_group.hpp"

namespace bmclass
{

namespace detail
{

// Beyond this order products go through perm composition and a hash lookup
// instead of a full table.
constexpr std::size_t mul_table_limit = 5040;

struct GroupData
{
  unsigned degree = 1;
  std::vector<Perm> gens;
  std::vector<Elem> gen_idx;
  std::vector<Perm> elements;
  std::unordered_map<Perm, Elem, PermHash> index;

  std::vector<std::uint16_t> rgen; // rgen[g * n + e] = e * gen_g
  std::vector<Elem> bfs;
  std::vector<Elem> parent;
  std::vector<std::uint32_t> pgen;

  mutable std::once_flag mul_once;
  mutable std::vector<std::uint16_t> mul;

  mutable std::once_flag inv_once;
  mutable std::vector<std::uint16_t> inv;

  mutable std::once_flag ord_once;
  mutable std::vector<std::uint16_t> ord;

  mutable std::once_flag class_once;
  mutable std::vector<std::vector<Elem>> classes;
  mutable std::vector<std::uint32_t> class_of;

  std::size_t n() const { return elements.size(); }

  void build_mul() const
  {
    std::size_t N = n();
    if (N > mul_table_limit)
      return;
    mul.assign(N * N, 0);
    for (std::size_t i = 0; i < N; ++i) {
      std::uint16_t *row = &mul[i * N];
      row[0] = static_cast<std::uint16_t>(i);
      for (std::size_t k = 1; k < bfs.size(); ++k) {
        Elem j = bfs[k];
        row[j] = rgen[pgen[j] * N + row[parent[j]]];
      }
    }
  }

  Elem product(Elem a, Elem b) const
  {
    std::size_t N = n();
    if (N <= mul_table_limit) {
      std::call_once(mul_once, [this] { build_mul(); });
      return mul[a * N + b];
    }
    return index.at(elements[a] * elements[b]);
  }

  void build_inv() const
  {
    inv.resize(n());
    for (std::size_t i = 0; i < n(); ++i)
      inv[i] = static_cast<std::uint16_t>(index.at(elements[i].inverse()));
  }

  Elem inverse(Elem a) const
  {
    std::call_once(inv_once, [this] { build_inv(); });
    return inv[a];
  }

  Elem conj(Elem x, Elem g) const
  {
    return product(product(inverse(g), x), g);
  }

  void build_classes() const
  {
    std::size_t N = n();
    class_of.assign(N, UINT32_MAX);
    for (Elem x = 0; x < N; ++x) {
      if (class_of[x] != UINT32_MAX)
        continue;
      auto id = static_cast<std::uint32_t>(classes.size());
      std::vector<Elem> cls{x};
      class_of[x] = id;
      for (std::size_t k = 0; k < cls.size(); ++k) {
        for (Elem g : gen_idx) {
          Elem y = conj(cls[k], g);
          if (class_of[y] == UINT32_MAX) {
            class_of[y] = id;
            cls.push_back(y);
          }
        }
      }
      std::sort(cls.begin(), cls.end());
      classes.push_back(std::move(cls));
    }
  }
};

} // namespace detail

PermGroup::PermGroup()
: PermGroup(close_generators(1u, {}))
{}

PermGroup close_generators(unsigned degree, std::vector<Perm> gens, std::size_t cap)
{
  if (degree == 0u)
    degree = 1u;
  cap = std::min<std::size_t>(cap, 65535u);

  for (auto const &g : gens) {
    if (g.degree() != degree)
      throw InvalidPermutation("generator degree does not match group degree");
  }
  if (gens.empty())
    gens.push_back(Perm(degree));

  auto d = std::make_shared<detail::GroupData>();
  d->degree = degree;
  d->gens = gens;

  // breadth-first closure under right multiplication
  std::vector<Perm> found{Perm(degree)};
  std::unordered_map<Perm, Elem, PermHash> where{{found[0], 0}};
  std::vector<Elem> parent{0};
  std::vector<std::uint32_t> pgen{0};
  std::vector<std::vector<Elem>> step(gens.size());

  for (std::size_t k = 0; k < found.size(); ++k) {
    for (std::size_t g = 0; g < gens.size(); ++g) {
      Perm p = found[k] * gens[g];
      auto it = where.find(p);
      Elem idx;
      if (it == where.end()) {
        if (found.size() >= cap)
          throw ElementCapExceeded(cap);
        idx = static_cast<Elem>(found.size());
        where.emplace(p, idx);
        found.push_back(std::move(p));
        parent.push_back(static_cast<Elem>(k));
        pgen.push_back(static_cast<std::uint32_t>(g));
      } else {
        idx = it->second;
      }
      step[g].push_back(idx);
    }
  }

  std::size_t n = found.size();
  std::vector<Elem> perm(n);
  for (Elem i = 0; i < n; ++i)
    perm[i] = i;
  std::sort(perm.begin(), perm.end(),
            [&](Elem a, Elem b) { return found[a] < found[b]; });

  std::vector<Elem> rank(n);
  for (Elem i = 0; i < n; ++i)
    rank[perm[i]] = i;

  d->elements.reserve(n);
  for (Elem i = 0; i < n; ++i)
    d->elements.push_back(found[perm[i]]);
  for (Elem i = 0; i < n; ++i)
    d->index.emplace(d->elements[i], i);

  d->rgen.assign(gens.size() * n, 0);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    for (Elem old = 0; old < n; ++old)
      d->rgen[g * n + rank[old]] = static_cast<std::uint16_t>(rank[step[g][old]]);
  }

  d->bfs.resize(n);
  d->parent.resize(n);
  d->pgen.resize(n);
  for (Elem old = 0; old < n; ++old) {
    d->bfs[old] = rank[old];
    d->parent[rank[old]] = rank[parent[old]];
    d->pgen[rank[old]] = pgen[old];
  }

  for (auto const &g : gens)
    d->gen_idx.push_back(d->index.at(g));

  return PermGroup(std::move(d));
}

unsigned PermGroup::degree() const { return _d->degree; }
std::size_t PermGroup::order() const { return _d->n(); }
std::vector<Perm> const &PermGroup::generators() const { return _d->gens; }
std::vector<Elem> const &PermGroup::generator_indices() const { return _d->gen_idx; }
std::vector<Perm> const &PermGroup::elements() const { return _d->elements; }
Perm const &PermGroup::element(Elem e) const { return _d->elements[e]; }

std::optional<Elem> PermGroup::find(Perm const &p) const
{
  auto it = _d->index.find(p);
  if (it == _d->index.end())
    return std::nullopt;
  return it->second;
}

Elem PermGroup::index_of(Perm const &p) const
{
  auto it = _d->index.find(p);
  if (it == _d->index.end())
    throw InvalidPermutation("permutation is not an element of the group");
  return it->second;
}

Elem PermGroup::mul(Elem a, Elem b) const { return _d->product(a, b); }
Elem PermGroup::inv(Elem a) const { return _d->inverse(a); }
Elem PermGroup::conj(Elem x, Elem g) const { return _d->conj(x, g); }

Elem PermGroup::pow(Elem x, long long k) const
{
  if (k < 0) {
    x = inv(x);
    k = -k;
  }
  Elem r = identity();
  while (k > 0) {
    if (k & 1)
      r = mul(r, x);
    x = mul(x, x);
    k >>= 1;
  }
  return r;
}

Elem PermGroup::commutator(Elem a, Elem b) const
{
  return mul(mul(inv(a), inv(b)), mul(a, b));
}

unsigned PermGroup::element_order(Elem e) const
{
  auto const &d = *_d;
  std::call_once(d.ord_once, [&d] {
    d.ord.resize(d.n());
    for (std::size_t i = 0; i < d.n(); ++i)
      d.ord[i] = static_cast<std::uint16_t>(d.elements[i].order());
  });
  return d.ord[e];
}

Elem PermGroup::right_mul_gen(Elem e, std::size_t gen) const
{
  return _d->rgen[gen * _d->n() + e];
}

std::vector<Elem> const &PermGroup::bfs_order() const { return _d->bfs; }
Elem PermGroup::tree_parent(Elem e) const { return _d->parent[e]; }
std::size_t PermGroup::tree_gen(Elem e) const { return _d->pgen[e]; }

std::vector<std::vector<Elem>> const &PermGroup::classes() const
{
  auto const &d = *_d;
  std::call_once(d.class_once, [&d] { d.build_classes(); });
  return d.classes;
}

std::size_t PermGroup::class_of(Elem e) const
{
  classes();
  return _d->class_of[e];
}

bool PermGroup::is_abelian() const
{
  auto const &g = generator_indices();
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (mul(g[i], g[j]) != mul(g[j], g[i]))
        return false;
    }
  }
  return true;
}

Subgroup::Subgroup(PermGroup parent, std::vector<Elem> elements)
: _parent(std::move(parent)), _elements(std::move(elements))
{
  std::sort(_elements.begin(), _elements.end());
  _elements.erase(std::unique(_elements.begin(), _elements.end()), _elements.end());
  if (_elements.empty() || _parent.order() % _elements.size() != 0u)
    throw std::logic_error("subgroup order does not divide the group order");

  _member.assign(_parent.order(), false);
  for (Elem e : _elements)
    _member[e] = true;
}

bool Subgroup::operator<(Subgroup const &rhs) const
{
  if (order() != rhs.order())
    return order() < rhs.order();
  return _elements < rhs._elements;
}

std::vector<Elem> Subgroup::generators() const
{
  if (is_trivial())
    return {};

  PermGroup const &G = _parent;

  // try a few deterministic pseudo-random pairs first
  if (order() > 2u) {
    std::mt19937_64 rng(order() * 7919u + _elements[1]);
    std::uniform_int_distribution<std::size_t> pick(1, order() - 1u);
    for (int attempt = 0; attempt < 64; ++attempt) {
      Elem a = _elements[pick(rng)], b = _elements[pick(rng)];
      if (generate(G, {a, b}).order() == order())
        return a == b ? std::vector<Elem>{a} : std::vector<Elem>{a, b};
    }
  }

  // greedy over elements by decreasing order
  std::vector<Elem> cand(_elements.begin() + 1, _elements.end());
  std::stable_sort(cand.begin(), cand.end(), [&](Elem a, Elem b) {
    return G.element_order(a) > G.element_order(b);
  });

  std::vector<Elem> gens;
  Subgroup cur = trivial_subgroup(G);
  for (Elem e : cand) {
    if (cur.contains(e))
      continue;
    gens.push_back(e);
    cur = generate(G, gens);
    if (cur.order() == order())
      break;
  }

  for (std::size_t i = 0; i < gens.size() && gens.size() > 1u;) {
    std::vector<Elem> rest(gens);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (generate(G, rest).order() == order())
      gens = std::move(rest);
    else
      ++i;
  }
  return gens;
}

PermGroup Subgroup::as_group() const
{
  std::vector<Perm> perms;
  for (Elem g : generators())
    perms.push_back(_parent.element(g));
  return close_generators(_parent.degree(), std::move(perms),
                          std::max(order(), PermGroup::default_cap));
}

Subgroup trivial_subgroup(PermGroup const &G)
{
  return Subgroup(G, {PermGroup::identity()});
}

Subgroup whole_group(PermGroup const &G)
{
  std::vector<Elem> all(G.order());
  for (Elem i = 0; i < all.size(); ++i)
    all[i] = i;
  return Subgroup(G, std::move(all));
}

Subgroup generate(PermGroup const &G, std::vector<Elem> const &gens)
{
  std::vector<bool> seen(G.order(), false);
  std::vector<Elem> elems{PermGroup::identity()};
  seen[0] = true;
  for (std::size_t k = 0; k < elems.size(); ++k) {
    for (Elem g : gens) {
      Elem y = G.mul(elems[k], g);
      if (!seen[y]) {
        seen[y] = true;
        elems.push_back(y);
      }
    }
  }
  return Subgroup(G, std::move(elems));
}

Subgroup normal_closure(PermGroup const &G, std::vector<Elem> const &elems)
{
  std::vector<Elem> gens(elems);
  Subgroup H = generate(G, gens);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    for (Elem g : G.generator_indices()) {
      Elem y = G.conj(gens[k], g);
      if (!H.contains(y)) {
        gens.push_back(y);
        H = generate(G, gens);
      }
    }
  }
  return H;
}

bool is_normal(PermGroup const &G, Subgroup const &H)
{
  for (Elem h : H.elements()) {
    for (Elem g : G.generator_indices()) {
      if (!H.contains(G.conj(h, g)))
        return false;
    }
  }
  return true;
}

Subgroup intersection(Subgroup const &a, Subgroup const &b)
{
  std::vector<Elem> common;
  std::set_intersection(a.elements().begin(), a.elements().end(),
                        b.elements().begin(), b.elements().end(),
                        std::back_inserter(common));
  return Subgroup(a.parent(), std::move(common));
}

Subgroup join(Subgroup const &a, Subgroup const &b)
{
  auto gens = a.generators();
  for (Elem g : b.generators())
    gens.push_back(g);
  return generate(a.parent(), gens);
}

std::vector<Elem> small_generating_set(PermGroup const &G)
{
  return whole_group(G).generators();
}

Subgroup derived_subgroup(PermGroup const &G)
{
  auto const &g = G.generator_indices();
  std::vector<Elem> comms;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      Elem c = G.commutator(g[i], g[j]);
      if (c != PermGroup::identity())
        comms.push_back(c);
    }
  }
  return normal_closure(G, comms);
}

Subgroup centralizer(PermGroup const &G, std::vector<Elem> const &elems)
{
  std::vector<Elem> out;
  for (Elem z = 0; z < G.order(); ++z) {
    bool ok = true;
    for (Elem x : elems) {
      if (G.mul(z, x) != G.mul(x, z)) {
        ok = false;
        break;
      }
    }
    if (ok)
      out.push_back(z);
  }
  return Subgroup(G, std::move(out));
}

Subgroup center(PermGroup const &G)
{
  return centralizer(G, G.generator_indices());
}

std::vector<std::size_t> derived_series_orders(PermGroup const &G)
{
  std::vector<std::size_t> out{G.order()};
  PermGroup cur = G;
  for (;;) {
    Subgroup D = derived_subgroup(cur);
    if (D.order() == cur.order())
      break;
    out.push_back(D.order());
    if (D.is_trivial())
      break;
    cur = D.as_group();
  }
  return out;
}

std::vector<std::vector<Elem>> const &conjugacy_classes(PermGroup const &G)
{
  return G.classes();
}

std::map<unsigned, std::size_t> element_order_histogram(PermGroup const &G)
{
  std::map<unsigned, std::size_t> hist;
  for (Elem e = 0; e < G.order(); ++e)
    ++hist[G.element_order(e)];
  return hist;
}

std::vector<Elem> embedding(PermGroup const &sub, PermGroup const &parent)
{
  std::vector<Elem> out(sub.order());
  for (Elem i = 0; i < sub.order(); ++i)
    out[i] = parent.index_of(sub.element(i));
  return out;
}

bool extend_homomorphism(PermGroup const &G, PermGroup const &H,
                         std::vector<Elem> const &gens,
                         std::vector<Elem> const &images,
                         std::vector<Elem> &map)
{
  map.assign(G.order(), unmapped);
  map[0] = PermGroup::identity();
  std::vector<Elem> queue{PermGroup::identity()};
  for (std::size_t k = 0; k < queue.size(); ++k) {
    Elem x = queue[k];
    for (std::size_t g = 0; g < gens.size(); ++g) {
      Elem y = G.mul(x, gens[g]);
      Elem fy = H.mul(map[x], images[g]);
      if (map[y] == unmapped) {
        map[y] = fy;
        queue.push_back(y);
      } else if (map[y] != fy) {
        return false;
      }
    }
  }
  return true;
}

PermGroup regular_representation(PermGroup const &G)
{
  auto n = static_cast<unsigned>(G.order());
  std::vector<Perm> gens;
  for (Elem g : small_generating_set(G)) {
    std::vector<unsigned> img(n);
    for (Elem x = 0; x < n; ++x)
      img[x] = G.mul(x, g) + 1u;
    gens.push_back(Perm::from_images(img));
  }
  return close_generators(n, std::move(gens), std::max(G.order(), PermGroup::default_cap));
}

PermGroup direct_product(std::vector<PermGroup> const &factors)
{
  unsigned degree = 0;
  std::size_t order = 1;
  for (auto const &f : factors) {
    degree += f.degree();
    order *= f.order();
  }

  std::vector<Perm> gens;
  unsigned offset = 0;
  for (auto const &f : factors) {
    for (auto const &g : f.generators()) {
      if (!g.is_identity())
        gens.push_back(g.shifted(offset, degree));
    }
    offset += f.degree();
  }
  return close_generators(degree, std::move(gens), std::max(order, PermGroup::default_cap));
}

} // namespace bmclass
