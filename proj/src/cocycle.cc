#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "bmclass/cocycle.hpp"
#include "bmclass/errors.hpp"
#include "bmclass/structure.hpp"

namespace bmclass
{

ElemMap compose(ElemMap const &f, ElemMap const &g)
{
  ElemMap h(g.size());
  for (std::size_t x = 0; x < g.size(); ++x)
    h[x] = f[g[x]];
  return h;
}

ElemMap inverse_map(ElemMap const &f)
{
  ElemMap h(f.size());
  for (std::size_t x = 0; x < f.size(); ++x)
    h[f[x]] = static_cast<Elem>(x);
  return h;
}

ElemMap identity_map(std::size_t n)
{
  ElemMap h(n);
  std::iota(h.begin(), h.end(), Elem(0));
  return h;
}

bool is_automorphism(PermGroup const &N, ElemMap const &f)
{
  if (f.size() != N.order())
    return false;
  std::vector<bool> hit(N.order(), false);
  for (Elem x : f) {
    if (x >= N.order() || hit[x])
      return false;
    hit[x] = true;
  }
  for (Elem a = 0; a < N.order(); ++a)
    for (Elem b = 0; b < N.order(); ++b)
      if (f[N.mul(a, b)] != N.mul(f[a], f[b]))
        return false;
  return true;
}

// GammaAction

GammaAction::GammaAction(PermGroup gamma, PermGroup target, std::vector<ElemMap> maps)
: _gamma(std::move(gamma)), _target(std::move(target)), _maps(std::move(maps))
{}

GammaAction GammaAction::from_generators(PermGroup gamma, PermGroup target,
                                         std::vector<ElemMap> const &images)
{
  if (images.size() != gamma.generator_indices().size())
    throw std::invalid_argument("one automorphism per generator of the acting group expected");

  std::vector<ElemMap> maps(gamma.order());
  maps[0] = identity_map(target.order());
  for (Elem e : gamma.bfs_order()) {
    if (e == PermGroup::identity())
      continue;
    maps[e] = compose(maps[gamma.tree_parent(e)], images[gamma.tree_gen(e)]);
  }

  GammaAction act(std::move(gamma), std::move(target), std::move(maps));
  if (!act.verify())
    throw std::invalid_argument("generator images do not define an action by automorphisms");
  return act;
}

GammaAction GammaAction::from_maps(PermGroup gamma, PermGroup target, std::vector<ElemMap> maps)
{
  if (maps.size() != gamma.order())
    throw std::invalid_argument("one automorphism per element of the acting group expected");
  GammaAction act(std::move(gamma), std::move(target), std::move(maps));
  if (!act.verify())
    throw std::invalid_argument("maps do not define an action by automorphisms");
  return act;
}

GammaAction GammaAction::trivial(PermGroup gamma, PermGroup target)
{
  std::vector<ElemMap> maps(gamma.order(), identity_map(target.order()));
  return GammaAction(std::move(gamma), std::move(target), std::move(maps));
}

bool GammaAction::is_trivial() const
{
  auto id = identity_map(_target.order());
  return std::all_of(_maps.begin(), _maps.end(), [&](ElemMap const &m) { return m == id; });
}

bool GammaAction::verify() const
{
  if (_maps.size() != _gamma.order())
    return false;
  for (auto const &m : _maps)
    if (!is_automorphism(_target, m))
      return false;
  if (_maps[0] != identity_map(_target.order()))
    return false;
  for (Elem g = 0; g < _gamma.order(); ++g)
    for (Elem h = 0; h < _gamma.order(); ++h) {
      auto const &gh = _maps[_gamma.mul(g, h)];
      for (Elem n = 0; n < _target.order(); ++n)
        if (gh[n] != _maps[g][_maps[h][n]])
          return false;
    }
  return true;
}

// Cocycles

bool is_cocycle(GammaAction const &act, std::vector<Elem> const &values)
{
  auto const &G = act.gamma();
  auto const &N = act.target();
  if (values.size() != G.order() || values[0] != PermGroup::identity())
    return false;
  for (Elem g = 0; g < G.order(); ++g)
    for (Elem h = 0; h < G.order(); ++h)
      if (values[G.mul(g, h)] != N.mul(values[g], act.act(g, values[h])))
        return false;
  return true;
}

namespace
{

MonomialAction as_monomial(GammaAction const &act)
{
  std::size_t n = act.gamma().order();
  std::vector<ElemMap> auts(n);
  std::vector<std::size_t> index(n);
  for (Elem g = 0; g < n; ++g) {
    auts[g] = act.map(g);
    index[g] = g;
  }
  return MonomialAction(act.gamma(), act.target(), 1, std::vector<std::size_t>(n, 0),
                        std::move(auts), std::move(index));
}

} // namespace

std::vector<Cocycle> enumerate_cocycles(std::shared_ptr<GammaAction const> act)
{
  if (act->gamma().order() > cocycle_gamma_budget)
    throw BudgetExceeded("cocycle enumeration needs |Gamma| <= " +
                         std::to_string(cocycle_gamma_budget));
  if (act->target().order() > cocycle_target_budget)
    throw BudgetExceeded("cocycle enumeration needs |N| <= " +
                         std::to_string(cocycle_target_budget));

  std::vector<Cocycle> out;
  for_each_cocycle(as_monomial(*act), [&](std::vector<Elem> const &values) {
    out.push_back(Cocycle{act, values});
  });
  return out;
}

std::vector<Cocycle> enumerate_cocycles(GammaAction const &act)
{
  return enumerate_cocycles(std::make_shared<GammaAction const>(act));
}

bool cohomologous(Cocycle const &a, Cocycle const &b)
{
  auto const &act = *a.action;
  auto const &N = act.target();
  if (b.action->gamma().order() != act.gamma().order() ||
      b.action->target().order() != N.order())
    throw std::invalid_argument("cocycles of different actions");

  for (Elem n = 0; n < N.order(); ++n) {
    Elem ninv = N.inv(n);
    bool all = true;
    for (Elem g = 0; g < act.gamma().order() && all; ++g)
      all = b(g) == N.mul(ninv, N.mul(a(g), act.act(g, n)));
    if (all)
      return true;
  }
  return false;
}

GammaAction twist_action(GammaAction const &act, Cocycle const &s)
{
  if (!is_cocycle(act, s.values))
    throw CocycleInvalid("twisting data is not a cocycle of the action");

  auto const &N = act.target();
  std::vector<ElemMap> maps(act.gamma().order());
  for (Elem g = 0; g < act.gamma().order(); ++g) {
    Elem sg = s(g);
    Elem sginv = N.inv(sg);
    maps[g].resize(N.order());
    for (Elem n = 0; n < N.order(); ++n)
      maps[g][n] = N.mul(sg, N.mul(act.act(g, n), sginv));
  }
  return GammaAction::from_maps(act.gamma(), N, std::move(maps));
}

Cocycle difference_cocycle(PermGroup const &gamma, PermGroup const &E,
                           std::vector<Elem> const &alpha, std::vector<Elem> const &beta,
                           Subgroup const &H)
{
  if (alpha.size() != gamma.order() || beta.size() != gamma.order())
    throw std::invalid_argument("homomorphisms must be given on every element");
  for (Elem g = 0; g < gamma.order(); ++g)
    for (Elem h = 0; h < gamma.order(); ++h) {
      Elem gh = gamma.mul(g, h);
      if (alpha[gh] != E.mul(alpha[g], alpha[h]) || beta[gh] != E.mul(beta[g], beta[h]))
        throw std::invalid_argument("alpha and beta must be homomorphisms");
    }

  PermGroup Hg = H.as_group();
  auto to_parent = embedding(Hg, E);
  std::vector<Elem> to_h(E.order(), unmapped);
  for (Elem x = 0; x < to_parent.size(); ++x)
    to_h[to_parent[x]] = x;

  std::vector<Elem> values(gamma.order());
  std::vector<ElemMap> maps(gamma.order());
  for (Elem g = 0; g < gamma.order(); ++g) {
    Elem v = E.mul(beta[g], E.inv(alpha[g]));
    if (!H.contains(v))
      throw NotCoequalized("beta(g) alpha(g)^-1 lies outside H");
    values[g] = to_h[v];

    Elem ainv = E.inv(alpha[g]);
    maps[g].resize(Hg.order());
    for (Elem h = 0; h < Hg.order(); ++h) {
      Elem y = E.conj(to_parent[h], ainv);
      if (!H.contains(y))
        throw NotNormal("H is not normalized by the image of alpha");
      maps[g][h] = to_h[y];
    }
  }

  auto act = std::make_shared<GammaAction const>(
    GammaAction::from_maps(gamma, std::move(Hg), std::move(maps)));
  if (!is_cocycle(*act, values))
    throw CocycleInvalid("difference map violates the cocycle law");
  return Cocycle{std::move(act), std::move(values)};
}

// CosetSystem

CosetSystem::CosetSystem(PermGroup gamma, Subgroup delta)
: _gamma(std::move(gamma)), _delta(std::move(delta))
{
  std::size_t n = _gamma.order();
  if (_delta.parent().order() != n)
    throw std::invalid_argument("subgroup of a different group");

  _coset.assign(n, ~std::size_t(0));
  for (Elem g = 0; g < n; ++g) {
    if (_coset[g] != ~std::size_t(0))
      continue;
    // Elements below g are already placed, so g is the minimum of Δg.
    std::size_t c = _reps.size();
    _reps.push_back(g);
    for (Elem d : _delta.elements())
      _coset[_gamma.mul(d, g)] = c;
  }

  _next.resize(_reps.size() * n);
  _factor.resize(_reps.size() * n);
  for (std::size_t i = 0; i < _reps.size(); ++i)
    for (Elem g = 0; g < n; ++g) {
      Elem x = _gamma.mul(_reps[i], g);
      std::size_t j = _coset[x];
      _next[i * n + g] = j;
      _factor[i * n + g] = _gamma.mul(x, _gamma.inv(_reps[j]));
    }
}

std::vector<std::size_t> CosetSystem::rho(Elem g) const
{
  Elem ginv = _gamma.inv(g);
  std::vector<std::size_t> r(size());
  for (std::size_t i = 0; i < size(); ++i)
    r[i] = next(i, ginv);
  return r;
}

bool CosetSystem::verify() const
{
  if (_reps.empty() || _reps[0] != PermGroup::identity())
    return false;
  for (std::size_t i = 0; i < size(); ++i)
    for (Elem g = 0; g < _gamma.order(); ++g) {
      Elem d = factor(i, g);
      if (!_delta.contains(d))
        return false;
      if (_gamma.mul(_reps[i], g) != _gamma.mul(d, _reps[next(i, g)]))
        return false;
    }
  std::vector<std::vector<std::size_t>> r(_gamma.order());
  for (Elem g = 0; g < _gamma.order(); ++g)
    r[g] = rho(g);
  for (Elem g = 0; g < _gamma.order(); ++g)
    for (Elem h = 0; h < _gamma.order(); ++h) {
      auto const &gh = r[_gamma.mul(g, h)];
      for (std::size_t i = 0; i < size(); ++i)
        if (gh[i] != r[g][r[h][i]])
          return false;
    }
  return true;
}

// MonomialAction

MonomialAction::MonomialAction(PermGroup gamma, PermGroup target, std::size_t t,
                               std::vector<std::size_t> src, std::vector<ElemMap> auts,
                               std::vector<std::size_t> aut_index)
: _gamma(std::move(gamma)), _target(std::move(target)), _t(t), _src(std::move(src)),
  _auts(std::move(auts)), _aut(std::move(aut_index))
{
  if (_src.size() != _gamma.order() * _t || _aut.size() != _src.size())
    throw std::invalid_argument("monomial data has the wrong shape");
}

Tuple MonomialAction::act(Elem g, Tuple const &e) const
{
  Tuple out(_t);
  for (std::size_t j = 0; j < _t; ++j)
    out[j] = aut(g, j)[e[src(g, j)]];
  return out;
}

bool MonomialAction::verify() const
{
  for (auto const &f : _auts)
    if (!is_automorphism(_target, f))
      return false;
  for (Elem g = 0; g < _gamma.order(); ++g) {
    std::vector<bool> hit(_t, false);
    for (std::size_t j = 0; j < _t; ++j) {
      if (src(g, j) >= _t || hit[src(g, j)])
        return false;
      hit[src(g, j)] = true;
    }
  }
  for (std::size_t j = 0; j < _t; ++j)
    if (src(0, j) != j || aut(0, j) != identity_map(_target.order()))
      return false;
  for (Elem g = 0; g < _gamma.order(); ++g)
    for (Elem h = 0; h < _gamma.order(); ++h) {
      Elem gh = _gamma.mul(g, h);
      for (std::size_t j = 0; j < _t; ++j) {
        std::size_t mid = src(g, j);
        if (src(gh, j) != src(h, mid))
          return false;
        auto const &f = aut(g, j);
        auto const &k = aut(h, mid);
        auto const &fk = aut(gh, j);
        for (Elem n = 0; n < _target.order(); ++n)
          if (fk[n] != f[k[n]])
            return false;
      }
    }
  return true;
}

// InducedGroup

InducedGroup build_induced(std::shared_ptr<GammaAction const> delta_action, CosetSystem system)
{
  auto const &G = system.gamma();
  auto const &D = delta_action->gamma();
  if (D.order() != system.delta().order() || D.degree() != G.degree())
    throw std::invalid_argument("the action's group is not the subgroup of the coset system");

  std::vector<Elem> from_delta;
  try {
    from_delta = embedding(D, G);
  } catch (std::exception const &) {
    throw std::invalid_argument("the action's group is not the subgroup of the coset system");
  }
  std::vector<Elem> to_delta(G.order(), unmapped);
  for (Elem d = 0; d < from_delta.size(); ++d) {
    if (from_delta[d] == unmapped || !system.delta().contains(from_delta[d]))
      throw std::invalid_argument("the action's group is not the subgroup of the coset system");
    to_delta[from_delta[d]] = d;
  }

  std::size_t t = system.size();
  std::vector<std::size_t> src(G.order() * t);
  std::vector<std::size_t> aut(G.order() * t);
  for (Elem g = 0; g < G.order(); ++g)
    for (std::size_t i = 0; i < t; ++i) {
      src[g * t + i] = system.next(i, g);
      aut[g * t + i] = to_delta[system.factor(i, g)];
    }
  std::vector<ElemMap> auts(D.order());
  for (Elem d = 0; d < D.order(); ++d)
    auts[d] = delta_action->map(d);

  MonomialAction carrier(G, delta_action->target(), t, std::move(src), std::move(auts),
                         std::move(aut));
  if (!carrier.verify())
    throw std::logic_error("induced action fails the action law");

  return InducedGroup{std::move(delta_action), std::move(system), std::move(carrier),
                      std::move(to_delta), std::move(from_delta)};
}

// Enumeration

bool is_cocycle(MonomialAction const &act, std::vector<Elem> const &values)
{
  auto const &G = act.gamma();
  auto const &N = act.target();
  std::size_t t = act.width();
  if (values.size() != G.order() * t)
    return false;
  for (std::size_t j = 0; j < t; ++j)
    if (values[j] != PermGroup::identity())
      return false;
  for (Elem g = 0; g < G.order(); ++g)
    for (Elem h = 0; h < G.order(); ++h) {
      Elem gh = G.mul(g, h);
      for (std::size_t j = 0; j < t; ++j) {
        Elem rhs = N.mul(values[g * t + j], act.aut(g, j)[values[h * t + act.src(g, j)]]);
        if (values[gh * t + j] != rhs)
          return false;
      }
    }
  return true;
}

namespace
{

struct EdgeCheck
{
  std::size_t from;
  std::size_t var;
  std::size_t to;
  ElemMap const *aut;
};

struct CellRule
{
  std::size_t cell;
  std::size_t parent;
  std::size_t var;
  ElemMap const *aut;
};

class CocycleSearch
{
public:
  CocycleSearch(MonomialAction const &act,
                std::function<void(std::vector<Elem> const &)> const &visit,
                std::size_t max_count)
  : _N(act.target()), _visit(visit), _max(max_count)
  {
    auto const &G = act.gamma();
    std::size_t t = act.width();
    auto gens = small_generating_set(G);
    std::size_t nvars = gens.size() * t;

    std::vector<Elem> parent(G.order(), unmapped);
    std::vector<std::size_t> via(G.order(), 0);
    std::vector<Elem> order{PermGroup::identity()};
    parent[0] = 0;
    for (std::size_t q = 0; q < order.size(); ++q)
      for (std::size_t k = 0; k < gens.size(); ++k) {
        Elem y = G.mul(order[q], gens[k]);
        if (parent[y] == unmapped) {
          parent[y] = order[q];
          via[y] = k;
          order.push_back(y);
        }
      }

    // Level of a cell: the last variable it depends on, -1 for constants.
    std::vector<long> level(G.order() * t, -1);
    _cells.resize(nvars);
    _checks.resize(nvars);
    for (std::size_t q = 1; q < order.size(); ++q) {
      Elem x = order[q];
      Elem p = parent[x];
      for (std::size_t j = 0; j < t; ++j) {
        std::size_t var = via[x] * t + act.src(p, j);
        long lv = std::max(level[p * t + j], static_cast<long>(var));
        level[x * t + j] = lv;
        _cells[lv].push_back(CellRule{x * t + j, p * t + j, var, &act.aut(p, j)});
      }
    }
    for (Elem x : order)
      for (std::size_t k = 0; k < gens.size(); ++k) {
        Elem y = G.mul(x, gens[k]);
        if (y != PermGroup::identity() && parent[y] == x && via[y] == k)
          continue;
        for (std::size_t j = 0; j < t; ++j) {
          std::size_t var = k * t + act.src(x, j);
          long lv = std::max({level[x * t + j], level[y * t + j], static_cast<long>(var)});
          _checks[lv].push_back(EdgeCheck{x * t + j, var, y * t + j, &act.aut(x, j)});
        }
      }

    _values.assign(G.order() * t, PermGroup::identity());
    _vars.assign(nvars, 0);
  }

  std::size_t run()
  {
    descend(0);
    return _count;
  }

private:
  void descend(std::size_t v)
  {
    if (v == _vars.size()) {
      if (++_count > _max)
        throw BudgetExceeded("cocycle enumeration exceeds " + std::to_string(_max) + " cocycles");
      _visit(_values);
      return;
    }
    for (Elem value = 0; value < _N.order(); ++value) {
      _vars[v] = value;
      for (auto const &c : _cells[v])
        _values[c.cell] = _N.mul(_values[c.parent], (*c.aut)[_vars[c.var]]);
      bool ok = true;
      for (auto const &e : _checks[v])
        if (_N.mul(_values[e.from], (*e.aut)[_vars[e.var]]) != _values[e.to]) {
          ok = false;
          break;
        }
      if (ok)
        descend(v + 1);
    }
  }

  PermGroup const &_N;
  std::function<void(std::vector<Elem> const &)> const &_visit;
  std::size_t _max;
  std::size_t _count = 0;
  std::vector<std::vector<CellRule>> _cells;
  std::vector<std::vector<EdgeCheck>> _checks;
  std::vector<Elem> _values;
  std::vector<Elem> _vars;
};

} // namespace

std::size_t for_each_cocycle(MonomialAction const &act,
                             std::function<void(std::vector<Elem> const &)> const &visit,
                             std::size_t max_count)
{
  CocycleSearch search(act, visit, max_count);
  return search.run();
}

std::vector<TupleCocycle> enumerate_cocycles(std::shared_ptr<InducedGroup const> ind,
                                             std::size_t max_count)
{
  std::vector<TupleCocycle> out;
  for_each_cocycle(
    ind->carrier,
    [&](std::vector<Elem> const &values) { out.push_back(TupleCocycle{ind, values}); },
    max_count);
  return out;
}

// Shapiro

Cocycle shapiro(std::shared_ptr<InducedGroup const> const &ind, std::vector<Elem> const &values)
{
  std::size_t t = ind->carrier.width();
  auto const &D = ind->base->gamma();
  std::vector<Elem> out(D.order());
  for (Elem d = 0; d < D.order(); ++d)
    out[d] = values[ind->from_delta[d] * t];
  return Cocycle{ind->base, std::move(out)};
}

Cocycle shapiro(TupleCocycle const &c)
{
  return shapiro(c.parent, c.values);
}

bool check_component_formula(InducedGroup const &ind, std::vector<Elem> const &values)
{
  auto const &G = ind.system.gamma();
  auto const &N = ind.carrier.target();
  auto const &sys = ind.system;
  std::size_t t = sys.size();
  if (values.size() != G.order() * t)
    return false;
  auto e0 = [&](Elem g) { return values[g * t]; };

  for (std::size_t i = 0; i < t; ++i) {
    Elem eps = sys.rep(i);
    Elem outer = G.inv(sys.factor(0, eps)); // δ_1(ε_i)⁻¹
    for (Elem g = 0; g < G.order(); ++g) {
      Elem d = sys.factor(i, g);
      Elem inner = N.mul(N.inv(e0(eps)),
                         N.mul(e0(d), ind.delta_act(sys.factor(0, d), e0(sys.rep(sys.next(i, g))))));
      if (values[g * t + i] != ind.delta_act(outer, inner))
        return false;
    }
  }
  return true;
}

bool check_component_formula(TupleCocycle const &c)
{
  return check_component_formula(*c.parent, c.values);
}

// PowerGroup

PowerGroup::PowerGroup(PermGroup N, std::size_t t) : _N(std::move(N)), _t(t)
{
  if (t == 0)
    throw std::invalid_argument("power width must be positive");
  unsigned d = _N.degree();
  unsigned degree = d * static_cast<unsigned>(t);
  std::vector<Perm> gens;
  for (std::size_t j = 0; j < t; ++j)
    for (auto const &g : _N.generators())
      gens.push_back(g.shifted(static_cast<unsigned>(j) * d, degree));

  std::size_t total = 1;
  for (std::size_t j = 0; j < t; ++j)
    total *= _N.order();
  _P = close_generators(degree, gens, std::max(total, PermGroup::default_cap));

  _tuples.resize(_P.order());
  _index.assign(total, 0);
  for (Elem x = 0; x < _P.order(); ++x) {
    auto const &raw = _P.element(x).raw();
    Tuple e(t);
    std::size_t code = 0;
    std::size_t radix = 1;
    for (std::size_t j = 0; j < t; ++j) {
      std::vector<unsigned> images(d);
      for (unsigned p = 0; p < d; ++p)
        images[p] = raw[j * d + p] - static_cast<unsigned>(j) * d + 1u;
      e[j] = _N.index_of(Perm::from_images(images));
      code += e[j] * radix;
      radix *= _N.order();
    }
    _tuples[x] = std::move(e);
    _index[code] = x;
  }
}

Elem PowerGroup::element(Tuple const &e) const
{
  std::size_t code = 0;
  std::size_t radix = 1;
  for (std::size_t j = 0; j < _t; ++j) {
    code += e[j] * radix;
    radix *= _N.order();
  }
  return _index[code];
}

Elem PowerGroup::embed(std::size_t j, Elem n) const
{
  Tuple e(_t, PermGroup::identity());
  e[j] = n;
  return element(e);
}

ElemMap conjugation_map(PermGroup const &N, Perm const &x)
{
  if (x.degree() > N.degree())
    throw std::invalid_argument("conjugating permutation moves points outside N");
  Perm y = x.extended(N.degree());
  ElemMap f(N.order());
  for (Elem n = 0; n < N.order(); ++n) {
    auto img = N.find(N.element(n).conjugated(y));
    if (!img)
      throw std::invalid_argument("permutation " + x.to_cycles() + " does not normalize N");
    f[n] = *img;
  }
  return f;
}

ElemMap wreath_automorphism(PowerGroup const &P, std::vector<ElemMap> const &phis,
                            Perm const &sigma)
{
  std::size_t t = P.width();
  if (phis.size() != t || sigma.degree() != t)
    throw std::invalid_argument("one automorphism per coordinate and a permutation of the "
                                "coordinates expected");
  Perm inv = sigma.inverse();
  ElemMap f(P.group().order());
  for (Elem x = 0; x < f.size(); ++x) {
    auto const &n = P.tuple(x);
    Tuple out(t);
    for (std::size_t i = 0; i < t; ++i)
      out[i] = phis[i][n[inv.image0(static_cast<unsigned>(i))]];
    f[x] = P.element(out);
  }
  return f;
}

// Bidwell

namespace
{

std::size_t ipow(std::size_t b, std::size_t e)
{
  std::size_t r = 1;
  while (e--)
    r *= b;
  return r;
}

struct SourceCoords
{
  std::vector<std::size_t> phis;
  std::size_t perm;
};

SourceCoords decode(BidwellMap const &m, std::size_t x)
{
  std::size_t t = m.power.width();
  std::size_t a = m.aut_n.size();
  SourceCoords c{std::vector<std::size_t>(t), x / ipow(a, t)};
  std::size_t rest = x % ipow(a, t);
  for (std::size_t i = 0; i < t; ++i) {
    c.phis[i] = rest % a;
    rest /= a;
  }
  return c;
}

std::size_t encode(BidwellMap const &m, std::vector<std::size_t> const &phis, std::size_t perm)
{
  std::size_t a = m.aut_n.size();
  std::size_t code = 0;
  std::size_t radix = 1;
  for (std::size_t phi : phis) {
    code += phi * radix;
    radix *= a;
  }
  return perm * ipow(a, phis.size()) + code;
}

Elem bidwell_apply(BidwellMap const &m, SourceCoords const &c, Elem x)
{
  auto const &sigma = m.perms[c.perm];
  auto inv = sigma.inverse();
  auto const &n = m.power.tuple(x);
  Tuple out(n.size());
  for (std::size_t i = 0; i < n.size(); ++i)
    out[i] = m.aut_n[c.phis[i]][n[inv.image0(static_cast<unsigned>(i))]];
  return m.power.element(out);
}

} // namespace

ElemMap BidwellMap::operator()(std::vector<std::size_t> const &phis, std::size_t perm) const
{
  SourceCoords c{phis, perm};
  ElemMap out(power.group().order());
  for (Elem x = 0; x < out.size(); ++x)
    out[x] = bidwell_apply(*this, c, x);
  return out;
}

ElemMap BidwellMap::image(std::size_t source) const
{
  auto c = decode(*this, source);
  return (*this)(c.phis, c.perm);
}

std::size_t BidwellMap::source_product(std::size_t x, std::size_t y) const
{
  // ((φ_i), σ)((ψ_i), τ) = ((φ_i ψ_{σ⁻¹(i)}), στ)
  auto a = decode(*this, x);
  auto b = decode(*this, y);
  auto const &sigma = perms[a.perm];
  auto sinv = sigma.inverse();
  std::size_t t = power.width();
  std::vector<std::size_t> phis(t);
  for (std::size_t i = 0; i < t; ++i) {
    auto f = compose(aut_n[a.phis[i]], aut_n[b.phis[sinv.image0(static_cast<unsigned>(i))]]);
    phis[i] = static_cast<std::size_t>(std::find(aut_n.begin(), aut_n.end(), f) - aut_n.begin());
  }
  Perm st = perms[b.perm] * sigma;
  std::size_t perm = static_cast<std::size_t>(std::find(perms.begin(), perms.end(), st) -
                                              perms.begin());
  return encode(*this, phis, perm);
}

bool BidwellMap::is_homomorphism() const
{
  auto const &gens = power.group().generator_indices();
  std::size_t ys = source_order <= 10'000 ? source_order : std::min<std::size_t>(source_order, 100);
  std::vector<SourceCoords> coords(source_order);
  for (std::size_t x = 0; x < source_order; ++x)
    coords[x] = decode(*this, x);

  for (std::size_t x = 0; x < source_order; ++x)
    for (std::size_t y = 0; y < ys; ++y) {
      auto const &xy = coords[source_product(x, y)];
      for (Elem g : gens)
        if (bidwell_apply(*this, coords[x], bidwell_apply(*this, coords[y], g)) !=
            bidwell_apply(*this, xy, g))
          return false;
    }
  return true;
}

BidwellMap bidwell_iso(PermGroup const &N, std::size_t t, std::size_t budget)
{
  if (ipow(N.order(), t) > budget)
    throw BudgetExceeded("|N^t| = " + std::to_string(ipow(N.order(), t)) +
                         " exceeds the automorphism budget " + std::to_string(budget));

  BidwellMap m{PowerGroup(N, t), {}, {}};
  m.aut_n = automorphisms(N, budget);
  std::sort(m.aut_n.begin(), m.aut_n.end());

  std::vector<unsigned> images(t);
  std::iota(images.begin(), images.end(), 1u);
  do
    m.perms.push_back(Perm::from_images(images));
  while (std::next_permutation(images.begin(), images.end()));

  m.source_order = ipow(m.aut_n.size(), t) * m.perms.size();

  auto const &gens = m.power.group().generator_indices();
  std::set<std::vector<Elem>> seen;
  for (std::size_t x = 0; x < m.source_order; ++x) {
    auto c = decode(m, x);
    std::vector<Elem> key;
    for (Elem g : gens)
      key.push_back(bidwell_apply(m, c, g));
    seen.insert(std::move(key));
  }
  m.injective = seen.size() == m.source_order;
  m.target_order = automorphisms(m.power.group(), budget).size();
  m.surjective = seen.size() == m.target_order;
  return m;
}

// Form decomposition

Elem FormDecomposition::assemble(std::vector<Tuple> const &parts) const
{
  Tuple n(power->width(), PermGroup::identity());
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    auto const &piece = pieces[k];
    for (std::size_t c = 0; c < piece.orbit.size(); ++c)
      n[piece.orbit[c]] = piece.correction[c][parts[k][c]];
  }
  return power->element(n);
}

bool FormDecomposition::verify() const
{
  std::size_t t = power->width();
  auto const &P = power->group();
  auto const &N = power->base();

  std::vector<bool> covered(t, false);
  for (auto const &piece : pieces)
    for (std::size_t c = 0; c < piece.orbit.size(); ++c) {
      if (covered[piece.orbit[c]] || !is_automorphism(N, piece.correction[c]))
        return false;
      covered[piece.orbit[c]] = true;
    }
  if (std::find(covered.begin(), covered.end(), false) != covered.end())
    return false;

  std::vector<std::vector<ElemMap>> undo(pieces.size());
  for (std::size_t k = 0; k < pieces.size(); ++k)
    for (auto const &f : pieces[k].correction)
      undo[k].push_back(inverse_map(f));

  auto split = [&](Elem x) {
    auto const &n = power->tuple(x);
    std::vector<Tuple> parts(pieces.size());
    for (std::size_t k = 0; k < pieces.size(); ++k)
      for (std::size_t c = 0; c < pieces[k].orbit.size(); ++c)
        parts[k].push_back(undo[k][c][n[pieces[k].orbit[c]]]);
    return parts;
  };

  for (Elem x = 0; x < P.order(); ++x) {
    auto parts = split(x);
    if (assemble(parts) != x)
      return false;
    for (Elem g = 0; g < input->gamma().order(); ++g) {
      std::vector<Tuple> moved(pieces.size());
      for (std::size_t k = 0; k < pieces.size(); ++k)
        moved[k] = pieces[k].induced->carrier.act(g, parts[k]);
      if (assemble(moved) != input->act(g, x))
        return false;
    }
  }
  return true;
}

FormDecomposition decompose_form(std::shared_ptr<PowerGroup const> power,
                                 std::shared_ptr<GammaAction const> act)
{
  auto const &P = power->group();
  auto const &N = power->base();
  auto const &G = act->gamma();
  std::size_t t = power->width();
  if (act->target().order() != P.order() || !act->target().same_as(P))
    throw std::invalid_argument("the action must be on the power group itself");
  if (N.order() < 2)
    throw std::invalid_argument("the factor group must be nontrivial");

  // ψ(γ): where each factor subgroup goes.
  std::vector<std::vector<std::size_t>> psi(G.order(), std::vector<std::size_t>(t));
  for (Elem g = 0; g < G.order(); ++g) {
    std::vector<bool> hit(t, false);
    for (std::size_t j = 0; j < t; ++j) {
      std::size_t target = t;
      for (Elem n = 1; n < N.order(); ++n) {
        auto const &img = power->tuple(act->act(g, power->embed(j, n)));
        std::size_t support = t;
        for (std::size_t l = 0; l < t; ++l) {
          if (img[l] == PermGroup::identity())
            continue;
          if (support != t)
            throw FactorNotPreserved("an automorphism spreads a factor over several coordinates");
          support = l;
        }
        if (target == t)
          target = support;
        else if (target != support)
          throw FactorNotPreserved("an automorphism splits a factor subgroup");
      }
      if (hit[target])
        throw FactorNotPreserved("two factors are sent to the same factor");
      hit[target] = true;
      psi[g][j] = target;
    }
  }

  // φ_l(γ) on N: coordinate l of γ applied to the factor sent to l.
  auto phi = [&](std::size_t l, Elem g) {
    std::size_t from =
      static_cast<std::size_t>(std::find(psi[g].begin(), psi[g].end(), l) - psi[g].begin());
    ElemMap f(N.order());
    for (Elem n = 0; n < N.order(); ++n)
      f[n] = power->tuple(act->act(g, power->embed(from, n)))[l];
    return f;
  };
  // Right action l.γ = ψ(γ)⁻¹(l).
  auto dot = [&](std::size_t l, Elem g) {
    return static_cast<std::size_t>(std::find(psi[g].begin(), psi[g].end(), l) - psi[g].begin());
  };

  FormDecomposition out{power, act, psi, {}};
  std::vector<bool> placed(t, false);
  for (std::size_t i = 0; i < t; ++i) {
    if (placed[i])
      continue;

    std::vector<Elem> stab;
    for (Elem g = 0; g < G.order(); ++g)
      if (psi[g][i] == i)
        stab.push_back(g);
    Subgroup stabilizer(G, stab);
    PermGroup Gi = stabilizer.as_group();
    auto into_g = embedding(Gi, G);

    std::vector<ElemMap> theta_maps(Gi.order());
    for (Elem d = 0; d < Gi.order(); ++d)
      theta_maps[d] = phi(i, into_g[d]);
    auto theta = std::make_shared<GammaAction const>(
      GammaAction::from_maps(Gi, N, std::move(theta_maps)));

    CosetSystem system(G, stabilizer);
    OrbitPiece piece{i, {}, stabilizer, *theta, nullptr, {}};
    for (std::size_t c = 0; c < system.size(); ++c) {
      Elem eps = system.rep(c);
      std::size_t l = dot(i, eps);
      piece.orbit.push_back(l);
      placed[l] = true;
      piece.correction.push_back(inverse_map(phi(i, eps)));
    }
    piece.induced =
      std::make_shared<InducedGroup const>(build_induced(theta, std::move(system)));
    out.pieces.push_back(std::move(piece));
  }

  if (!out.verify())
    throw std::logic_error("form decomposition failed its equivariance check");
  return out;
}

} // namespace bmclass
