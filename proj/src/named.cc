#include <algorithm>
#include <cctype>
#include <functional>
#include <string>

#include "bmclass/catalog.hpp"
#include "bmclass/errors.hpp"
#include "bmclass/structure.hpp"

namespace bmclass
{

namespace
{

using Matrix = std::vector<std::vector<unsigned>>;

std::string trim(std::string_view s)
{
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return std::string(s.substr(a, b - a));
}

std::optional<unsigned> parse_uint(std::string_view s)
{
  if (s.empty() || s.size() > 6)
    return std::nullopt;
  unsigned v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return std::nullopt;
    v = v * 10u + static_cast<unsigned>(c - '0');
  }
  return v;
}

bool is_prime(unsigned q)
{
  if (q < 2u)
    return false;
  for (unsigned d = 2; d * d <= q; ++d) {
    if (q % d == 0u)
      return false;
  }
  return true;
}

PermGroup from_gens(unsigned degree, std::vector<Perm> gens)
{
  return close_generators(degree, std::move(gens));
}

Perm from_map(unsigned degree, std::function<unsigned(unsigned)> const &f)
{
  std::vector<unsigned> img(degree);
  for (unsigned x = 0; x < degree; ++x)
    img[x] = f(x) + 1u;
  return Perm::from_images(img);
}

// Right regular representation of an abstract group on {0..m-1}.
PermGroup regular(unsigned m, std::function<unsigned(unsigned, unsigned)> const &mul,
                  std::vector<unsigned> const &gens)
{
  std::vector<Perm> perms;
  for (unsigned g : gens)
    perms.push_back(from_map(m, [&](unsigned x) { return mul(x, g); }));
  return close_generators(m, std::move(perms), std::max<std::size_t>(m, PermGroup::default_cap));
}

PermGroup cyclic(unsigned n)
{
  if (n <= 1u)
    return PermGroup();
  return from_gens(n, {from_map(n, [n](unsigned x) { return (x + 1u) % n; })});
}

PermGroup symmetric(unsigned n)
{
  if (n <= 1u)
    return PermGroup();
  if (n == 2u)
    return cyclic(2);
  return from_gens(n, {Perm::from_cycles(n, "(1,2)"),
                       from_map(n, [n](unsigned x) { return (x + 1u) % n; })});
}

PermGroup alternating(unsigned n)
{
  if (n <= 2u)
    return PermGroup();
  std::vector<Perm> gens;
  for (unsigned k = 3; k <= n; ++k)
    gens.push_back(Perm::from_cycles(n, "(1,2," + std::to_string(k) + ")"));
  return from_gens(n, std::move(gens));
}

PermGroup dihedral(unsigned n)
{
  if (n == 1u)
    return cyclic(2);
  if (n == 2u)
    return from_gens(4, {Perm::from_cycles(4, "(1,2)"), Perm::from_cycles(4, "(3,4)")});
  return from_gens(n, {from_map(n, [n](unsigned x) { return (x + 1u) % n; }),
                       from_map(n, [n](unsigned x) { return (n - x) % n; })});
}

// Dic_n = <a, b | a^(2n), b^2 = a^n, b^-1 a b = a^-1>, elements a^i b^j.
PermGroup dicyclic(unsigned n)
{
  unsigned m = 2u * n;
  auto mul = [m, n](unsigned x, unsigned y) {
    unsigned i = x % m, j = x / m, k = y % m, l = y / m;
    unsigned e = j ? (i + m - k) % m : (i + k) % m;
    if (j + l == 2u)
      return (e + n) % m;
    return e + m * (j + l);
  };
  return regular(2u * m, mul, {1u, m});
}

PermGroup quaternion8()
{
  return dicyclic(2);
}

// Extraspecial 2^(1+2n): pairs (v, z) with (v,z)(w,z') = (v+w, z+z'+b(v,w)).
PermGroup extraspecial(unsigned n, bool plus)
{
  unsigned r = 2u * n, m = 1u << (r + 1u);
  auto beta = [n, plus](unsigned v, unsigned w) {
    unsigned s = 0;
    for (unsigned i = 0; i < n; ++i) {
      unsigned xv = (v >> (2u * i)) & 1u, yv = (v >> (2u * i + 1u)) & 1u;
      unsigned xw = (w >> (2u * i)) & 1u, yw = (w >> (2u * i + 1u)) & 1u;
      s ^= xv & yw;
      if (!plus && i + 1u == n)
        s ^= (xv & xw) ^ (yv & yw);
    }
    return s;
  };
  auto mul = [r, beta](unsigned x, unsigned y) {
    unsigned v = x & ((1u << r) - 1u), w = y & ((1u << r) - 1u);
    unsigned z = ((x >> r) ^ (y >> r) ^ beta(v, w)) & 1u;
    return (v ^ w) | (z << r);
  };
  std::vector<unsigned> gens;
  for (unsigned i = 0; i < r; ++i)
    gens.push_back(1u << i);
  return regular(m, mul, gens);
}

// Matrices over F_q acting on nonzero row vectors v -> vM.
struct VectorSpace
{
  unsigned q, dim;
  unsigned size() const
  {
    unsigned s = 1;
    for (unsigned i = 0; i < dim; ++i)
      s *= q;
    return s;
  }
  std::vector<unsigned> decode(unsigned v) const
  {
    std::vector<unsigned> c(dim);
    for (unsigned i = 0; i < dim; ++i) {
      c[i] = v % q;
      v /= q;
    }
    return c;
  }
  unsigned encode(std::vector<unsigned> const &c) const
  {
    unsigned v = 0;
    for (unsigned i = dim; i-- > 0;)
      v = v * q + c[i];
    return v;
  }
  unsigned apply(unsigned v, Matrix const &M) const
  {
    auto c = decode(v);
    std::vector<unsigned> out(dim, 0);
    for (unsigned j = 0; j < dim; ++j) {
      for (unsigned i = 0; i < dim; ++i)
        out[j] = (out[j] + c[i] * M[i][j]) % q;
    }
    return encode(out);
  }
};

PermGroup linear_on_vectors(unsigned q, unsigned dim, std::vector<Matrix> const &mats)
{
  VectorSpace V{q, dim};
  unsigned deg = V.size() - 1u;
  std::vector<Perm> gens;
  for (auto const &M : mats)
    gens.push_back(from_map(deg, [&](unsigned x) { return V.apply(x + 1u, M) - 1u; }));
  return from_gens(deg, std::move(gens));
}

// Action on the q+1 points of the projective line.
PermGroup linear_on_lines(unsigned q, std::vector<Matrix> const &mats)
{
  VectorSpace V{q, 2};
  // canonical representative of each line: first nonzero coordinate is 1
  std::vector<unsigned> reps;
  std::vector<unsigned> line_of(V.size(), 0);
  for (unsigned v = 1; v < V.size(); ++v) {
    auto c = V.decode(v);
    unsigned lead = c[0] ? c[0] : c[1];
    if (lead == 1u) {
      line_of[v] = static_cast<unsigned>(reps.size());
      reps.push_back(v);
    }
  }
  for (unsigned v = 1; v < V.size(); ++v) {
    auto c = V.decode(v);
    unsigned lead = c[0] ? c[0] : c[1];
    unsigned inv = 1;
    while (lead * inv % q != 1u)
      ++inv;
    line_of[v] = line_of[V.encode({c[0] * inv % q, c[1] * inv % q})];
  }

  auto deg = static_cast<unsigned>(reps.size());
  std::vector<Perm> gens;
  for (auto const &M : mats)
    gens.push_back(from_map(deg, [&](unsigned x) { return line_of[V.apply(reps[x], M)]; }));
  return from_gens(deg, std::move(gens));
}

unsigned primitive_root(unsigned q)
{
  for (unsigned g = 1; g < q; ++g) {
    unsigned x = 1, ord = 0;
    do {
      x = x * g % q;
      ++ord;
    } while (x != 1u);
    if (ord == q - 1u)
      return g;
  }
  return 1;
}

std::vector<Matrix> sl2_gens(unsigned)
{
  return {{{1, 1}, {0, 1}}, {{1, 0}, {1, 1}}};
}

std::vector<Matrix> gl2_gens(unsigned q)
{
  auto g = sl2_gens(q);
  g.push_back({{primitive_root(q), 0}, {0, 1}});
  return g;
}

PermGroup matrix_family(std::string const &family, unsigned q)
{
  if (!is_prime(q))
    throw UnknownName(family + "(" + std::to_string(q) + "): only prime fields are supported");
  if (family == "SL2")
    return linear_on_vectors(q, 2, sl2_gens(q));
  if (family == "GL2")
    return linear_on_vectors(q, 2, gl2_gens(q));
  if (family == "PSL2")
    return linear_on_lines(q, sl2_gens(q));
  if (family == "PGL2")
    return linear_on_lines(q, gl2_gens(q));
  throw UnknownName(family);
}

PermGroup heisenberg(unsigned p)
{
  if (p < 3u || !is_prime(p))
    throw UnknownName("He" + std::to_string(p) + ": p must be an odd prime");
  return linear_on_vectors(p, 3, {{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}},
                                  {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}}});
}

PermGroup gl3_2()
{
  return linear_on_vectors(2, 3, {{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}},
                                  {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}},
                                  {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}});
}

// Splits at top-level occurrences of any of `seps`, ignoring bracketed text.
std::vector<std::string> split_top(std::string const &s, std::vector<std::string> const &seps)
{
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size();) {
    char c = s[i];
    if (c == '(' || c == '{' || c == '[') {
      ++depth;
    } else if (c == ')' || c == '}' || c == ']') {
      --depth;
    } else if (depth == 0) {
      bool hit = false;
      for (auto const &sep : seps) {
        if (s.compare(i, sep.size(), sep) == 0) {
          parts.push_back(s.substr(start, i - start));
          i += sep.size();
          start = i;
          hit = true;
          break;
        }
      }
      if (hit)
        continue;
    }
    ++i;
  }
  parts.push_back(s.substr(start));
  return parts;
}

PermGroup named(std::string const &raw, Database const *db);

// N:Q@act, realized as pairs (q, n) with (q1,n1)(q2,n2) = (q1 q2, n1^q2 n2),
// where n^q is the given action; then q^-1 n q = n^q inside the product.
PermGroup semidirect(std::string const &ntext, std::string const &rest, Database const *db)
{
  auto at = rest.find('@');
  if (at == std::string::npos)
    throw AmbiguousAction("semidirect product '" + ntext + ":" + rest +
                          "' needs an explicit action");

  PermGroup N = named(trim(ntext), db);
  PermGroup Q = named(trim(rest.substr(0, at)), db);
  auto blocks = split_top(rest.substr(at + 1), {"|"});
  if (blocks.size() != Q.generators().size())
    throw UnknownName("action must give one block per generator of the acting group");

  // each block: images of N's generators, extended to an automorphism of N
  std::size_t nn = N.order(), nq = Q.order();
  std::vector<Perm> auts;
  for (auto const &b : blocks) {
    auto imgs = parse_generators(N.degree(), b);
    if (imgs.size() != N.generators().size())
      throw UnknownName("action block does not match the generators of the normal factor");
    std::vector<Elem> img_idx, map;
    for (auto const &p : imgs) {
      auto e = N.find(p);
      if (!e)
        throw UnknownName("action image is not an element of the normal factor");
      img_idx.push_back(*e);
    }
    if (!extend_homomorphism(N, N, N.generator_indices(), img_idx, map))
      throw UnknownName("action block is not an endomorphism");
    std::vector<bool> hit(nn, false);
    for (Elem m : map)
      hit[m] = true;
    if (std::count(hit.begin(), hit.end(), true) != static_cast<long>(nn))
      throw UnknownName("action block is not bijective");
    auts.push_back(from_map(static_cast<unsigned>(nn), [&](unsigned x) { return map[x]; }));
  }

  PermGroup A = close_generators(static_cast<unsigned>(nn), auts,
                                 std::max(nn, PermGroup::default_cap));
  std::vector<Elem> aut_idx, act;
  for (auto const &a : auts)
    aut_idx.push_back(A.index_of(a));
  if (!extend_homomorphism(Q, A, Q.generator_indices(), aut_idx, act))
    throw UnknownName("action does not define a homomorphism");

  auto m = static_cast<unsigned>(nn * nq);
  auto mul = [&](unsigned x, unsigned y) {
    Elem q1 = x / nn, n1 = x % nn, q2 = y / nn, n2 = y % nn;
    Elem tw = A.element(act[q2]).image0(n1);
    return static_cast<unsigned>(nn * Q.mul(q1, q2) + N.mul(tw, n2));
  };
  std::vector<unsigned> gens;
  for (Elem g : N.generator_indices())
    gens.push_back(g);
  for (Elem g : Q.generator_indices())
    gens.push_back(static_cast<unsigned>(nn * g));
  return regular(m, mul, gens);
}

PermGroup base_name(std::string const &s, Database const *db)
{
  if (s.rfind("SmallGroup(", 0) == 0 && s.back() == ')') {
    if (!db)
      throw UnknownName(s + ": no database loaded");
    auto id = GroupId::parse(s.substr(11, s.size() - 12));
    auto const *rec = db->find(id);
    if (!rec)
      throw UnknownName(s + ": not in the database");
    return rec->group();
  }

  if (s == "Q8")
    return quaternion8();
  if (s == "GL3(2)" || s == "GL3(F2)")
    return gl3_2();

  for (std::string fam : {"PSL2", "PGL2", "SL2", "GL2"}) {
    if (s.rfind(fam + "(", 0) == 0 && s.back() == ')') {
      std::string arg = s.substr(fam.size() + 1, s.size() - fam.size() - 2);
      if (arg.rfind("F", 0) == 0)
        arg = arg.substr(1);
      auto q = parse_uint(arg);
      if (!q)
        throw UnknownName(s);
      return matrix_family(fam, *q);
    }
  }

  if (s.rfind("2^(1+", 0) == 0 || s.rfind("2^{1+", 0) == 0) {
    char close = s[2] == '(' ? ')' : '}';
    auto end = s.find(close);
    if (end == std::string::npos || end + 2 != s.size() || (s.back() != '+' && s.back() != '-'))
      throw UnknownName(s);
    auto twon = parse_uint(s.substr(5, end - 5));
    if (!twon || *twon == 0u || *twon % 2u != 0u)
      throw UnknownName(s);
    return extraspecial(*twon / 2u, s.back() == '+');
  }

  auto with_number = [&](std::string const &prefix) -> std::optional<unsigned> {
    if (s.rfind(prefix, 0) != 0)
      return std::nullopt;
    return parse_uint(s.substr(prefix.size()));
  };

  if (auto n = with_number("Dic"); n && *n >= 1u)
    return dicyclic(*n);
  if (auto p = with_number("He"))
    return heisenberg(*p);
  if (auto n = with_number("C"); n && *n >= 1u)
    return cyclic(*n);
  if (auto n = with_number("D"); n && *n >= 1u)
    return dihedral(*n);
  if (auto n = with_number("S"); n && *n >= 1u)
    return symmetric(*n);
  if (auto n = with_number("A"); n && *n >= 1u)
    return alternating(*n);

  throw UnknownName(s);
}

PermGroup named(std::string const &raw, Database const *db)
{
  std::string s = trim(raw);
  if (s.empty())
    throw UnknownName("empty group name");

  auto factors = split_top(s, {"\xC3\x97", "x"});
  if (factors.size() > 1u) {
    std::vector<PermGroup> gs;
    for (auto const &f : factors)
      gs.push_back(named(f, db));
    return direct_product(gs);
  }

  auto sd = split_top(s, {"\xE2\x8B\x8A", ":"});
  if (sd.size() == 2u)
    return semidirect(sd[0], sd[1], db);
  if (sd.size() > 2u)
    throw UnknownName(s);

  if (s.front() == '(' && s.back() == ')' && split_top(s.substr(1, s.size() - 2), {}).size() == 1u) {
    // whole expression bracketed; only strip if the brackets match each other
    int depth = 0;
    bool outer = true;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      depth += s[i] == '(' ? 1 : s[i] == ')' ? -1 : 0;
      if (depth == 0) {
        outer = false;
        break;
      }
    }
    if (outer)
      return named(s.substr(1, s.size() - 2), db);
  }

  // X^k, but not the extraspecial prefix 2^(...)
  auto caret = s.rfind('^');
  if (caret != std::string::npos && caret > 0 && s.rfind("2^", 0) != 0) {
    if (auto k = parse_uint(s.substr(caret + 1)); k && *k >= 1u) {
      PermGroup X = named(s.substr(0, caret), db);
      return direct_product(std::vector<PermGroup>(*k, X));
    }
  }

  return base_name(s, db);
}

} // namespace

PermGroup make_named(std::string_view name, Database const *db)
{
  return named(std::string(name), db);
}

} // namespace bmclass
