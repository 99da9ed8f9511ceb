#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "bmclass/errors.hpp"
#include "bmclass/perm.hpp"

namespace bmclass
{

Perm::Perm(unsigned degree)
: _images(degree)
{
  std::iota(_images.begin(), _images.end(), 0);
}

Perm Perm::from_images(std::vector<unsigned> const &images)
{
  Perm p;
  p._images.resize(images.size());

  std::vector<bool> seen(images.size(), false);
  for (std::size_t i = 0; i < images.size(); ++i) {
    unsigned y = images[i];
    if (y < 1u || y > images.size() || seen[y - 1u])
      throw InvalidPermutation("image list is not a bijection");
    seen[y - 1u] = true;
    p._images[i] = static_cast<std::uint16_t>(y - 1u);
  }
  return p;
}

Perm Perm::from_cycles(unsigned degree, std::string_view cycles)
{
  Perm p(degree);
  std::vector<bool> touched(degree, false);

  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < cycles.size() && std::isspace(static_cast<unsigned char>(cycles[pos])))
      ++pos;
  };

  skip_ws();
  while (pos < cycles.size()) {
    if (cycles[pos] != '(')
      throw InvalidPermutation("expected '(' in cycle string");
    ++pos;

    std::vector<unsigned> cycle;
    for (;;) {
      skip_ws();
      if (pos >= cycles.size())
        throw InvalidPermutation("unterminated cycle");
      if (cycles[pos] == ')') {
        ++pos;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(cycles[pos])))
        throw InvalidPermutation("expected a point in cycle");

      unsigned long x = 0;
      while (pos < cycles.size() && std::isdigit(static_cast<unsigned char>(cycles[pos]))) {
        x = x * 10u + static_cast<unsigned>(cycles[pos] - '0');
        if (x > 65535u)
          throw InvalidPermutation("point out of range");
        ++pos;
      }
      if (x < 1u || x > degree)
        throw InvalidPermutation("point " + std::to_string(x) + " exceeds degree");
      cycle.push_back(static_cast<unsigned>(x));

      skip_ws();
      if (pos < cycles.size() && cycles[pos] == ',')
        ++pos;
      else if (pos < cycles.size() && cycles[pos] != ')')
        throw InvalidPermutation("expected ',' or ')' in cycle");
    }

    for (unsigned x : cycle) {
      if (touched[x - 1u])
        throw InvalidPermutation("cycles are not disjoint");
      touched[x - 1u] = true;
    }
    for (std::size_t i = 0; i < cycle.size(); ++i)
      p._images[cycle[i] - 1u] = static_cast<std::uint16_t>(cycle[(i + 1) % cycle.size()] - 1u);

    skip_ws();
  }
  return p;
}

Perm Perm::operator*(Perm const &rhs) const
{
  Perm r(*this);
  r *= rhs;
  return r;
}

Perm &Perm::operator*=(Perm const &rhs)
{
  if (rhs.degree() != degree())
    throw InvalidPermutation("degree mismatch in product");
  for (auto &x : _images)
    x = rhs._images[x];
  return *this;
}

Perm Perm::inverse() const
{
  Perm r;
  r._images.resize(_images.size());
  for (std::size_t i = 0; i < _images.size(); ++i)
    r._images[_images[i]] = static_cast<std::uint16_t>(i);
  return r;
}

Perm Perm::conjugated(Perm const &g) const
{
  return g.inverse() * *this * g;
}

bool Perm::is_identity() const
{
  for (std::size_t i = 0; i < _images.size(); ++i) {
    if (_images[i] != i)
      return false;
  }
  return true;
}

unsigned Perm::order() const
{
  std::vector<bool> seen(_images.size(), false);
  unsigned long long ord = 1;
  for (std::size_t i = 0; i < _images.size(); ++i) {
    if (seen[i])
      continue;
    unsigned len = 0;
    for (std::size_t j = i; !seen[j]; j = _images[j]) {
      seen[j] = true;
      ++len;
    }
    ord = std::lcm(ord, static_cast<unsigned long long>(len));
  }
  return static_cast<unsigned>(ord);
}

Perm Perm::extended(unsigned degree) const
{
  Perm r(degree);
  std::copy(_images.begin(), _images.end(), r._images.begin());
  return r;
}

Perm Perm::shifted(unsigned offset, unsigned degree) const
{
  Perm r(degree);
  for (std::size_t i = 0; i < _images.size(); ++i)
    r._images[i + offset] = static_cast<std::uint16_t>(_images[i] + offset);
  return r;
}

std::string Perm::to_cycles() const
{
  std::ostringstream ss;
  std::vector<bool> seen(_images.size(), false);
  for (std::size_t i = 0; i < _images.size(); ++i) {
    if (seen[i] || _images[i] == i)
      continue;
    ss << '(';
    for (std::size_t j = i; !seen[j]; j = _images[j]) {
      seen[j] = true;
      if (j != i)
        ss << ',';
      ss << j + 1u;
    }
    ss << ')';
  }
  std::string s = ss.str();
  return s.empty() ? "()" : s;
}

std::ostream &operator<<(std::ostream &os, Perm const &p)
{
  return os << p.to_cycles();
}

std::size_t PermHash::operator()(Perm const &p) const noexcept
{
  std::size_t h = 1469598103934665603ull;
  for (auto x : p.raw()) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<Perm> parse_generators(unsigned degree, std::string_view text)
{
  std::vector<Perm> gens;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos)
      end = text.size();

    auto piece = text.substr(start, end - start);
    bool blank = std::all_of(piece.begin(), piece.end(),
                             [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (!blank)
      gens.push_back(Perm::from_cycles(degree, piece));

    start = end + 1;
  }
  return gens;
}

unsigned max_point(std::string_view cycles)
{
  unsigned best = 0, cur = 0;
  bool in_num = false;
  for (char c : cycles) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      cur = cur * 10u + static_cast<unsigned>(c - '0');
      in_num = true;
    } else {
      if (in_num)
        best = std::max(best, cur);
      cur = 0;
      in_num = false;
    }
  }
  if (in_num)
    best = std::max(best, cur);
  return best;
}

} // namespace bmclass
