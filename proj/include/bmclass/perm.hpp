#ifndef BMCLASS_PERM_HPP
#define BMCLASS_PERM_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace bmclass
{

/**
 * A permutation of {1..degree}. Images are stored 0-based; `operator[]` takes
 * and returns 1-based points.
 *
 * Products compose left to right: `(p * q)[x] == q[p[x]]`.
 */
class Perm
{
public:
  Perm() = default;
  explicit Perm(unsigned degree);

  /// Throws InvalidPermutation unless `images` (1-based) is a bijection.
  static Perm from_images(std::vector<unsigned> const &images);

  /// Parses disjoint-cycle notation such as `(1,2,3)(4,5)`; `()` is the
  /// identity. Points above `degree` are an error.
  static Perm from_cycles(unsigned degree, std::string_view cycles);

  unsigned degree() const { return static_cast<unsigned>(_images.size()); }

  unsigned operator[](unsigned x) const { return _images[x - 1u] + 1u; }
  unsigned image0(unsigned x) const { return _images[x]; }

  Perm operator*(Perm const &rhs) const;
  Perm &operator*=(Perm const &rhs);
  Perm inverse() const;
  /// Conjugate `this^g = g^-1 * this * g`.
  Perm conjugated(Perm const &g) const;

  bool is_identity() const;
  unsigned order() const;

  /// Extends the permutation to a larger degree by fixing the new points.
  Perm extended(unsigned degree) const;
  /// Shifts the support up by `offset` points inside a permutation of `degree`.
  Perm shifted(unsigned offset, unsigned degree) const;

  std::string to_cycles() const;

  std::vector<std::uint16_t> const &raw() const { return _images; }

  bool operator==(Perm const &) const = default;
  auto operator<=>(Perm const &rhs) const { return _images <=> rhs._images; }

private:
  std::vector<std::uint16_t> _images;
};

std::ostream &operator<<(std::ostream &os, Perm const &p);

struct PermHash
{
  std::size_t operator()(Perm const &p) const noexcept;
};

/// Parses a `;`-separated list of cycle strings.
std::vector<Perm> parse_generators(unsigned degree, std::string_view text);

/// Largest point mentioned in a cycle string, or 0.
unsigned max_point(std::string_view cycles);

} // namespace bmclass

#endif // BMCLASS_PERM_HPP
