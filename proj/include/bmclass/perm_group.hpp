#ifndef BMCLASS_PERM_GROUP_HPP
#define BMCLASS_PERM_GROUP_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "bmclass/perm.hpp"

namespace bmclass
{

/// Index of an element in the canonical (lexicographic) element list of its
/// group. The identity is always element 0.
using Elem = std::uint32_t;

namespace detail
{
struct GroupData;
}

/**
 * A finite permutation group with all elements materialized.
 *
 * Copies share the same immutable data and caches; the multiplication table,
 * inverses and conjugacy classes are built on first use, exactly once, even
 * under concurrent access.
 */
class PermGroup
{
public:
  static constexpr std::size_t default_cap = 10080;

  /// The trivial group on one point.
  PermGroup();

  unsigned degree() const;
  std::size_t order() const;

  std::vector<Perm> const &generators() const;
  /// Element indices of `generators()`, in the same order.
  std::vector<Elem> const &generator_indices() const;

  std::vector<Perm> const &elements() const;
  Perm const &element(Elem e) const;
  std::optional<Elem> find(Perm const &p) const;
  Elem index_of(Perm const &p) const;

  static constexpr Elem identity() { return 0; }

  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  /// `g^-1 x g`.
  Elem conj(Elem x, Elem g) const;
  Elem pow(Elem x, long long k) const;
  /// `a^-1 b^-1 a b`.
  Elem commutator(Elem a, Elem b) const;
  unsigned element_order(Elem e) const;
  /// `e * generators()[gen]`.
  Elem right_mul_gen(Elem e, std::size_t gen) const;

  /// Breadth-first spanning tree over right multiplication by generators:
  /// every non-identity element e satisfies
  /// `e == mul(tree_parent(e), generator_indices()[tree_gen(e)])`.
  std::vector<Elem> const &bfs_order() const;
  Elem tree_parent(Elem e) const;
  std::size_t tree_gen(Elem e) const;

  /// Conjugacy class index of every element, classes numbered by their
  /// smallest element.
  std::vector<std::vector<Elem>> const &classes() const;
  std::size_t class_of(Elem e) const;

  bool is_abelian() const;

  /// True iff both handles refer to the same materialized group.
  bool same_as(PermGroup const &other) const { return _d == other._d; }

  friend PermGroup close_generators(unsigned degree, std::vector<Perm> gens,
                                    std::size_t cap);

private:
  explicit PermGroup(std::shared_ptr<detail::GroupData const> d) : _d(std::move(d)) {}

  std::shared_ptr<detail::GroupData const> _d;
};

/// Closure of `gens` on `degree` points. An empty generator list yields the
/// trivial group. Throws ElementCapExceeded when the closure outgrows `cap`.
PermGroup close_generators(unsigned degree, std::vector<Perm> gens,
                           std::size_t cap = PermGroup::default_cap);

/// A subgroup of a PermGroup as a sorted list of parent element indices.
class Subgroup
{
public:
  Subgroup() = default;
  /// `elements` must be closed under the parent's product; they are sorted
  /// here. Throws std::logic_error when Lagrange fails.
  Subgroup(PermGroup parent, std::vector<Elem> elements);

  PermGroup const &parent() const { return _parent; }
  std::vector<Elem> const &elements() const { return _elements; }
  std::size_t order() const { return _elements.size(); }
  std::size_t index() const { return _parent.order() / _elements.size(); }
  bool contains(Elem e) const { return _member[e]; }
  std::vector<bool> const &membership() const { return _member; }

  bool is_trivial() const { return _elements.size() == 1u; }
  bool is_whole() const { return _elements.size() == _parent.order(); }

  /// A small generating set, in parent indices.
  std::vector<Elem> generators() const;

  /// The subgroup as a standalone group on the parent's points.
  PermGroup as_group() const;

  bool operator==(Subgroup const &rhs) const { return _elements == rhs._elements; }
  bool operator<(Subgroup const &rhs) const;

private:
  PermGroup _parent;
  std::vector<Elem> _elements;
  std::vector<bool> _member;
};

Subgroup trivial_subgroup(PermGroup const &G);
Subgroup whole_group(PermGroup const &G);

/// Subgroup generated by the given parent elements.
Subgroup generate(PermGroup const &G, std::vector<Elem> const &gens);

/// Smallest normal subgroup containing the given elements.
Subgroup normal_closure(PermGroup const &G, std::vector<Elem> const &elems);

bool is_normal(PermGroup const &G, Subgroup const &H);

Subgroup intersection(Subgroup const &a, Subgroup const &b);
Subgroup join(Subgroup const &a, Subgroup const &b);

/// Greedy small generating set of G, deterministic.
std::vector<Elem> small_generating_set(PermGroup const &G);

Subgroup derived_subgroup(PermGroup const &G);
Subgroup center(PermGroup const &G);
Subgroup centralizer(PermGroup const &G, std::vector<Elem> const &elems);

/// Orders of the derived series G = G0 > G1 > ... until it stabilizes.
std::vector<std::size_t> derived_series_orders(PermGroup const &G);

std::vector<std::vector<Elem>> const &conjugacy_classes(PermGroup const &G);
std::map<unsigned, std::size_t> element_order_histogram(PermGroup const &G);

/// Indices in `parent` of the elements of `sub`; both groups must act on the
/// same points and `sub` must be contained in `parent`.
std::vector<Elem> embedding(PermGroup const &sub, PermGroup const &parent);

/**
 * Extends `images[k]` (elements of H) for the G-elements `gens[k]` to a map on
 * the subgroup they generate. Entries outside that subgroup stay at
 * `unmapped`. Returns false when the assignment is not a homomorphism.
 */
inline constexpr Elem unmapped = ~Elem(0);
bool extend_homomorphism(PermGroup const &G, PermGroup const &H,
                         std::vector<Elem> const &gens,
                         std::vector<Elem> const &images,
                         std::vector<Elem> &map);

/// Right regular representation: degree |G|, generators as permutations of
/// the element list.
PermGroup regular_representation(PermGroup const &G);

/// Direct product on disjoint point sets.
PermGroup direct_product(std::vector<PermGroup> const &factors);

} // namespace bmclass

#endif // BMCLASS_PERM_GROUP_HPP
