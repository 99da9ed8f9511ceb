#ifndef BMCLASS_CATALOG_HPP
#define BMCLASS_CATALOG_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "bmclass/database.hpp"
#include "bmclass/perm_group.hpp"

namespace bmclass
{

/// Isomorphism invariants; equal for isomorphic groups.
struct Fingerprint
{
  std::size_t order = 0;
  std::map<unsigned, std::size_t> order_histogram;
  std::vector<std::size_t> class_sizes;
  /// (element order, class size) over all classes, sorted.
  std::vector<std::pair<unsigned, std::size_t>> class_types;
  std::vector<std::size_t> derived_series;
  std::size_t center_order = 0;
  std::vector<std::size_t> abelian_invariants;

  bool operator==(Fingerprint const &) const = default;
  auto operator<=>(Fingerprint const &) const = default;
};

Fingerprint fingerprint(PermGroup const &G);

/// Prime-power orders of the cyclic factors of an abelian group, sorted.
std::vector<std::size_t> abelian_invariants(PermGroup const &A);

inline constexpr std::size_t default_iso_node_cap = 10'000'000;

/**
 * An isomorphism G -> H as an element map (G index -> H index), verified to
 * be a bijective homomorphism, or nothing. Throws BudgetExceeded when the
 * search visits more than `node_cap` nodes.
 */
std::optional<std::vector<Elem>> find_isomorphism(PermGroup const &G, PermGroup const &H,
                                                  std::size_t node_cap = default_iso_node_cap);

bool are_isomorphic(PermGroup const &G, PermGroup const &H);

/**
 * Builds a named group. Grammar:
 *   Cn, Dn (order 2n), Dicn (order 4n), Sn, An, Q8, Hep, GL3(2),
 *   SL2(q), GL2(q), PSL2(q), PGL2(q) for prime q, 2^(1+2n)+ and 2^(1+2n)-,
 *   X^k for a k-fold direct power, products joined by `x` or `×`,
 *   `N:Q@act` for a semidirect product, and SmallGroup(order,index).
 *
 * `act` lists, for each generator q of Q, the images n^q = q^-1 n q of N's
 * generators as `;`-separated cycles; blocks for different generators of Q
 * are separated by `|`. Throws UnknownName, or AmbiguousAction for `N:Q` without `@act`.
 */
PermGroup make_named(std::string_view name, Database const *db = nullptr);

/// make_named through a process-wide cache; `name` must not need a database.
PermGroup const &named_group(std::string const &name);

/// The record isomorphic to G. Throws OrderNotInDatabase when the database
/// holds nothing of order |G| and does not declare that order complete.
std::optional<GroupId> identify(PermGroup const &G, Database const &db);

struct PowerProductShape
{
  unsigned t0 = 0;
  /// (n, multiplicity), n ascending, n not in {2, 6}.
  std::vector<std::pair<unsigned, unsigned>> symmetric;

  bool operator==(PowerProductShape const &) const = default;
};

/// Recognizes N ≅ A5^t0 × ∏ S_{n_i}^{t_i} with every n_i ∉ {2, 6}.
std::optional<PowerProductShape> recognize_symmetric_or_A5_power_product(PermGroup const &N);

/// n such that G ≅ S_n, for n ≤ 7.
std::optional<unsigned> symmetric_degree(PermGroup const &G);

} // namespace bmclass

#endif // BMCLASS_CATALOG_HPP
