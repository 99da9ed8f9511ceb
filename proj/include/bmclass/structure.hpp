#ifndef BMCLASS_STRUCTURE_HPP
#define BMCLASS_STRUCTURE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "bmclass/perm_group.hpp"

namespace bmclass
{

/// `source / kernel`, realized as the action of `source` on right cosets.
struct QuotientGroup
{
  PermGroup source;
  Subgroup kernel;
  PermGroup quotient;
  /// Image in `quotient` of every source element.
  std::vector<Elem> projection;
  /// Smallest source element over every quotient element.
  std::vector<Elem> lift;

  /// Full preimage of a subgroup of `quotient`.
  Subgroup preimage(Subgroup const &Q) const;
  /// Image of a subgroup of `source`.
  Subgroup image(Subgroup const &H) const;
};

/// Throws NotNormal if N is not normal in G.
QuotientGroup quotient(PermGroup const &G, Subgroup const &N);

struct ExtensionShape
{
  PermGroup whole;
  Subgroup kernel;
  QuotientGroup quotient;
  bool split = false;
  std::optional<Subgroup> complement;
};

ExtensionShape extension_shape(PermGroup const &G, Subgroup const &N);

/// All normal subgroups, sorted by order and then by elements.
std::vector<Subgroup> normal_subgroups(PermGroup const &G);

/// Normal subgroups of prime order.
std::vector<Subgroup> prime_order_normal_subgroups(PermGroup const &G);

/// A subgroup H with H ∩ N = 1 and HN = G, or nothing. The first complement
/// in the search order is returned, so results are deterministic.
std::optional<Subgroup> find_complement(PermGroup const &G, Subgroup const &N);

bool is_abelian(PermGroup const &G);
bool is_nilpotent(PermGroup const &G);
bool is_solvable(PermGroup const &G);
bool is_supersolvable(PermGroup const &G);
bool is_cyclic(PermGroup const &G);

struct ProductDecomposition
{
  /// Indecomposable normal factors; empty for the trivial group.
  std::vector<Subgroup> factors;
};

ProductDecomposition direct_product_decomposition(PermGroup const &G);
bool is_indecomposable(PermGroup const &G);

inline constexpr std::size_t default_aut_budget = 360;

/**
 * Aut(G) as a permutation group on the elements of G: point `x + 1` stands
 * for element `x`, and an automorphism φ moves `x + 1` to `φ(x) + 1`.
 * Throws BudgetExceeded when |G| > budget.
 */
PermGroup automorphism_group(PermGroup const &G, std::size_t budget = default_aut_budget);

/// All automorphisms of G as element maps, in search order.
std::vector<std::vector<Elem>> automorphisms(PermGroup const &G,
                                             std::size_t budget = default_aut_budget);

/// Inn(G) inside the result of automorphism_group.
Subgroup inner_automorphisms(PermGroup const &G, PermGroup const &aut);

/// Center-free and Aut(G) -> Out(G) splits. Throws BudgetExceeded when the
/// automorphism group is out of budget and G is not a power of a single
/// indecomposable group that is.
bool is_almost_complete(PermGroup const &G, std::size_t budget = default_aut_budget);

} // namespace bmclass

#endif // BMCLASS_STRUCTURE_HPP
