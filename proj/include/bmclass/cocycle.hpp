#ifndef BMCLASS_COCYCLE_HPP
#define BMCLASS_COCYCLE_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "bmclass/perm_group.hpp"

namespace bmclass
{

/// An endomorphism of a group as an element map (index -> index).
using ElemMap = std::vector<Elem>;

/// A tuple (e_0, ..., e_{t-1}) of elements of one group.
using Tuple = std::vector<Elem>;

ElemMap compose(ElemMap const &f, ElemMap const &g); // f after g
ElemMap inverse_map(ElemMap const &f);
ElemMap identity_map(std::size_t n);
bool is_automorphism(PermGroup const &N, ElemMap const &f);

/**
 * A left action of a finite group Γ on a group N by automorphisms, stored as
 * one map per element of Γ: (γζ).n = γ.(ζ.n).
 */
class GammaAction
{
public:
  /// Extends generator images (one per `gamma.generator_indices()` entry)
  /// and verifies every product. Throws std::invalid_argument otherwise.
  static GammaAction from_generators(PermGroup gamma, PermGroup target,
                                     std::vector<ElemMap> const &images);
  /// Verifies the homomorphism law on all pairs.
  static GammaAction from_maps(PermGroup gamma, PermGroup target, std::vector<ElemMap> maps);
  static GammaAction trivial(PermGroup gamma, PermGroup target);

  PermGroup const &gamma() const { return _gamma; }
  PermGroup const &target() const { return _target; }
  ElemMap const &map(Elem g) const { return _maps[g]; }
  Elem act(Elem g, Elem n) const { return _maps[g][n]; }
  bool is_trivial() const;

  /// action(γζ) == action(γ) o action(ζ) for all pairs, and every map is an
  /// automorphism.
  bool verify() const;

private:
  GammaAction(PermGroup gamma, PermGroup target, std::vector<ElemMap> maps);

  PermGroup _gamma;
  PermGroup _target;
  std::vector<ElemMap> _maps;
};

/// a: Γ -> N with a_{γζ} = a_γ · γ.a_ζ.
struct Cocycle
{
  std::shared_ptr<GammaAction const> action;
  std::vector<Elem> values;

  Elem operator()(Elem g) const { return values[g]; }
};

bool is_cocycle(GammaAction const &act, std::vector<Elem> const &values);

inline constexpr std::size_t cocycle_gamma_budget = 24;
inline constexpr std::size_t cocycle_target_budget = 60;

/// Z¹(Γ, N) in a deterministic order. Throws BudgetExceeded beyond
/// |Γ| = 24 or |N| = 60.
std::vector<Cocycle> enumerate_cocycles(std::shared_ptr<GammaAction const> act);
std::vector<Cocycle> enumerate_cocycles(GammaAction const &act);

/// Some n with b_γ = n⁻¹ a_γ γ.n for all γ.
bool cohomologous(Cocycle const &a, Cocycle const &b);

/// γ * n = s_γ (γ.n) s_γ⁻¹. Throws CocycleInvalid if s is not a cocycle.
GammaAction twist_action(GammaAction const &act, Cocycle const &s);

/**
 * σ ↦ β(σ) α(σ)⁻¹ for homomorphisms α, β: Γ -> E (element maps), as a
 * cocycle of Γ acting on H by σ.h = α(σ) h α(σ)⁻¹. H is realized as
 * `H.as_group()`. Throws NotCoequalized if some value lies outside H.
 */
Cocycle difference_cocycle(PermGroup const &gamma, PermGroup const &E,
                           std::vector<Elem> const &alpha, std::vector<Elem> const &beta,
                           Subgroup const &H);

/// Right cosets Δγ with representatives ε_i, ε_0 = 1, and the factors
/// ε_i γ = δ_i(γ) ε_{i.γ}.
class CosetSystem
{
public:
  CosetSystem(PermGroup gamma, Subgroup delta);

  PermGroup const &gamma() const { return _gamma; }
  Subgroup const &delta() const { return _delta; }
  std::size_t size() const { return _reps.size(); }
  Elem rep(std::size_t i) const { return _reps[i]; }
  std::size_t coset_of(Elem g) const { return _coset[g]; }
  /// i.γ
  std::size_t next(std::size_t i, Elem g) const { return _next[i * _gamma.order() + g]; }
  /// δ_i(γ) as an element of Γ.
  Elem factor(std::size_t i, Elem g) const { return _factor[i * _gamma.order() + g]; }
  /// ρ(γ): i ↦ i.γ⁻¹.
  std::vector<std::size_t> rho(Elem g) const;

  /// ε_i γ = δ_i(γ) ε_{i.γ} everywhere and ρ is a homomorphism.
  bool verify() const;

private:
  PermGroup _gamma;
  Subgroup _delta;
  std::vector<Elem> _reps;
  std::vector<std::size_t> _coset;
  std::vector<std::size_t> _next;
  std::vector<Elem> _factor;
};

/**
 * Γ acting on N^t by (γ.e)_j = aut(γ, j)(e_{src(γ, j)}). The group N^t is
 * never materialized, so t may be large.
 */
class MonomialAction
{
public:
  MonomialAction(PermGroup gamma, PermGroup target, std::size_t t, std::vector<std::size_t> src,
                 std::vector<ElemMap> auts, std::vector<std::size_t> aut_index);

  PermGroup const &gamma() const { return _gamma; }
  PermGroup const &target() const { return _target; }
  std::size_t width() const { return _t; }
  std::size_t src(Elem g, std::size_t j) const { return _src[g * _t + j]; }
  ElemMap const &aut(Elem g, std::size_t j) const { return _auts[_aut[g * _t + j]]; }
  Tuple act(Elem g, Tuple const &e) const;

  /// Exhaustive check of the action law on the monomial data.
  bool verify() const;

private:
  PermGroup _gamma;
  PermGroup _target;
  std::size_t _t;
  std::vector<std::size_t> _src;
  std::vector<ElemMap> _auts;
  std::vector<std::size_t> _aut;
};

/// Ind_Δ^Γ N identified with N^{Δ\Γ} through f ↦ (f(ε_i))_i.
struct InducedGroup
{
  /// Δ (as a standalone group) acting on N.
  std::shared_ptr<GammaAction const> base;
  CosetSystem system;
  MonomialAction carrier;
  /// Γ index -> index in base->gamma() for elements of Δ, else `unmapped`.
  std::vector<Elem> to_delta;
  /// base->gamma() index -> Γ index.
  std::vector<Elem> from_delta;

  /// δ.n for δ ∈ Δ given by its Γ index.
  Elem delta_act(Elem d, Elem n) const { return base->act(to_delta[d], n); }
};

/// Throws std::invalid_argument if the action's group is not Δ.
InducedGroup build_induced(std::shared_ptr<GammaAction const> delta_action, CosetSystem system);

/// Values a_γ ∈ N^t flattened as `values[γ * t + j]`.
struct TupleCocycle
{
  std::shared_ptr<InducedGroup const> parent;
  std::vector<Elem> values;

  /// e_i(γ)
  Elem e(std::size_t i, Elem g) const { return values[g * parent->carrier.width() + i]; }
};

bool is_cocycle(MonomialAction const &act, std::vector<Elem> const &values);

/**
 * Calls `visit` on every cocycle of Γ with values in N^t, in a
 * deterministic order, by backtracking over the coordinates of the values
 * on a generating set. Throws BudgetExceeded after `max_count` cocycles.
 * Returns the count.
 */
std::size_t for_each_cocycle(MonomialAction const &act,
                             std::function<void(std::vector<Elem> const &)> const &visit,
                             std::size_t max_count = 10'000'000);

std::vector<TupleCocycle> enumerate_cocycles(std::shared_ptr<InducedGroup const> ind,
                                             std::size_t max_count = 1'000'000);

/// δ ↦ e_0(δ) on Δ: a cocycle of the base action.
Cocycle shapiro(TupleCocycle const &c);
Cocycle shapiro(std::shared_ptr<InducedGroup const> const &ind, std::vector<Elem> const &values);

/**
 * Checks, for every coordinate i and every γ,
 *   e_i(γ) = δ_0(ε_i)⁻¹.[e_0(ε_i)⁻¹ e_0(δ_i(γ)) (δ_0(δ_i(γ)).e_0(ε_{i.γ}))].
 */
bool check_component_formula(InducedGroup const &ind, std::vector<Elem> const &values);
bool check_component_formula(TupleCocycle const &c);

/// N^t as a permutation group on t disjoint copies of N's points, with the
/// coordinate maps.
class PowerGroup
{
public:
  PowerGroup(PermGroup N, std::size_t t);

  PermGroup const &base() const { return _N; }
  std::size_t width() const { return _t; }
  PermGroup const &group() const { return _P; }
  Elem element(Tuple const &e) const;
  Tuple const &tuple(Elem x) const { return _tuples[x]; }
  /// n placed at coordinate j, identity elsewhere.
  Elem embed(std::size_t j, Elem n) const;

private:
  PermGroup _N;
  std::size_t _t;
  PermGroup _P;
  std::vector<Tuple> _tuples;
  std::vector<Elem> _index; // mixed radix tuple code -> element
};

/// n ↦ x⁻¹ n x on N. Throws std::invalid_argument unless x normalizes N.
ElemMap conjugation_map(PermGroup const &N, Perm const &x);

/// (n_i) ↦ (φ_i(n_{σ⁻¹(i)}))_i with σ a permutation of 0..t-1.
ElemMap wreath_automorphism(PowerGroup const &P, std::vector<ElemMap> const &phis,
                            Perm const &sigma);

/**
 * ι: Aut(N)^t ⋊ S_t -> Aut(N^t), ((φ_i), σ) ↦ [(n_i) ↦ (φ_i(n_{σ⁻¹(i)}))_i].
 * Source elements are numbered `perm * |Aut(N)|^t + Σ_i φ_i |Aut(N)|^i`.
 */
struct BidwellMap
{
  PowerGroup power;
  std::vector<ElemMap> aut_n;
  /// S_t as permutations of 0..t-1 (as Perm on t points).
  std::vector<Perm> perms;
  std::size_t source_order = 0;
  /// |Aut(N^t)| by brute force.
  std::size_t target_order = 0;
  bool injective = false;
  bool surjective = false;

  ElemMap operator()(std::vector<std::size_t> const &phis, std::size_t perm) const;
  ElemMap image(std::size_t source) const;
  std::size_t source_product(std::size_t x, std::size_t y) const;
  /// ι(x) o ι(y) == ι(xy) for all pairs (checked on generators of N^t).
  bool is_homomorphism() const;
};

/// Throws BudgetExceeded if |N^t| exceeds `budget` for the brute-force
/// enumeration of Aut(N^t).
BidwellMap bidwell_iso(PermGroup const &N, std::size_t t, std::size_t budget = 1024);

/// One orbit of the coordinate permutation action.
struct OrbitPiece
{
  std::size_t rep = 0;
  /// orbit[c] = rep.ε_c: the coordinate matching coset c.
  std::vector<std::size_t> orbit;
  Subgroup stabilizer;
  /// θ_i: Γ_i -> Aut(N).
  GammaAction theta;
  std::shared_ptr<InducedGroup const> induced;
  /// χ_i o ω_i coordinatewise: coset c's entry goes to orbit[c] through
  /// this automorphism of N.
  std::vector<ElemMap> correction;
};

struct FormDecomposition
{
  std::shared_ptr<PowerGroup const> power;
  std::shared_ptr<GammaAction const> input;
  /// ψ(γ) on coordinates: factor j goes to factor psi[γ][j].
  std::vector<std::vector<std::size_t>> psi;
  std::vector<OrbitPiece> pieces;

  /// Maps one element of each induced carrier into N^t.
  Elem assemble(std::vector<Tuple> const &parts) const;
  /// The assembled map is a bijective homomorphism and Γ-equivariant on
  /// every (γ, element) pair.
  bool verify() const;
};

/// Throws FactorNotPreserved if some γ does not permute the factors.
FormDecomposition decompose_form(std::shared_ptr<PowerGroup const> power,
                                 std::shared_ptr<GammaAction const> act);

} // namespace bmclass

#endif // BMCLASS_COCYCLE_HPP
