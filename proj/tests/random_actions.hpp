#ifndef BMCLASS_TESTS_RANDOM_ACTIONS_HPP
#define BMCLASS_TESTS_RANDOM_ACTIONS_HPP

#include <algorithm>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "bmclass/catalog.hpp"
#include "bmclass/cocycle.hpp"
#include "bmclass/structure.hpp"

namespace testing
{

using namespace bmclass;

/// Groups of order at most 12, one per isomorphism type.
inline std::vector<std::string> const &small_gammas()
{
  static std::vector<std::string> const names{
    "C1", "C2", "C3", "C4", "C2^2", "C5", "C6", "S3", "C7", "C8", "C4xC2", "C2^3", "D4", "Q8",
    "C9", "C3^2", "C10", "D5", "C11", "C12", "C6xC2", "A4", "D6", "Dic3"};
  return names;
}

/// Aut(P) as a permutation group on the elements of P.
struct PowerAut
{
  std::shared_ptr<PowerGroup const> power;
  PermGroup aut;
};

inline PowerAut power_aut(PermGroup const &N, std::size_t t)
{
  auto P = std::make_shared<PowerGroup const>(N, t);
  std::size_t budget = std::max(default_aut_budget, P->group().order());
  return PowerAut{P, automorphism_group(P->group(), budget)};
}

/// A uniformly seeded random homomorphism Γ -> Aut(P), as an action.
inline std::shared_ptr<GammaAction const> random_action(PermGroup const &gamma,
                                                        PowerAut const &pa, std::mt19937 &rng)
{
  auto const &A = pa.aut;
  auto const &gens = gamma.generator_indices();

  std::vector<std::vector<Elem>> candidates(gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k) {
    unsigned ord = gamma.element_order(gens[k]);
    for (Elem a = 0; a < A.order(); ++a)
      if (ord % A.element_order(a) == 0)
        candidates[k].push_back(a);
    std::shuffle(candidates[k].begin(), candidates[k].end(), rng);
  }

  std::vector<Elem> images;
  std::vector<Elem> hom;
  auto search = [&](auto &&self, std::size_t k) -> bool {
    if (k == gens.size())
      return true;
    for (Elem a : candidates[k]) {
      images.push_back(a);
      std::vector<Elem> prefix(gens.begin(), gens.begin() + static_cast<long>(k + 1));
      if (extend_homomorphism(gamma, A, prefix, images, hom) && self(self, k + 1))
        return true;
      images.pop_back();
    }
    return false;
  };
  search(search, 0);
  extend_homomorphism(gamma, A, gens, images, hom);

  // Perm products apply the left factor first, so γ acts through h(γ⁻¹).
  auto const &P = pa.power->group();
  std::vector<ElemMap> maps(gamma.order(), ElemMap(P.order()));
  for (Elem g = 0; g < gamma.order(); ++g) {
    auto const &p = A.element(hom[gamma.inv(g)]);
    for (Elem x = 0; x < P.order(); ++x)
      maps[g][x] = p.image0(x);
  }
  return std::make_shared<GammaAction const>(GammaAction::from_maps(gamma, P, std::move(maps)));
}

} // namespace testing

#endif // BMCLASS_TESTS_RANDOM_ACTIONS_HPP
