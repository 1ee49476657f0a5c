#pragma once

#include <random>

#include "covfield/interpolation.hpp"

namespace testutil {

// Random k-point domain, k observation points and m full-support endpoint pmfs. The mix with
// the uniform pmf keeps every endpoint operator comfortably positive definite.
inline covfield::InterpProblem random_problem(std::uint64_t seed, covfield::Invariant::Kind kind,
                                              std::size_t k = 6, std::size_t m = 2) {
  using namespace covfield;
  Rng rng(seed);
  InterpProblem p;
  p.domain = uniform_sample(rng, k);
  p.obs = uniform_sample(rng, k);
  for (std::size_t s = 0; s < m; ++s) {
    auto w = dirichlet_draw(k, rng);
    for (auto& v : w) v = 0.85 * v + 0.15 / double(k);
    p.endpoints.push_back(Pmf::normalized(w));
  }
  p.alpha = dirichlet_draw(m, rng);
  p.alpha = Pmf::normalized(p.alpha).vec();
  p.invariant = kind;
  p.weight = default_weight(kind);
  return p;
}

}  // namespace testutil
