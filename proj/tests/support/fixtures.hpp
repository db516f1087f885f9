#pragma once

#include <random>
#include <vector>

#include "contlim/divisibility.hpp"
#include "contlim/mps.hpp"
#include "contlim/projectors.hpp"
#include "contlim/random.hpp"

namespace contlim::testing {

// Random canonical form with D_0 = 0 and total dimension at most max_dim.
inline ProjectorCanonicalForm random_canonical_form(Rng& rng, Index max_dim) {
  std::uniform_int_distribution<Index> pick_dim(1, max_dim);
  const Index dim = pick_dim(rng);
  ProjectorCanonicalForm cf;
  cf.dim = dim;
  cf.d0 = 0;
  Index left = dim;
  while (left > 0) {
    const Index size = std::uniform_int_distribution<Index>(1, left)(rng);
    std::vector<Index> divisors;
    for (Index dk = 1; dk <= size; ++dk)
      if (size % dk == 0) divisors.push_back(dk);
    const Index dk = divisors[std::uniform_int_distribution<std::size_t>(0, divisors.size() - 1)(rng)];
    const Index mk = size / dk;
    cf.blocks.push_back({dk, mk, random_density(rng, mk)});
    left -= size;
  }
  cf.basis_change = random_unitary(rng, dim);
  return cf;
}

// Generator preserving ker P: block-local Hamiltonian and jumps, plus jumps between blocks of
// equal m_k whose sigma-factor is proportional to a unitary.
inline Lindblad random_compatible_generator(Rng& rng, const ProjectorCanonicalForm& cf, double scale = 0.4) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Lindblad g = Lindblad::zero(cf.dim);
  for (std::size_t k = 0; k < cf.blocks.size(); ++k) {
    const auto& b = cf.blocks[k];
    const CMatrix v = cf.block_isometry(k);
    const CMatrix id_d = CMatrix::Identity(b.dk, b.dk), id_m = CMatrix::Identity(b.mk, b.mk);
    g.hamiltonian += scale * v * (kron(random_hermitian(rng, b.dk), id_m) + kron(id_d, random_hermitian(rng, b.mk))) * v.adjoint();
    if (b.dk > 1) g.jumps.push_back(scale * v * kron(random_ginibre(rng, b.dk, b.dk), id_m) * v.adjoint());
    if (b.mk > 1) g.jumps.push_back(scale * v * kron(id_d, random_ginibre(rng, b.mk, b.mk)) * v.adjoint());
    for (std::size_t j = 0; j < cf.blocks.size(); ++j) {
      if (j == k || cf.blocks[j].mk != b.mk) continue;
      const CMatrix w = cf.block_isometry(j);
      const CMatrix a = random_ginibre(rng, cf.blocks[j].dk, b.dk);
      g.jumps.push_back(scale * w * kron(a, random_unitary(rng, b.mk)) * v.adjoint());
    }
  }
  g.hamiltonian = hermitian_part(g.hamiltonian);
  return g;
}

struct DivisibleSample {
  ProjectorCanonicalForm form;
  SuperOp projector;
  Lindblad generator;
  SuperOp channel;
  MpsTensor tensor;
};

inline DivisibleSample random_divisible(Rng& rng, Index max_dim, double spacing = 1.0) {
  DivisibleSample s;
  s.form = random_canonical_form(rng, max_dim);
  s.projector = build_projector(s.form);
  s.generator = random_compatible_generator(rng, s.form);
  s.channel = {s.form.dim, s.projector.matrix * channel_at(s.generator, spacing).matrix};
  const KrausChannel k = superop_to_kraus(s.channel, 1e-12);
  s.tensor = {static_cast<Index>(k.kraus.size()), s.form.dim, k.kraus, spacing};
  return s;
}

}  // namespace contlim::testing
