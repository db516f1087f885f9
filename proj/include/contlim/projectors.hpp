#pragma once

#include <cstdint>
#include <vector>

#include "contlim/lindblad.hpp"

namespace contlim {

struct ProjectorBlock {
  Index dk = 1;
  Index mk = 1;
  CMatrix sigma;  // mk x mk positive definite, unit trace
};

// P(rho) = U (0 (+) sum_k M_{D_k} (x) sigma_k) U^dagger. Columns of U are ordered as the
// D_0 block first, then block k occupying D_k * m_k columns in (D_k index, m_k index) order.
struct ProjectorCanonicalForm {
  Index dim = 0;
  CMatrix basis_change;
  Index d0 = 0;
  std::vector<ProjectorBlock> blocks;

  void validate(double tol = kDefaultTol) const;
  // Isometry V_k (dim x D_k m_k) onto block k.
  CMatrix block_isometry(std::size_t k) const;
  Index block_offset(std::size_t k) const;
};

SuperOp build_projector(const ProjectorCanonicalForm& cf);
ProjectorCanonicalForm canonical_form(const SuperOp& p, double tol = kDefaultTol, std::uint64_t seed = 0);

// H = 0 and ladder jumps per block; requires D_0 = 0.
Lindblad thermo_liouvillian(const ProjectorCanonicalForm& cf);

struct ThermoReport {
  std::vector<double> times;
  std::vector<double> distances;
  bool converged = false;
};

ThermoReport verify_thermo_limit(const SuperOp& p, const Lindblad& g, const std::vector<double>& t_grid,
                                 double tol = kDefaultTol);

}  // namespace contlim
